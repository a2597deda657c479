#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include <json.hpp>

#include "irbench/leaderboard.hpp"

namespace irbench {

struct ServerConfig {
    std::filesystem::path data_dir = "leaderboard-data";
    std::string bind = "127.0.0.1";
    int port = 8080;
    std::chrono::seconds rate_window = std::chrono::hours(24);
    std::filesystem::path registry;  // empty: built-in 18 datasets
    std::size_t workers = 2;
    ValidationPolicy policy;
    std::map<std::string, std::string> tokens;  // bearer token -> user
    std::map<std::string, std::filesystem::path> qrels;  // dataset name or slug -> path
};

/// Reads the JSON config file (relative paths resolve against its directory),
/// then applies IRBENCH_DATA_DIR, IRBENCH_BIND, IRBENCH_PORT,
/// IRBENCH_RATE_LIMIT_HOURS and IRBENCH_REGISTRY from the environment.
ServerConfig load_server_config(const std::filesystem::path& path);
void apply_env_overrides(ServerConfig& config);

/// HTTP front end for a LeaderboardService.
class LeaderboardServer {
  public:
    LeaderboardServer(LeaderboardService& service, std::map<std::string, std::string> tokens);
    ~LeaderboardServer();

    /// Binds `host:port`; port 0 picks a free port. Returns the bound port.
    int bind(const std::string& host, int port);
    /// Serves until stop() is called.
    void listen();
    void stop();
    void wait_until_ready();

  private:
    struct Impl;
    std::unique_ptr<Impl> m_impl;
};

struct SubmissionResponse {
    int http_status = 0;
    nlohmann::json body;
};

/// Client side: uploads run files to a running service. Throws DataError when
/// the server cannot be reached.
SubmissionResponse post_submission(const std::string& server, const std::string& token,
                                   const std::string& model_name, Visibility visibility,
                                   const std::map<std::string, std::filesystem::path>& runs);
SubmissionResponse get_submission(const std::string& server, const std::string& id,
                                  const std::string& token = {});

}  // namespace irbench
