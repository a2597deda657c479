#include "irbench/leaderboard_server.hpp"

#include <cstdlib>
#include <sstream>

#include <fmt/format.h>
#include <httplib.h>

#include "irbench/errors.hpp"

namespace irbench {

using nlohmann::json;

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

long parse_positive(const char* name, const std::string& text) {
    try {
        std::size_t used = 0;
        long v = std::stol(text, &used);
        if (used == text.size() && v >= 0) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw DataError(fmt::format("{} must be a non-negative integer (got \"{}\")", name, text));
}

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(2) + "\n", "application/json");
}

json error_body(const std::string& message) { return json{{"error", message}}; }

}  // namespace

void apply_env_overrides(ServerConfig& config) {
    if (const char* v = std::getenv("IRBENCH_DATA_DIR"); v != nullptr && *v != '\0') {
        config.data_dir = v;
    }
    if (const char* v = std::getenv("IRBENCH_BIND"); v != nullptr && *v != '\0') {
        config.bind = v;
    }
    if (const char* v = std::getenv("IRBENCH_PORT"); v != nullptr && *v != '\0') {
        config.port = static_cast<int>(parse_positive("IRBENCH_PORT", v));
    }
    if (const char* v = std::getenv("IRBENCH_RATE_LIMIT_HOURS"); v != nullptr && *v != '\0') {
        config.rate_window = std::chrono::hours(parse_positive("IRBENCH_RATE_LIMIT_HOURS", v));
    }
    if (const char* v = std::getenv("IRBENCH_REGISTRY"); v != nullptr && *v != '\0') {
        config.registry = v;
    }
}

ServerConfig load_server_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open config {}", path.string()));
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
    const auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    ServerConfig c;
    try {
        if (j.contains("data_dir")) {
            c.data_dir = resolve(base, j["data_dir"].get<std::string>());
        }
        c.bind = j.value("bind", c.bind);
        c.port = j.value("port", c.port);
        if (j.contains("rate_limit_hours")) {
            c.rate_window = std::chrono::hours(j["rate_limit_hours"].get<long>());
        }
        if (j.contains("registry")) {
            c.registry = resolve(base, j["registry"].get<std::string>());
        }
        c.workers = j.value("workers", c.workers);
        c.policy.min_depth = j.value("min_depth", c.policy.min_depth);
        c.policy.max_depth = j.value("max_depth", c.policy.max_depth);
        const auto users = j.value("users", json::object());
        for (const auto& [user, token] : users.items()) {
            c.tokens[token.get<std::string>()] = user;
        }
        const auto qrels = j.value("qrels", json::object());
        for (const auto& [dataset, p] : qrels.items()) {
            c.qrels[dataset] = resolve(base, p.get<std::string>());
        }
    } catch (const json::exception& e) {
        throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
    apply_env_overrides(c);
    c.policy.validate();
    return c;
}

struct LeaderboardServer::Impl {
    LeaderboardService& service;
    std::map<std::string, std::string> tokens;
    httplib::Server http;

    Impl(LeaderboardService& s, std::map<std::string, std::string> t) : service(s), tokens(std::move(t)) {}

    std::optional<std::string> user_of(const httplib::Request& req) const {
        const auto header = req.get_header_value("Authorization");
        constexpr std::string_view prefix = "Bearer ";
        if (header.rfind(prefix, 0) != 0) {
            return std::nullopt;
        }
        auto it = tokens.find(header.substr(prefix.size()));
        if (it == tokens.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    void routes() {
        http.Post("/api/submissions", [this](const httplib::Request& req, httplib::Response& res) {
            auto user = user_of(req);
            if (!user) {
                send_json(res, 401, error_body("missing or unknown bearer token"));
                return;
            }
            if (!req.is_multipart_form_data()) {
                send_json(res, 400, error_body("expected multipart/form-data"));
                return;
            }
            std::string model_name;
            std::string visibility = "public";
            std::map<std::string, std::string> runs;
            for (const auto& [name, part] : req.files) {
                if (name == "model_name") {
                    model_name = part.content;
                } else if (name == "visibility") {
                    visibility = part.content;
                } else {
                    runs[name] = part.content;
                }
            }
            if (model_name.empty()) {
                send_json(res, 400, error_body("model_name is required"));
                return;
            }
            Visibility vis;
            try {
                vis = parse_visibility(visibility);
            } catch (const DataError& e) {
                send_json(res, 400, error_body(e.what()));
                return;
            }
            auto outcome = service.submit(*user, model_name, vis, runs);
            switch (outcome.result) {
                case SubmitResult::accepted:
                    res.set_header("Location", "/api/submissions/" + outcome.id);
                    send_json(res, 202, json{{"id", outcome.id}, {"status", "pending"}});
                    return;
                case SubmitResult::rejected: {
                    json body = {{"id", outcome.id}, {"status", "rejected"}, {"rejections", json::array()}};
                    for (const auto& r : outcome.rejections) {
                        json item = {{"kind", to_string(r.kind)}, {"dataset", r.dataset}, {"detail", r.detail}};
                        if (!r.query_id.empty()) {
                            item["query_id"] = r.query_id;
                        }
                        body["rejections"].push_back(std::move(item));
                    }
                    send_json(res, 400, body);
                    return;
                }
                case SubmitResult::rate_limited:
                    res.set_header("Retry-After", std::to_string(outcome.retry_after.count()));
                    send_json(res, 429, json{{"error", "one submission per rate-limit window"},
                                             {"retry_after", outcome.retry_after.count()}});
                    return;
            }
        });

        http.Get(R"(/api/submissions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            auto record = service.get(req.matches[1]);
            auto user = user_of(req);
            if (!record || (record->visibility == Visibility::private_entry && user != record->user)) {
                send_json(res, 404, error_body("no such submission"));
                return;
            }
            send_json(res, 200, to_json(*record));
        });

        http.Delete(R"(/api/submissions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
            auto user = user_of(req);
            if (!user) {
                send_json(res, 401, error_body("missing or unknown bearer token"));
                return;
            }
            const std::string id = req.matches[1];
            switch (service.withdraw(*user, id)) {
                case WithdrawResult::withdrawn:
                    send_json(res, 200, json{{"id", id}, {"status", "withdrawn"}});
                    return;
                case WithdrawResult::not_found:
                    send_json(res, 404, error_body("no such submission"));
                    return;
                case WithdrawResult::forbidden:
                    send_json(res, 403, error_body("only the owner can withdraw a submission"));
                    return;
                case WithdrawResult::already_withdrawn:
                    send_json(res, 409, error_body("submission is already withdrawn or rejected"));
                    return;
            }
        });

        http.Get("/api/leaderboard", [this](const httplib::Request&, httplib::Response& res) {
            send_json(res, 200, service.board_json());
        });

        http.Get("/api/datasets", [this](const httplib::Request&, httplib::Response& res) {
            json rows = json::array();
            for (const auto& d : service.datasets()) {
                rows.push_back({{"name", d.name},
                                {"slug", d.slug},
                                {"num_queries", d.num_queries},
                                {"num_judgments", d.num_judgments},
                                {"num_passages", d.num_passages},
                                {"task", d.task},
                                {"domain", d.domain},
                                {"display_order", d.display_order}});
            }
            send_json(res, 200, rows);
        });

        http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
            std::string what = "internal error";
            try {
                std::rethrow_exception(ep);
            } catch (const std::exception& e) {
                what = e.what();
            } catch (...) {
            }
            send_json(res, 500, error_body(what));
        });
    }
};

LeaderboardServer::LeaderboardServer(LeaderboardService& service, std::map<std::string, std::string> tokens)
    : m_impl(std::make_unique<Impl>(service, std::move(tokens))) {
    m_impl->routes();
}

LeaderboardServer::~LeaderboardServer() { stop(); }

int LeaderboardServer::bind(const std::string& host, int port) {
    if (port == 0) {
        int bound = m_impl->http.bind_to_any_port(host);
        if (bound < 0) {
            throw DataError(fmt::format("cannot bind {}", host));
        }
        return bound;
    }
    if (!m_impl->http.bind_to_port(host, port)) {
        throw DataError(fmt::format("cannot bind {}:{}", host, port));
    }
    return port;
}

void LeaderboardServer::listen() { m_impl->http.listen_after_bind(); }

void LeaderboardServer::stop() {
    if (m_impl && m_impl->http.is_running()) {
        m_impl->http.stop();
    }
}

void LeaderboardServer::wait_until_ready() { m_impl->http.wait_until_ready(); }

namespace {

httplib::Client make_client(const std::string& server) {
    httplib::Client client(server);
    client.set_connection_timeout(5, 0);
    client.set_read_timeout(60, 0);
    return client;
}

SubmissionResponse to_response(const std::string& server, httplib::Result& result) {
    if (!result) {
        throw DataError(fmt::format("cannot connect to leaderboard at {}: {}", server,
                                    httplib::to_string(result.error())));
    }
    SubmissionResponse out;
    out.http_status = result->status;
    try {
        out.body = json::parse(result->body);
    } catch (const json::exception&) {
        out.body = json{{"error", result->body}};
    }
    return out;
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot open {}", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

SubmissionResponse post_submission(const std::string& server, const std::string& token,
                                   const std::string& model_name, Visibility visibility,
                                   const std::map<std::string, std::filesystem::path>& runs) {
    httplib::MultipartFormDataItems items;
    items.push_back({"model_name", model_name, "", "text/plain"});
    items.push_back({"visibility", to_string(visibility), "", "text/plain"});
    for (const auto& [dataset, path] : runs) {
        items.push_back({dataset, slurp(path), path.filename().string(), "text/plain"});
    }
    auto client = make_client(server);
    httplib::Headers headers = {{"Authorization", "Bearer " + token}};
    auto result = client.Post("/api/submissions", headers, items);
    return to_response(server, result);
}

SubmissionResponse get_submission(const std::string& server, const std::string& id,
                                  const std::string& token) {
    auto client = make_client(server);
    httplib::Headers headers;
    if (!token.empty()) {
        headers.emplace("Authorization", "Bearer " + token);
    }
    auto result = client.Get("/api/submissions/" + id, headers);
    return to_response(server, result);
}

}  // namespace irbench
