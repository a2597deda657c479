#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "irbench/dataset.hpp"

namespace irbench {

using Timestamp = std::chrono::sys_seconds;

/// "2026-10-16T08:30:00Z"
std::string format_timestamp(Timestamp t);
Timestamp parse_timestamp(std::string_view text);

enum class Visibility { public_entry, private_entry };
enum class SubmissionStatus { pending, scored, rejected, withdrawn };

std::string to_string(Visibility v);
std::string to_string(SubmissionStatus s);
Visibility parse_visibility(std::string_view text);

enum class RejectionKind { DepthOutOfRange, UnknownQuery, MissingDataset, MalformedRun };

std::string to_string(RejectionKind k);

struct Rejection {
    RejectionKind kind = RejectionKind::MalformedRun;
    std::string dataset;   // registry display name, or the part name when unresolvable
    std::string query_id;  // empty when not query specific
    std::string detail;

    bool operator==(const Rejection&) const = default;
};

struct ValidationPolicy {
    std::size_t min_depth = 10;
    std::size_t max_depth = 100;

    void validate() const;
};

/// dataset display name -> judgments
using QrelsStore = std::map<std::string, QrelSet>;

struct ValidationReport {
    std::vector<Rejection> rejections;
    /// Filtered runs keyed by registry display name. Complete only when ok().
    std::map<std::string, Ranking> runs;
    std::size_t self_retrievals_removed = 0;

    [[nodiscard]] bool ok() const { return rejections.empty(); }
};

/// Drops every result whose doc id equals its query id and renumbers ranks.
/// Returns the number of results removed.
std::size_t remove_self_retrievals(Ranking& run);

/// Checks uploaded run texts (keyed by dataset name or slug). Per dataset the
/// self-retrieval filter runs first, then the depth check, then unknown query
/// ids; finally every registry dataset must be present.
ValidationReport validate_submission(const std::map<std::string, std::string>& run_texts,
                                     std::span<const DatasetSpec> specs, const QrelsStore& qrels,
                                     const ValidationPolicy& policy = {});

struct LeaderboardEntry {
    std::string submission_id;
    std::string model_name;
    std::string user;
    Timestamp submitted_at{};
    std::map<std::string, double> ndcg_at_10;  // dataset display name -> value
    std::map<std::string, double> recall_at_100;
    double macro_ndcg_at_10 = 0.0;
    double macro_recall_at_100 = 0.0;
    /// Every query of every dataset returned exactly 100 results.
    bool recall_available = false;

    bool operator==(const LeaderboardEntry&) const = default;
};

nlohmann::json to_json(const LeaderboardEntry& e);
LeaderboardEntry entry_from_json(const nlohmann::json& j);

struct SubmissionRecord {
    std::string id;
    std::string user;
    std::string model_name;
    Visibility visibility = Visibility::public_entry;
    Timestamp created_at{};
    SubmissionStatus status = SubmissionStatus::pending;
    std::vector<Rejection> rejections;
    std::optional<LeaderboardEntry> entry;
    std::string diagnostic;  // last scoring failure, if any
    std::optional<Timestamp> withdrawn_at;

    bool operator==(const SubmissionRecord&) const = default;
};

nlohmann::json to_json(const SubmissionRecord& r);

/// Scores validated runs: nDCG@10 over the complete query set per dataset,
/// recall@100 alongside, macro averages over every registry dataset.
LeaderboardEntry score_submission(const SubmissionRecord& submission,
                                  const std::map<std::string, Ranking>& runs,
                                  std::span<const DatasetSpec> specs, const QrelsStore& qrels);

struct RateDecision {
    bool allowed = true;
    std::chrono::seconds retry_after{0};
};

/// Denies when `user` has a submission that was not rejected inside the
/// rolling window ending at `now`. Withdrawn submissions still count.
RateDecision check_rate_limit(const std::string& user, Timestamp now,
                              const std::map<std::string, SubmissionRecord>& submissions,
                              std::chrono::seconds window = std::chrono::hours(24));

/// Public scored entries ordered by macro nDCG@10 descending, then earlier
/// submission, then id.
std::vector<LeaderboardEntry> build_board(const std::map<std::string, SubmissionRecord>& submissions);
nlohmann::json board_to_json(const std::vector<LeaderboardEntry>& board);

/// Append-only line-delimited event log. Appends are serialized and flushed.
class Journal {
  public:
    explicit Journal(std::filesystem::path path);

    void append(const nlohmann::json& event);
    [[nodiscard]] const std::filesystem::path& path() const { return m_path; }

  private:
    std::filesystem::path m_path;
    std::mutex m_mutex;
    std::ofstream m_out;
};

/// Folds a journal into submission records. A truncated final line (a crash
/// mid-append) is ignored; any other malformed line is a DataError.
std::map<std::string, SubmissionRecord> replay_journal(const std::filesystem::path& path);

/// Fixed-size worker pool with a FIFO queue.
class WorkerPool {
  public:
    explicit WorkerPool(std::size_t workers);
    ~WorkerPool();
    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    void post(std::function<void()> job);
    /// Blocks until the queue is empty and no job is running.
    void wait_idle();

  private:
    void loop();

    std::mutex m_mutex;
    std::condition_variable m_wake;
    std::condition_variable m_idle;
    std::deque<std::function<void()>> m_queue;
    std::size_t m_running = 0;
    bool m_stop = false;
    std::vector<std::thread> m_threads;
};

struct ServiceOptions {
    std::filesystem::path data_dir;
    std::chrono::seconds rate_window = std::chrono::hours(24);
    ValidationPolicy policy;
    std::size_t workers = 2;
};

enum class SubmitResult { accepted, rejected, rate_limited };

struct SubmitOutcome {
    SubmitResult result = SubmitResult::accepted;
    std::string id;                       // empty when rate limited
    std::vector<Rejection> rejections;
    std::chrono::seconds retry_after{0};
};

enum class WithdrawResult { withdrawn, not_found, forbidden, already_withdrawn };

/// Submission protocol state: journal, stored run files, scoring pool and the
/// published board snapshot under data_dir.
class LeaderboardService {
  public:
    using Clock = std::function<Timestamp()>;

    LeaderboardService(std::vector<DatasetSpec> specs, QrelsStore qrels, ServiceOptions options,
                       Clock clock = {});
    ~LeaderboardService();

    SubmitOutcome submit(const std::string& user, const std::string& model_name, Visibility visibility,
                         const std::map<std::string, std::string>& run_texts);
    [[nodiscard]] std::optional<SubmissionRecord> get(const std::string& id) const;
    WithdrawResult withdraw(const std::string& user, const std::string& id);

    [[nodiscard]] std::vector<LeaderboardEntry> board() const;
    [[nodiscard]] nlohmann::json board_json() const;
    [[nodiscard]] std::span<const DatasetSpec> datasets() const { return m_specs; }

    [[nodiscard]] std::filesystem::path journal_path() const;
    [[nodiscard]] std::filesystem::path board_path() const;

    /// Waits for queued scoring jobs to finish.
    void wait_idle();

  private:
    void enqueue_scoring(const std::string& id, std::map<std::string, Ranking> runs);
    void publish_board_locked();
    void store_runs(const std::string& id, const std::map<std::string, std::string>& run_texts);
    std::map<std::string, std::string> load_stored_runs(const std::string& id) const;

    std::vector<DatasetSpec> m_specs;
    QrelsStore m_qrels;
    ServiceOptions m_options;
    Clock m_clock;
    mutable std::mutex m_mutex;
    std::map<std::string, SubmissionRecord> m_records;
    std::uint64_t m_next_id = 1;
    Journal m_journal;
    WorkerPool m_pool;
};

/// Loads every registry dataset's qrels from `paths` (keyed by name or slug).
QrelsStore load_qrels_store(const std::map<std::string, std::filesystem::path>& paths,
                            std::span<const DatasetSpec> specs);

}  // namespace irbench
