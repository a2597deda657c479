#include "irbench/leaderboard.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "irbench/errors.hpp"
#include "irbench/evaluation.hpp"

namespace irbench {

using nlohmann::json;

namespace {

constexpr std::size_t kRecallDepth = 100;

json rejection_to_json(const Rejection& r) {
    json j = {{"kind", to_string(r.kind)}, {"dataset", r.dataset}, {"detail", r.detail}};
    if (!r.query_id.empty()) {
        j["query_id"] = r.query_id;
    }
    return j;
}

RejectionKind parse_rejection_kind(const std::string& s) {
    for (auto k : {RejectionKind::DepthOutOfRange, RejectionKind::UnknownQuery,
                   RejectionKind::MissingDataset, RejectionKind::MalformedRun}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw DataError(fmt::format("unknown rejection kind \"{}\"", s));
}

Rejection rejection_from_json(const json& j) {
    return Rejection{parse_rejection_kind(j.at("kind").get<std::string>()),
                     j.at("dataset").get<std::string>(), j.value("query_id", std::string{}),
                     j.at("detail").get<std::string>()};
}

// Shared by replay and the live service so both fold events identically.
void apply_event(std::map<std::string, SubmissionRecord>& records, const json& ev) {
    const auto type = ev.at("event").get<std::string>();
    const auto id = ev.at("id").get<std::string>();
    if (type == "created") {
        SubmissionRecord r;
        r.id = id;
        r.user = ev.at("user").get<std::string>();
        r.model_name = ev.at("model_name").get<std::string>();
        r.visibility = parse_visibility(ev.at("visibility").get<std::string>());
        r.created_at = parse_timestamp(ev.at("created_at").get<std::string>());
        if (!records.emplace(id, std::move(r)).second) {
            throw DataError(fmt::format("journal: submission {} created twice", id));
        }
        return;
    }
    auto it = records.find(id);
    if (it == records.end()) {
        throw DataError(fmt::format("journal: event \"{}\" for unknown submission {}", type, id));
    }
    auto& r = it->second;
    if (type == "rejected") {
        if (r.status != SubmissionStatus::pending) {
            return;
        }
        r.status = SubmissionStatus::rejected;
        r.rejections.clear();
        for (const auto& item : ev.at("rejections")) {
            r.rejections.push_back(rejection_from_json(item));
        }
    } else if (type == "scored") {
        if (r.status != SubmissionStatus::pending) {
            return;
        }
        r.status = SubmissionStatus::scored;
        r.entry = entry_from_json(ev.at("entry"));
        r.diagnostic.clear();
    } else if (type == "scoring_failed") {
        r.diagnostic = ev.at("diagnostic").get<std::string>();
    } else if (type == "withdrawn") {
        if (r.status == SubmissionStatus::rejected || r.status == SubmissionStatus::withdrawn) {
            return;
        }
        r.status = SubmissionStatus::withdrawn;
        r.withdrawn_at = parse_timestamp(ev.at("at").get<std::string>());
    } else {
        throw DataError(fmt::format("journal: unknown event \"{}\"", type));
    }
}

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError(fmt::format("cannot write {}", tmp.string()));
        }
        out << content;
        out.flush();
        if (!out) {
            throw DataError(fmt::format("write failed for {}", tmp.string()));
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot open {}", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t id_counter(const std::string& id) {
    // ids look like "sub-000042"
    auto dash = id.rfind('-');
    if (dash == std::string::npos) {
        return 0;
    }
    try {
        return std::stoull(id.substr(dash + 1));
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss hms{t - day};
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                       hms.hours().count(), hms.minutes().count(), hms.seconds().count());
}

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    char z = 0;
    const std::string owned(text);
    if (std::sscanf(owned.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%c", &y, &mo, &d, &h, &mi, &s, &z) != 7 ||
        z != 'Z' || owned.size() != 20) {
        throw DataError(fmt::format("bad timestamp \"{}\"", text));
    }
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
        throw DataError(fmt::format("bad timestamp \"{}\"", text));
    }
    return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string to_string(Visibility v) { return v == Visibility::public_entry ? "public" : "private"; }

std::string to_string(SubmissionStatus s) {
    switch (s) {
        case SubmissionStatus::pending:
            return "pending";
        case SubmissionStatus::scored:
            return "scored";
        case SubmissionStatus::rejected:
            return "rejected";
        case SubmissionStatus::withdrawn:
            return "withdrawn";
    }
    return "unknown";
}

Visibility parse_visibility(std::string_view text) {
    if (text == "public") {
        return Visibility::public_entry;
    }
    if (text == "private") {
        return Visibility::private_entry;
    }
    throw DataError(fmt::format("visibility must be public or private (got \"{}\")", text));
}

std::string to_string(RejectionKind k) {
    switch (k) {
        case RejectionKind::DepthOutOfRange:
            return "DepthOutOfRange";
        case RejectionKind::UnknownQuery:
            return "UnknownQuery";
        case RejectionKind::MissingDataset:
            return "MissingDataset";
        case RejectionKind::MalformedRun:
            return "MalformedRun";
    }
    return "Unknown";
}

void ValidationPolicy::validate() const {
    if (min_depth < 1 || min_depth > max_depth) {
        throw PreconditionError(
            fmt::format("depth bounds must satisfy 1 <= min <= max (got {}..{})", min_depth, max_depth));
    }
}

std::size_t remove_self_retrievals(Ranking& run) {
    std::size_t removed = 0;
    for (auto& [qid, list] : run.queries) {
        const auto before = list.size();
        std::erase_if(list, [&qid = qid](const ScoredDoc& d) { return d.doc_id == qid; });
        removed += before - list.size();
        for (std::size_t i = 0; i < list.size(); ++i) {
            list[i].rank = static_cast<int>(i + 1);
        }
    }
    return removed;
}

ValidationReport validate_submission(const std::map<std::string, std::string>& run_texts,
                                     std::span<const DatasetSpec> specs, const QrelsStore& qrels,
                                     const ValidationPolicy& policy) {
    policy.validate();
    ValidationReport report;
    std::set<std::string> supplied;
    for (const auto& [part, text] : run_texts) {
        const auto* spec = find_dataset(specs, part);
        if (spec == nullptr) {
            report.rejections.push_back(
                {RejectionKind::MalformedRun, part, "", "not a benchmark dataset"});
            continue;
        }
        if (!supplied.insert(spec->name).second) {
            report.rejections.push_back(
                {RejectionKind::MalformedRun, spec->name, "", "run supplied more than once"});
            continue;
        }
        Ranking run;
        try {
            std::istringstream in(text);
            run = parse_run(in);
        } catch (const DataError& e) {
            report.rejections.push_back({RejectionKind::MalformedRun, spec->name, "", e.what()});
            continue;
        }
        report.self_retrievals_removed += remove_self_retrievals(run);

        auto judged = qrels.find(spec->name);
        if (judged == qrels.end()) {
            throw DataError(fmt::format("no judgments loaded for {}", spec->name));
        }
        for (const auto& [qid, list] : run.queries) {
            if (list.size() < policy.min_depth || list.size() > policy.max_depth) {
                report.rejections.push_back(
                    {RejectionKind::DepthOutOfRange, spec->name, qid,
                     fmt::format("{} results; expected between {} and {}", list.size(),
                                 policy.min_depth, policy.max_depth)});
            }
        }
        for (const auto& [qid, _] : run.queries) {
            if (judged->second.find(qid) == nullptr) {
                report.rejections.push_back(
                    {RejectionKind::UnknownQuery, spec->name, qid, "query id is not part of the test set"});
            }
        }
        report.runs.emplace(spec->name, std::move(run));
    }
    for (const auto& spec : specs) {
        if (!supplied.contains(spec.name)) {
            report.rejections.push_back({RejectionKind::MissingDataset, spec.name, "",
                                         fmt::format("no run for {} (upload part \"{}\")", spec.name,
                                                     spec.slug)});
        }
    }
    return report;
}

json to_json(const LeaderboardEntry& e) {
    return json{{"submission_id", e.submission_id},
                {"model_name", e.model_name},
                {"user", e.user},
                {"submitted_at", format_timestamp(e.submitted_at)},
                {"ndcg_cut_10", e.ndcg_at_10},
                {"recall_100", e.recall_at_100},
                {"macro_ndcg_cut_10", e.macro_ndcg_at_10},
                {"macro_recall_100", e.macro_recall_at_100},
                {"recall_available", e.recall_available}};
}

LeaderboardEntry entry_from_json(const json& j) {
    LeaderboardEntry e;
    e.submission_id = j.at("submission_id").get<std::string>();
    e.model_name = j.at("model_name").get<std::string>();
    e.user = j.at("user").get<std::string>();
    e.submitted_at = parse_timestamp(j.at("submitted_at").get<std::string>());
    e.ndcg_at_10 = j.at("ndcg_cut_10").get<std::map<std::string, double>>();
    e.recall_at_100 = j.at("recall_100").get<std::map<std::string, double>>();
    e.macro_ndcg_at_10 = j.at("macro_ndcg_cut_10").get<double>();
    e.macro_recall_at_100 = j.at("macro_recall_100").get<double>();
    e.recall_available = j.at("recall_available").get<bool>();
    return e;
}

json to_json(const SubmissionRecord& r) {
    json j = {{"id", r.id},
              {"user", r.user},
              {"model_name", r.model_name},
              {"visibility", to_string(r.visibility)},
              {"created_at", format_timestamp(r.created_at)},
              {"status", to_string(r.status)}};
    if (!r.rejections.empty()) {
        j["rejections"] = json::array();
        for (const auto& x : r.rejections) {
            j["rejections"].push_back(rejection_to_json(x));
        }
    }
    if (r.entry) {
        j["entry"] = to_json(*r.entry);
    }
    if (!r.diagnostic.empty()) {
        j["diagnostic"] = r.diagnostic;
    }
    if (r.withdrawn_at) {
        j["withdrawn_at"] = format_timestamp(*r.withdrawn_at);
    }
    return j;
}

LeaderboardEntry score_submission(const SubmissionRecord& submission,
                                  const std::map<std::string, Ranking>& runs,
                                  std::span<const DatasetSpec> specs, const QrelsStore& qrels) {
    LeaderboardEntry e;
    e.submission_id = submission.id;
    e.model_name = submission.model_name;
    e.user = submission.user;
    e.submitted_at = submission.created_at;
    bool full_depth = true;
    for (const auto& spec : specs) {
        auto run = runs.find(spec.name);
        auto judged = qrels.find(spec.name);
        if (run == runs.end() || judged == qrels.end()) {
            throw DataError(fmt::format("cannot score {}: run or judgments missing", spec.name));
        }
        e.ndcg_at_10[spec.name] = ndcg_at(run->second, judged->second, 10, true).aggregate;
        e.recall_at_100[spec.name] =
            recall_at(run->second, judged->second, kRecallDepth, true).aggregate;
        for (const auto& [_, list] : run->second.queries) {
            full_depth = full_depth && list.size() == kRecallDepth;
        }
    }
    e.macro_ndcg_at_10 = macro_average(e.ndcg_at_10, specs);
    e.macro_recall_at_100 = macro_average(e.recall_at_100, specs);
    e.recall_available = full_depth;
    return e;
}

RateDecision check_rate_limit(const std::string& user, Timestamp now,
                              const std::map<std::string, SubmissionRecord>& submissions,
                              std::chrono::seconds window) {
    RateDecision decision;
    std::optional<Timestamp> latest;
    for (const auto& [_, r] : submissions) {
        if (r.user != user || r.status == SubmissionStatus::rejected) {
            continue;
        }
        if (r.created_at <= now && now - r.created_at < window) {
            latest = latest ? std::max(*latest, r.created_at) : r.created_at;
        }
    }
    if (latest) {
        decision.allowed = false;
        decision.retry_after = std::chrono::duration_cast<std::chrono::seconds>(*latest + window - now);
    }
    return decision;
}

std::vector<LeaderboardEntry> build_board(const std::map<std::string, SubmissionRecord>& submissions) {
    std::vector<LeaderboardEntry> board;
    for (const auto& [_, r] : submissions) {
        if (r.status == SubmissionStatus::scored && r.visibility == Visibility::public_entry && r.entry) {
            board.push_back(*r.entry);
        }
    }
    std::sort(board.begin(), board.end(), [](const LeaderboardEntry& a, const LeaderboardEntry& b) {
        if (a.macro_ndcg_at_10 != b.macro_ndcg_at_10) {
            return a.macro_ndcg_at_10 > b.macro_ndcg_at_10;
        }
        if (a.submitted_at != b.submitted_at) {
            return a.submitted_at < b.submitted_at;
        }
        return a.submission_id < b.submission_id;
    });
    return board;
}

json board_to_json(const std::vector<LeaderboardEntry>& board) {
    json rows = json::array();
    for (std::size_t i = 0; i < board.size(); ++i) {
        json row = to_json(board[i]);
        row["position"] = i + 1;
        if (!board[i].recall_available) {
            row.erase("recall_100");
            row.erase("macro_recall_100");
        }
        rows.push_back(std::move(row));
    }
    return json{{"entries", std::move(rows)}};
}

Journal::Journal(std::filesystem::path path) : m_path(std::move(path)) {
    if (m_path.has_parent_path()) {
        std::filesystem::create_directories(m_path.parent_path());
    }
    // Cut a torn final line so the next append starts on a fresh line.
    if (std::filesystem::exists(m_path)) {
        const auto content = read_file(m_path);
        if (!content.empty() && content.back() != '\n') {
            const auto keep = content.find_last_of('\n');
            std::filesystem::resize_file(m_path, keep == std::string::npos ? 0 : keep + 1);
        }
    }
    m_out.open(m_path, std::ios::binary | std::ios::app);
    if (!m_out) {
        throw DataError(fmt::format("cannot open journal {}", m_path.string()));
    }
}

void Journal::append(const json& event) {
    const auto line = event.dump() + "\n";
    std::lock_guard lock(m_mutex);
    m_out << line;
    m_out.flush();
    if (!m_out) {
        throw DataError(fmt::format("journal append failed: {}", m_path.string()));
    }
}

std::map<std::string, SubmissionRecord> replay_journal(const std::filesystem::path& path) {
    std::map<std::string, SubmissionRecord> records;
    if (!std::filesystem::exists(path)) {
        return records;
    }
    const auto content = read_file(path);
    std::size_t start = 0;
    std::size_t line_number = 0;
    while (start < content.size()) {
        auto end = content.find('\n', start);
        const bool terminated = end != std::string::npos;
        const auto line = content.substr(start, terminated ? end - start : std::string::npos);
        start = terminated ? end + 1 : content.size();
        ++line_number;
        if (line.empty()) {
            continue;
        }
        json ev;
        try {
            ev = json::parse(line);
        } catch (const json::parse_error& e) {
            if (!terminated) {
                break;
            }
            throw DataError(fmt::format("{}:{}: {}", path.string(), line_number, e.what()));
        }
        try {
            apply_event(records, ev);
        } catch (const json::exception& e) {
            throw DataError(fmt::format("{}:{}: {}", path.string(), line_number, e.what()));
        }
    }
    return records;
}

WorkerPool::WorkerPool(std::size_t workers) {
    workers = std::max<std::size_t>(1, workers);
    for (std::size_t i = 0; i < workers; ++i) {
        m_threads.emplace_back([this] { loop(); });
    }
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(m_mutex);
        m_stop = true;
    }
    m_wake.notify_all();
    for (auto& t : m_threads) {
        t.join();
    }
}

void WorkerPool::post(std::function<void()> job) {
    {
        std::lock_guard lock(m_mutex);
        m_queue.push_back(std::move(job));
    }
    m_wake.notify_one();
}

void WorkerPool::wait_idle() {
    std::unique_lock lock(m_mutex);
    m_idle.wait(lock, [this] { return m_queue.empty() && m_running == 0; });
}

void WorkerPool::loop() {
    while (true) {
        std::function<void()> job;
        {
            std::unique_lock lock(m_mutex);
            m_wake.wait(lock, [this] { return m_stop || !m_queue.empty(); });
            if (m_queue.empty()) {
                return;
            }
            job = std::move(m_queue.front());
            m_queue.pop_front();
            ++m_running;
        }
        job();
        {
            std::lock_guard lock(m_mutex);
            --m_running;
            if (m_queue.empty() && m_running == 0) {
                m_idle.notify_all();
            }
        }
    }
}

LeaderboardService::LeaderboardService(std::vector<DatasetSpec> specs, QrelsStore qrels,
                                       ServiceOptions options, Clock clock)
    : m_specs(std::move(specs)),
      m_qrels(std::move(qrels)),
      m_options(std::move(options)),
      m_clock(clock ? std::move(clock)
                    : Clock([] { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); })),
      m_journal(m_options.data_dir / "journal.jsonl"),
      m_pool(m_options.workers) {
    m_options.policy.validate();
    for (const auto& spec : m_specs) {
        if (!m_qrels.contains(spec.name)) {
            throw DataError(fmt::format("no judgments configured for {}", spec.name));
        }
    }
    m_records = replay_journal(journal_path());
    for (const auto& [id, _] : m_records) {
        m_next_id = std::max(m_next_id, id_counter(id) + 1);
    }
    std::lock_guard lock(m_mutex);
    publish_board_locked();
    // Resume scoring for submissions accepted before a restart.
    for (const auto& [id, r] : m_records) {
        if (r.status != SubmissionStatus::pending) {
            continue;
        }
        auto report = validate_submission(load_stored_runs(id), m_specs, m_qrels, m_options.policy);
        if (report.ok()) {
            enqueue_scoring(id, std::move(report.runs));
        }
    }
}

LeaderboardService::~LeaderboardService() { m_pool.wait_idle(); }

std::filesystem::path LeaderboardService::journal_path() const {
    return m_options.data_dir / "journal.jsonl";
}

std::filesystem::path LeaderboardService::board_path() const { return m_options.data_dir / "board.json"; }

SubmitOutcome LeaderboardService::submit(const std::string& user, const std::string& model_name,
                                         Visibility visibility,
                                         const std::map<std::string, std::string>& run_texts) {
    if (model_name.empty()) {
        throw PreconditionError("model name must not be empty");
    }
    auto report = validate_submission(run_texts, m_specs, m_qrels, m_options.policy);

    std::lock_guard lock(m_mutex);
    const auto now = m_clock();
    SubmitOutcome outcome;
    auto rate = check_rate_limit(user, now, m_records, m_options.rate_window);
    if (!rate.allowed) {
        outcome.result = SubmitResult::rate_limited;
        outcome.retry_after = rate.retry_after;
        return outcome;
    }
    const auto id = fmt::format("sub-{:06}", m_next_id++);
    store_runs(id, run_texts);
    json created = {{"event", "created"},      {"id", id},
                    {"user", user},            {"model_name", model_name},
                    {"visibility", to_string(visibility)}, {"created_at", format_timestamp(now)}};
    m_journal.append(created);
    apply_event(m_records, created);
    outcome.id = id;
    if (!report.ok()) {
        json rejected = {{"event", "rejected"}, {"id", id}, {"at", format_timestamp(now)},
                         {"rejections", json::array()}};
        for (const auto& r : report.rejections) {
            rejected["rejections"].push_back(rejection_to_json(r));
        }
        m_journal.append(rejected);
        apply_event(m_records, rejected);
        outcome.result = SubmitResult::rejected;
        outcome.rejections = report.rejections;
        return outcome;
    }
    enqueue_scoring(id, std::move(report.runs));
    outcome.result = SubmitResult::accepted;
    return outcome;
}

void LeaderboardService::enqueue_scoring(const std::string& id, std::map<std::string, Ranking> runs) {
    m_pool.post([this, id, runs = std::move(runs)] {
        SubmissionRecord snapshot;
        {
            std::lock_guard lock(m_mutex);
            auto it = m_records.find(id);
            if (it == m_records.end() || it->second.status != SubmissionStatus::pending) {
                return;
            }
            snapshot = it->second;
        }
        json ev;
        try {
            auto entry = score_submission(snapshot, runs, m_specs, m_qrels);
            ev = {{"event", "scored"}, {"id", id}, {"entry", to_json(entry)}};
        } catch (const std::exception& e) {
            ev = {{"event", "scoring_failed"}, {"id", id}, {"diagnostic", e.what()}};
        }
        std::lock_guard lock(m_mutex);
        if (m_records.at(id).status != SubmissionStatus::pending) {
            return;
        }
        ev["at"] = format_timestamp(m_clock());
        m_journal.append(ev);
        apply_event(m_records, ev);
        publish_board_locked();
    });
}

std::optional<SubmissionRecord> LeaderboardService::get(const std::string& id) const {
    std::lock_guard lock(m_mutex);
    auto it = m_records.find(id);
    if (it == m_records.end()) {
        return std::nullopt;
    }
    return it->second;
}

WithdrawResult LeaderboardService::withdraw(const std::string& user, const std::string& id) {
    std::lock_guard lock(m_mutex);
    auto it = m_records.find(id);
    if (it == m_records.end()) {
        return WithdrawResult::not_found;
    }
    if (it->second.user != user) {
        return WithdrawResult::forbidden;
    }
    if (it->second.status == SubmissionStatus::withdrawn ||
        it->second.status == SubmissionStatus::rejected) {
        return WithdrawResult::already_withdrawn;
    }
    json ev = {{"event", "withdrawn"}, {"id", id}, {"at", format_timestamp(m_clock())}};
    m_journal.append(ev);
    apply_event(m_records, ev);
    publish_board_locked();
    return WithdrawResult::withdrawn;
}

std::vector<LeaderboardEntry> LeaderboardService::board() const {
    std::lock_guard lock(m_mutex);
    return build_board(m_records);
}

json LeaderboardService::board_json() const { return board_to_json(board()); }

void LeaderboardService::wait_idle() { m_pool.wait_idle(); }

void LeaderboardService::publish_board_locked() {
    write_atomically(board_path(), board_to_json(build_board(m_records)).dump(2) + "\n");
}

void LeaderboardService::store_runs(const std::string& id,
                                    const std::map<std::string, std::string>& run_texts) {
    const auto dir = m_options.data_dir / "submissions" / id;
    std::filesystem::create_directories(dir);
    for (const auto& [part, text] : run_texts) {
        const auto* spec = find_dataset(m_specs, part);
        if (spec == nullptr) {
            continue;
        }
        write_atomically(dir / (spec->slug + ".trec"), text);
    }
}

std::map<std::string, std::string> LeaderboardService::load_stored_runs(const std::string& id) const {
    std::map<std::string, std::string> out;
    const auto dir = m_options.data_dir / "submissions" / id;
    if (!std::filesystem::is_directory(dir)) {
        return out;
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".trec") {
            out[entry.path().stem().string()] = read_file(entry.path());
        }
    }
    return out;
}

QrelsStore load_qrels_store(const std::map<std::string, std::filesystem::path>& paths,
                            std::span<const DatasetSpec> specs) {
    QrelsStore store;
    for (const auto& [name, path] : paths) {
        const auto* spec = find_dataset(specs, name);
        if (spec == nullptr) {
            throw DataError(fmt::format("qrels configured for unknown dataset \"{}\"", name));
        }
        store[spec->name] = load_qrels(path).qrels;
    }
    std::vector<std::string> missing;
    for (const auto& spec : specs) {
        if (!store.contains(spec.name)) {
            missing.push_back(spec.slug);
        }
    }
    if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) {
            list += (list.empty() ? "" : ", ") + m;
        }
        throw DataError(fmt::format("qrels missing for: {}", list));
    }
    return store;
}

}  // namespace irbench
