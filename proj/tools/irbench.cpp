// irbench: command-line entry point.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 internal error.

#include <algorithm>
#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "irbench/analysis.hpp"
#include "irbench/dataset.hpp"
#include "irbench/dense_index.hpp"
#include "irbench/errors.hpp"
#include "irbench/evaluation.hpp"
#include "irbench/impact_index.hpp"
#include "irbench/index_manifest.hpp"
#include "irbench/leaderboard.hpp"
#include "irbench/leaderboard_server.hpp"
#include "irbench/lexical_index.hpp"
#include "irbench/radar.hpp"
#include "irbench/ranking_ops.hpp"

namespace fs = std::filesystem;
using namespace irbench;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInternal = 3;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---- index ---------------------------------------------------------------

struct IndexArgs {
    std::string corpus;
    std::string output;
    std::string mode = "bm25-flat";
    std::string analyzer = "english";
    std::string vocab;
    std::string quantize = "fixed";
    double scale = 100.0;
    std::uint32_t cap = 255;
};

AnalyzerConfig analyzer_config(const std::string& name, const std::string& vocab) {
    AnalyzerConfig cfg;
    cfg.mode = parse_analyzer_mode(name);
    if (cfg.mode == AnalyzerMode::wordpiece) {
        if (vocab.empty()) {
            throw UsageError("--analyzer wordpiece requires --vocab");
        }
        cfg.vocab = std::make_shared<const Vocab>(Vocab::load(vocab));
    } else if (!vocab.empty()) {
        throw UsageError("--vocab only applies to --analyzer wordpiece");
    }
    return cfg;
}

int run_index(const IndexArgs& a) {
    if (a.mode == "bm25-flat" || a.mode == "bm25-multifield") {
        const auto mode = a.mode == "bm25-flat" ? FieldMode::flat : FieldMode::multifield;
        auto index = build_lexical_index(fs::path(a.corpus), analyzer_config(a.analyzer, a.vocab), mode);
        index.save(a.output);
        std::string fields;
        for (const auto& [name, f] : index.fields()) {
            fields += fmt::format("{}{} ({} terms)", fields.empty() ? "" : ", ", name, f.postings.size());
        }
        fmt::print("index:     {}\nkind:      bm25\nmode:      {}\nanalyzer:  {}\ndocuments: {}\nfields:    {}\n",
                   a.output, to_string(mode), index.fingerprint(), index.doc_count(), fields);
        return kExitOk;
    }
    if (a.mode == "impact") {
        ImpactQuantization q;
        if (a.quantize == "none") {
            q = ImpactQuantization::none();
        } else if (a.quantize == "fixed") {
            q = ImpactQuantization::fixed(a.scale, a.cap);
        } else {
            throw UsageError("--quantize must be none or fixed");
        }
        auto index = build_impact_index(fs::path(a.corpus), q);
        index.save(a.output);
        fmt::print("index:     {}\nkind:      impact\nquantize:  {}\ndocuments: {}\nterms:     {}\n", a.output,
                   q.quantized() ? fmt::format("fixed (scale {}, cap {})", q.scale, q.cap) : "none",
                   index.doc_count(), index.term_count());
        return kExitOk;
    }
    if (a.mode == "dense") {
        auto store = build_dense_index(fs::path(a.corpus));
        store.save(a.output);
        fmt::print("index:     {}\nkind:      dense\ndim:       {}\ndocuments: {}\n", a.output, store.dim(),
                   store.count());
        return kExitOk;
    }
    throw UsageError(fmt::format("unknown --mode \"{}\"", a.mode));
}

// ---- search --------------------------------------------------------------

struct SearchArgs {
    std::string index;
    std::string topics;
    std::string output;
    std::size_t hits = 1000;
    std::vector<std::string> fields;
    double k1 = 0.9;
    double b = 0.4;
    unsigned threads = 1;
    std::string tag = "irbench";
};

template <typename Item, typename Fn>
std::vector<RankedList> parallel_map(const std::vector<Item>& items, unsigned threads, Fn fn) {
    std::vector<RankedList> out(items.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++) {
            try {
                out[i] = fn(items[i]);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(items.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

int run_search(const SearchArgs& a) {
    if (a.hits < 1) {
        throw UsageError("--hits must be >= 1");
    }
    Ranking run;
    run.tag = a.tag;
    switch (read_index_kind(a.index)) {
        case IndexKind::bm25: {
            auto index = InvertedIndex::load(a.index);
            auto weights = a.fields.empty() ? index.default_field_weights() : parse_field_weights(a.fields);
            Bm25Params params{a.k1, a.b};
            params.validate();
            auto queries = load_queries(a.topics);
            auto lists = parallel_map(queries, a.threads, [&](const Query& q) {
                return search_bm25(index, q.text, a.hits, weights, params);
            });
            for (std::size_t i = 0; i < queries.size(); ++i) {
                if (!lists[i].empty()) {
                    run.queries[queries[i].id] = std::move(lists[i]);
                }
            }
            break;
        }
        case IndexKind::impact: {
            if (!a.fields.empty()) {
                throw UsageError("--fields only applies to bm25 indexes");
            }
            auto index = ImpactIndex::load(a.index);
            auto queries = load_sparse_vectors(a.topics);
            auto lists = parallel_map(queries, a.threads, [&](const SparseVector& q) {
                return search_impact(index, q.weights, a.hits);
            });
            for (std::size_t i = 0; i < queries.size(); ++i) {
                if (!lists[i].empty()) {
                    run.queries[queries[i].id] = std::move(lists[i]);
                }
            }
            break;
        }
        case IndexKind::dense: {
            if (!a.fields.empty()) {
                throw UsageError("--fields only applies to bm25 indexes");
            }
            auto store = DenseVectorStore::load(a.index);
            for_each_dense_vector(a.topics, [&](DenseVector&& q) {
                if (q.values.size() != store.dim()) {
                    throw DataError(fmt::format("query {} has dimension {}, index has {}", q.id, q.values.size(),
                                                store.dim()));
                }
                auto list = search_dense(store, q.values, a.hits, a.threads);
                if (!list.empty()) {
                    run.queries[q.id] = std::move(list);
                }
            });
            break;
        }
    }
    write_run(run, fs::path(a.output));
    std::size_t lines = 0;
    for (const auto& [_, list] : run.queries) {
        lines += list.size();
    }
    fmt::print(stderr, "wrote {} results for {} {} to {}\n", lines, run.queries.size(),
               run.queries.size() == 1 ? "query" : "queries", a.output);
    return kExitOk;
}

// ---- segment / maxp / fuse -----------------------------------------------

struct SegmentArgs {
    std::string corpus;
    std::string output;
    std::size_t window = 10;
    std::size_t stride = 5;
    std::size_t first_p = 0;
    std::string analyzer = "english";
    std::string vocab;
    std::string separator = "#";
};

int run_segment(const SegmentArgs& a) {
    std::ofstream out(a.output);
    if (!out) {
        throw DataError(fmt::format("cannot write {}", a.output));
    }
    std::size_t docs = 0;
    std::size_t passages = 0;
    auto emit = [&](const std::string& id, const std::string& title, const std::string& text) {
        nlohmann::json rec = {{"_id", id}, {"title", title}, {"text", text}};
        out << rec.dump() << '\n';
        ++passages;
    };
    if (a.first_p > 0) {
        Analyzer analyzer(analyzer_config(a.analyzer, a.vocab));
        for_each_document(a.corpus, [&](Document&& d) {
            ++docs;
            emit(d.id, d.title, first_p(d.text, a.first_p, analyzer));
        });
    } else {
        WindowConfig cfg{a.window, a.stride};
        cfg.validate();
        for_each_document(a.corpus, [&](Document&& d) {
            ++docs;
            for (const auto& p : segment_document(d, cfg)) {
                emit(p.id(a.separator), d.title, p.text);
            }
        });
    }
    out.flush();
    if (!out) {
        throw DataError(fmt::format("write failed for {}", a.output));
    }
    fmt::print(stderr, "{} documents -> {} passages\n", docs, passages);
    return kExitOk;
}

struct MaxpArgs {
    std::string run;
    std::string output;
    std::string separator = "#";
};

int run_maxp(const MaxpArgs& a) {
    auto doc_run = maxp_aggregate(read_run(a.run), a.separator);
    write_run(doc_run, fs::path(a.output));
    return kExitOk;
}

struct FuseArgs {
    std::string run_a;
    std::string run_b;
    std::string output;
    FusionConfig cfg;
    std::string tag = "hybrid";
};

int run_fuse(FuseArgs a) {
    a.cfg.validate();
    auto result = hybrid_average(read_run(a.run_a), read_run(a.run_b), a.cfg);
    result.ranking.tag = a.tag;
    write_run(result.ranking, fs::path(a.output));
    if (!result.report.clean()) {
        fmt::print(stderr, "note: {} queries only in run A, {} only in run B\n", result.report.only_in_a.size(),
                   result.report.only_in_b.size());
    }
    return kExitOk;
}

// ---- eval / radar ----------------------------------------------------------

struct EvalArgs {
    bool complete = false;
    bool per_query = false;
    std::vector<std::string> metrics;
    std::string qrels;
    std::string run;
};

int run_eval(const EvalArgs& a) {
    std::vector<MetricSpec> specs;
    for (const auto& m : a.metrics.empty() ? std::vector<std::string>{"ndcg_cut.10"} : a.metrics) {
        try {
            specs.push_back(MetricSpec::parse(m));
        } catch (const PreconditionError& e) {
            throw UsageError(e.what());
        }
    }
    auto qrels = load_qrels(a.qrels);
    if (qrels.duplicates > 0) {
        fmt::print(stderr, "warning: {} duplicate judgments in {}; last one kept\n", qrels.duplicates, a.qrels);
    }
    auto run = read_run(a.run);
    for (const auto& spec : specs) {
        write_trec_eval(evaluate(spec, run, qrels.qrels, a.complete), std::cout, a.per_query);
    }
    return kExitOk;
}

struct RadarArgs {
    std::string metrics;
    std::string baseline;
    std::vector<std::string> models;
    std::string output;
    double radius = 200.0;
    std::string mode = "ratio";
    double span = 0.25;
    std::string title;
    std::string registry;
};

int run_radar(const RadarArgs& a) {
    std::vector<DatasetSpec> specs = a.registry.empty() ? registry() : load_registry(a.registry);
    auto spec = radar_spec_from_table(load_metrics(a.metrics), a.baseline, a.models, specs);
    if (a.mode == "ratio") {
        spec.scaling = RadarScaling::ratio;
    } else if (a.mode == "additive") {
        spec.scaling = RadarScaling::additive;
    } else {
        throw UsageError("--mode must be ratio or additive");
    }
    spec.radius = a.radius;
    spec.additive_span = a.span;
    spec.title = a.title;
    const auto svg = render_radar(spec);
    std::ofstream out(a.output, std::ios::binary);
    if (!out || !(out << svg)) {
        throw DataError(fmt::format("cannot write {}", a.output));
    }
    return kExitOk;
}

// ---- serve / submit --------------------------------------------------------

struct ServeArgs {
    std::string config;
    std::string data_dir;
    std::string bind;
    int port = -1;
};

LeaderboardServer* g_server = nullptr;

void on_signal(int) {
    if (g_server != nullptr) {
        g_server->stop();
    }
}

int run_serve(const ServeArgs& a) {
    auto cfg = load_server_config(a.config);
    if (!a.data_dir.empty()) {
        cfg.data_dir = a.data_dir;
    }
    if (!a.bind.empty()) {
        cfg.bind = a.bind;
    }
    if (a.port >= 0) {
        cfg.port = a.port;
    }
    std::vector<DatasetSpec> specs = cfg.registry.empty() ? registry() : load_registry(cfg.registry);
    auto qrels = load_qrels_store(cfg.qrels, specs);
    ServiceOptions options{cfg.data_dir, cfg.rate_window, cfg.policy, cfg.workers};
    LeaderboardService service(specs, std::move(qrels), options);
    LeaderboardServer server(service, cfg.tokens);
    const int port = server.bind(cfg.bind, cfg.port);
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    fmt::print("listening on http://{}:{} (data: {})\n", cfg.bind, port, cfg.data_dir.string());
    std::fflush(stdout);
    server.listen();
    g_server = nullptr;
    service.wait_idle();
    return kExitOk;
}

struct SubmitArgs {
    std::string server = "http://127.0.0.1:8080";
    std::string token;
    std::string model;
    std::string runs_dir;
    std::vector<std::string> runs;
    bool is_private = false;
    bool wait = false;
    int timeout = 120;
};

int run_submit(SubmitArgs a) {
    if (a.token.empty()) {
        if (const char* env = std::getenv("IRBENCH_TOKEN")) {
            a.token = env;
        }
    }
    if (a.token.empty()) {
        throw UsageError("--token (or IRBENCH_TOKEN) is required");
    }
    std::map<std::string, fs::path> files;
    if (!a.runs_dir.empty()) {
        if (!fs::is_directory(a.runs_dir)) {
            throw DataError(fmt::format("{} is not a directory", a.runs_dir));
        }
        for (const auto& entry : fs::directory_iterator(a.runs_dir)) {
            if (entry.is_regular_file()) {
                files[entry.path().stem().string()] = entry.path();
            }
        }
    }
    for (const auto& pair : a.runs) {
        auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == pair.size()) {
            throw UsageError(fmt::format("--run expects dataset=path (got \"{}\")", pair));
        }
        files[pair.substr(0, eq)] = pair.substr(eq + 1);
    }
    if (files.empty()) {
        throw UsageError("no run files given (use --runs-dir or --run)");
    }
    auto response = post_submission(a.server, a.token, a.model,
                                    a.is_private ? Visibility::private_entry : Visibility::public_entry, files);
    if (response.http_status == 429) {
        fmt::print(stderr, "rate limited; retry after {} s\n", response.body.value("retry_after", 0L));
        return kExitData;
    }
    if (response.http_status != 202) {
        fmt::print(stderr, "submission failed (HTTP {}):\n{}\n", response.http_status, response.body.dump(2));
        return kExitData;
    }
    const auto id = response.body.at("id").get<std::string>();
    std::string status = response.body.value("status", "pending");
    if (a.wait) {
        const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(a.timeout);
        while (status == "pending" && std::chrono::steady_clock::now() < deadline) {
            std::this_thread::sleep_for(std::chrono::milliseconds(200));
            auto r = get_submission(a.server, id, a.token);
            if (r.http_status == 200) {
                status = r.body.value("status", status);
                if (status == "scored") {
                    fmt::print("{}\t{}\tmacro nDCG@10 {:.4f}\n", id, status,
                               r.body.at("entry").at("macro_ndcg_cut_10").get<double>());
                    return kExitOk;
                }
            }
        }
    }
    fmt::print("{}\t{}\n", id, status);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-shot retrieval benchmarking: indexing, search, evaluation and leaderboard.", "irbench"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "irbench 1.0.0");

    IndexArgs index_args;
    auto* index = app.add_subcommand("index", "Build a bm25, impact or dense index");
    index->add_option("--corpus", index_args.corpus, "Corpus JSONL (bm25) or vector JSONL (impact, dense)")
        ->required();
    index->add_option("--output", index_args.output, "Index directory to create")->required();
    index->add_option("--mode", index_args.mode, "Index kind")
        ->check(CLI::IsMember({"bm25-flat", "bm25-multifield", "impact", "dense"}))
        ->capture_default_str();
    index->add_option("--analyzer", index_args.analyzer, "Text analyzer for bm25 modes")
        ->check(CLI::IsMember({"english", "wordpiece", "whitespace"}))
        ->capture_default_str();
    index->add_option("--vocab", index_args.vocab, "Wordpiece vocabulary, one piece per line");
    index->add_option("--quantize", index_args.quantize, "Impact weight quantization")
        ->check(CLI::IsMember({"none", "fixed"}))
        ->capture_default_str();
    index->add_option("--scale", index_args.scale, "Fixed quantization: multiplier before rounding")
        ->capture_default_str();
    index->add_option("--cap", index_args.cap, "Fixed quantization: largest stored impact")->capture_default_str();

    SearchArgs search_args;
    auto* search = app.add_subcommand("search", "Run a batch of topics against an index");
    search->add_option("--index", search_args.index, "Index directory")->required();
    search->add_option("--topics", search_args.topics,
                       "Topics: JSONL/TSV text (bm25) or query vectors (impact, dense)")
        ->required();
    search->add_option("--output", search_args.output, "TREC run file to write")->required();
    search->add_option("--hits", search_args.hits, "Results per query")->capture_default_str();
    search->add_option("--fields", search_args.fields, "Field weights as name=weight (bm25)")
        ->expected(1, -1);
    auto* bm25 = search->add_option_group("bm25", "BM25 parameters");
    search->add_flag("--bm25", "Rank with BM25 (default for lexical indexes)");
    bm25->add_option("--k1", search_args.k1, "BM25 term frequency saturation")->capture_default_str();
    bm25->add_option("--b", search_args.b, "BM25 length normalization")->capture_default_str();
    search->add_option("--threads", search_args.threads, "Worker threads")->capture_default_str();
    search->add_option("--tag", search_args.tag, "Run tag")->capture_default_str();

    SegmentArgs segment_args;
    auto* segment = app.add_subcommand("segment", "Split documents into sentence windows or a first-N prefix");
    segment->add_option("--corpus", segment_args.corpus, "Corpus JSONL")->required();
    segment->add_option("--output", segment_args.output, "Passage JSONL to write")->required();
    auto* window = segment->add_option("--window", segment_args.window, "Sentences per passage")
                       ->capture_default_str();
    auto* stride = segment->add_option("--stride", segment_args.stride, "Sentences between passage starts")
                       ->capture_default_str();
    segment->add_option("--first-p", segment_args.first_p, "Keep only the first N analyzed tokens")
        ->excludes(window)
        ->excludes(stride)
        ->check(CLI::PositiveNumber);
    segment->add_option("--analyzer", segment_args.analyzer, "Analyzer that counts tokens for --first-p")
        ->check(CLI::IsMember({"english", "wordpiece", "whitespace"}))
        ->capture_default_str();
    segment->add_option("--vocab", segment_args.vocab, "Wordpiece vocabulary");
    segment->add_option("--separator", segment_args.separator, "Between document id and passage number")
        ->capture_default_str();

    MaxpArgs maxp_args;
    auto* maxp = app.add_subcommand("maxp", "Collapse a passage run to documents by maximum passage score");
    maxp->add_option("--run", maxp_args.run, "Passage-level TREC run")->required();
    maxp->add_option("--output", maxp_args.output, "Document-level TREC run to write")->required();
    maxp->add_option("--separator", maxp_args.separator, "Between document id and passage number")
        ->capture_default_str();

    FuseArgs fuse_args;
    auto* fuse = app.add_subcommand("fuse", "Hybrid fusion: min-max normalize two runs and average");
    fuse->add_option("--run-a", fuse_args.run_a, "First run (e.g. dense)")->required();
    fuse->add_option("--run-b", fuse_args.run_b, "Second run (e.g. bm25)")->required();
    fuse->add_option("--output", fuse_args.output, "Fused TREC run to write")->required();
    fuse->add_option("--depth", fuse_args.cfg.depth, "Results per query taken from each run")
        ->capture_default_str();
    fuse->add_option("--weight-a", fuse_args.cfg.weight_a, "Weight of the first run")->capture_default_str();
    fuse->add_option("--weight-b", fuse_args.cfg.weight_b, "Weight of the second run")->capture_default_str();
    fuse->add_option("--missing-score", fuse_args.cfg.missing_score,
                     "Normalized score for a document absent from one run")
        ->capture_default_str();
    fuse->add_option("--tag", fuse_args.tag, "Run tag")->capture_default_str();

    EvalArgs eval_args;
    auto* eval = app.add_subcommand("eval", "trec_eval-style nDCG@k and recall@k");
    eval->add_flag("-c", eval_args.complete, "Average over every judged query (missing ones score 0)");
    eval->add_flag("-q", eval_args.per_query, "Also print per-query values");
    eval->add_option("-m", eval_args.metrics, "Metric, e.g. ndcg_cut.10 or recall.100 (repeatable)")
        ->allow_extra_args(false);
    eval->add_option("qrels", eval_args.qrels, "Relevance judgments")->required();
    eval->add_option("run", eval_args.run, "TREC run file")->required();

    RadarArgs radar_args;
    auto* radar = app.add_subcommand("radar", "Render per-dataset scores as an SVG radar chart");
    radar->add_option("--metrics", radar_args.metrics, "Scores TSV (wide or model/dataset/score rows)")
        ->required();
    radar->add_option("--baseline", radar_args.baseline, "Model drawn at half the radius")->required();
    radar->add_option("--models", radar_args.models, "Models to plot (default: all others)")->expected(1, -1);
    radar->add_option("--output", radar_args.output, "SVG file to write")->required();
    radar->add_option("--radius", radar_args.radius, "Outer radius in pixels")->capture_default_str();
    radar->add_option("--mode", radar_args.mode, "Axis scaling")
        ->check(CLI::IsMember({"ratio", "additive"}))
        ->capture_default_str();
    radar->add_option("--span", radar_args.span, "Additive mode: score difference that reaches the rim")
        ->capture_default_str();
    radar->add_option("--title", radar_args.title, "Chart title");
    radar->add_option("--registry", radar_args.registry, "Dataset registry JSON (default: built-in 18)");

    ServeArgs serve_args;
    auto* serve = app.add_subcommand("serve", "Run the leaderboard service");
    serve->add_option("--config", serve_args.config, "Service config JSON")->required();
    serve->add_option("--data-dir", serve_args.data_dir, "Override the data directory");
    serve->add_option("--bind", serve_args.bind, "Override the bind address");
    serve->add_option("--port", serve_args.port, "Override the port (0 picks a free one)");

    SubmitArgs submit_args;
    auto* submit = app.add_subcommand("submit", "Upload run files to a leaderboard service");
    submit->add_option("--server", submit_args.server, "Service base URL")->capture_default_str();
    submit->add_option("--token", submit_args.token, "Bearer token (default: $IRBENCH_TOKEN)");
    submit->add_option("--model", submit_args.model, "Model name shown on the board")->required();
    submit->add_option("--runs-dir", submit_args.runs_dir, "Directory of <dataset>.trec files");
    submit->add_option("--run", submit_args.runs, "One run as dataset=path (repeatable)");
    submit->add_flag("--private", submit_args.is_private, "Keep the result off the public board");
    submit->add_flag("--wait", submit_args.wait, "Poll until the submission is scored");
    submit->add_option("--timeout", submit_args.timeout, "Seconds to wait with --wait")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*index) return run_index(index_args);
        if (*search) return run_search(search_args);
        if (*segment) return run_segment(segment_args);
        if (*maxp) return run_maxp(maxp_args);
        if (*fuse) return run_fuse(fuse_args);
        if (*eval) return run_eval(eval_args);
        if (*radar) return run_radar(radar_args);
        if (*serve) return run_serve(serve_args);
        if (*submit) return run_submit(submit_args);
    } catch (const UsageError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const PreconditionError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitUsage;
    } catch (const DataError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitData;
    } catch (const std::filesystem::filesystem_error& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return kExitData;
    } catch (const std::exception& e) {
        fmt::print(stderr, "internal error: {}\n", e.what());
        return kExitInternal;
    }
    return kExitInternal;
}
