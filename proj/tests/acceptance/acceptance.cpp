// Acceptance runner: one line per criterion, exit status 1 if any criterion
// fails. Skipped criteria (missing optional data) do not fail the run.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/format.h>
#include <httplib.h>

#include "irbench/analysis.hpp"
#include "irbench/dense_index.hpp"
#include "irbench/evaluation.hpp"
#include "irbench/leaderboard.hpp"
#include "irbench/leaderboard_server.hpp"
#include "irbench/lexical_index.hpp"
#include "irbench/radar.hpp"
#include "irbench/ranking_ops.hpp"
#include "support.hpp"

using namespace irbench;
using namespace std::chrono_literals;
namespace fs = std::filesystem;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict = Verdict::pass;
    std::string detail;
};

Outcome fail(std::string why) { return {Verdict::fail, std::move(why)}; }

struct Criterion {
    int number;
    std::string title;
    double time_limit_s;  // 0: none
    std::function<Outcome()> check;
};

std::vector<std::string> ids_of(const RankedList& list) {
    std::vector<std::string> out;
    for (const auto& e : list) {
        out.push_back(e.doc_id);
    }
    return out;
}

// 1 -------------------------------------------------------------------------
Outcome metric_oracle() {
    std::mt19937_64 rng(20240701);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        auto inst = fixture::random_eval_instance(rng);
        const double n = ndcg_at(inst.run, inst.qrels, 10, true).aggregate;
        const double r = recall_at(inst.run, inst.qrels, 100, true).aggregate;
        worst = std::max(worst, std::abs(n - oracle::evaluate(oracle::Metric::ndcg, 10, inst.run, inst.qrels, true)));
        worst = std::max(worst, std::abs(r - oracle::evaluate(oracle::Metric::recall, 100, inst.run, inst.qrels, true)));
    }
    if (worst > 1e-9) {
        return fail(fmt::format("max deviation {:.3g}", worst));
    }
    return {Verdict::pass, fmt::format("200 instances, max deviation {:.3g}", worst)};
}

// 2 -------------------------------------------------------------------------
Outcome hand_fixture() {
    QrelSet qrels;
    qrels.judgments["q"] = {{"dA", 2}, {"dB", 1}};
    Ranking run;
    run.queries["q"] = fixture::ranked({{"dC", 3}, {"dA", 2}, {"dB", 1}});
    const double v = ndcg_at(run, qrels, 10).aggregate;
    if (std::abs(v - 0.6697) > 1e-4) {
        return fail(fmt::format("nDCG@10 = {:.6f}", v));
    }
    return {Verdict::pass, fmt::format("nDCG@10 = {:.6f}", v)};
}

// 3 -------------------------------------------------------------------------
Outcome macro_fixture() {
    const fs::path dir = fs::path(IRBENCH_SOURCE_DIR) / "data" / "reference";
    const std::vector<std::string> models = {"BM25", "uniCOIL", "SPLADE", "TAS-B", "Contriever"};
    const std::map<std::string, std::vector<double>> printed = {
        {"ndcg_cut_10.tsv", {0.429, 0.428, 0.474, 0.424, 0.448}},
        {"recall_100.tsv", {0.577, 0.569, 0.616, 0.591, 0.613}},
    };
    std::string detail;
    for (const auto& [file, expected] : printed) {
        auto table = load_metrics(dir / file);
        for (std::size_t m = 0; m < models.size(); ++m) {
            const double avg = macro_average(table.at(models[m]));
            // inclusive bound; 10.647 / 18 lands exactly on it
            if (std::abs(avg - expected[m]) > 0.0005 + 1e-12) {
                return fail(fmt::format("{} {}: {:.5f} vs {:.3f}", file, models[m], avg, expected[m]));
            }
            detail += fmt::format("{}{:.4f}", detail.empty() ? "" : " ", avg);
        }
    }
    return {Verdict::pass, detail};
}

// 4 -------------------------------------------------------------------------
Outcome flat_multifield() {
    std::mt19937_64 rng(4);
    const std::vector<std::string> words = {"retrieval", "dense", "sparse", "index", "query", "ranking",
                                            "document", "passage", "the", "of", "running", "models",
                                            "evaluation", "bench", "zero", "shot", "Cats", "cat's"};
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::size_t queries = 0;
    for (int corpus = 0; corpus < 50; ++corpus) {
        std::uniform_int_distribution<int> ndocs(1, 120);
        std::uniform_int_distribution<int> len(0, 40);
        std::vector<Document> docs;
        for (int d = ndocs(rng); d > 0; --d) {
            std::string text;
            for (int i = len(rng); i > 0; --i) {
                text += words[pick(rng)] + (i % 7 == 0 ? ". " : " ");
            }
            docs.push_back({"doc" + std::to_string(docs.size()), "", text});
        }
        auto flat = build_lexical_index(docs, AnalyzerConfig{}, FieldMode::flat);
        auto multi = build_lexical_index(docs, AnalyzerConfig{}, FieldMode::multifield);
        for (int q = 0; q < 10; ++q) {
            std::string query = words[pick(rng)] + " " + words[pick(rng)];
            auto a = search_bm25(flat, query, 1000, flat.default_field_weights());
            auto b = search_bm25(multi, query, 1000, multi.default_field_weights());
            ++queries;
            if (ids_of(a) != ids_of(b)) {
                return fail(fmt::format("corpus {} query \"{}\": orderings differ", corpus, query));
            }
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (std::abs(a[i].score - b[i].score) > 1e-9) {
                    return fail(fmt::format("corpus {} query \"{}\": score differs at rank {}", corpus, query, i + 1));
                }
            }
        }
    }
    return {Verdict::pass, fmt::format("50 corpora, {} queries identical", queries)};
}

// 5 -------------------------------------------------------------------------
Outcome bm25_fixture() {
    std::vector<Document> docs = {{"d1", "", "cat sat"}, {"d2", "", "cat cat dog"}, {"d3", "", "dog"}};
    auto index = build_lexical_index(docs, AnalyzerConfig{AnalyzerMode::whitespace, nullptr, {}}, FieldMode::flat);
    Bm25Params params{0.9, 0.4};
    auto hits = search_bm25(index, "cat", 10, index.default_field_weights(), params);
    if (hits.size() != 2 || hits[0].doc_id != "d2" || hits[1].doc_id != "d1") {
        return fail("ordering is not d2 > d1");
    }
    if (std::abs(hits[0].score - 0.3052) > 1e-4 || std::abs(hits[1].score - 0.2474) > 1e-4) {
        return fail(fmt::format("scores {:.6f} / {:.6f}", hits[0].score, hits[1].score));
    }
    return {Verdict::pass, fmt::format("d2 {:.4f} > d1 {:.4f}", hits[0].score, hits[1].score)};
}

// 6 -------------------------------------------------------------------------
Outcome dense_exactness() {
    std::mt19937_64 rng(6);
    std::normal_distribution<float> g;
    std::vector<DenseVector> rows;
    std::vector<std::pair<std::string, std::vector<float>>> plain;
    for (int i = 0; i < 1000; ++i) {
        std::vector<float> v(64);
        for (auto& x : v) {
            x = g(rng);
        }
        rows.push_back({fmt::format("v{:04}", i), v});
        plain.emplace_back(rows.back().id, v);
    }
    auto store = build_dense_index(rows);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<float> q(64);
        for (auto& x : q) {
            x = g(rng);
        }
        auto expected = oracle::exhaustive_dot(plain, q, 10);
        auto seq = search_dense(store, q, 10, 1);
        auto par = search_dense(store, q, 10, 8);
        if (seq != par) {
            return fail("sequential and parallel results differ");
        }
        for (std::size_t i = 0; i < 10; ++i) {
            if (seq[i].doc_id != expected[i].id) {
                return fail(fmt::format("rank {}: {} vs {}", i + 1, seq[i].doc_id, expected[i].id));
            }
            const double rel = std::abs(seq[i].score - expected[i].score) / std::max(1e-12, std::abs(expected[i].score));
            if (rel > 1e-6) {
                return fail(fmt::format("rank {}: relative score error {:.3g}", i + 1, rel));
            }
        }
    }
    return {Verdict::pass, "20 queries, ids and scores exact; 1 and 8 threads identical"};
}

// 7 -------------------------------------------------------------------------
Ranking random_run(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> score(-3, 30);
    std::uniform_int_distribution<int> depth(1, 60);
    Ranking run;
    for (int q = 0; q < 5; ++q) {
        std::vector<std::pair<std::string, double>> items;
        std::vector<int> docs(80);
        std::iota(docs.begin(), docs.end(), 0);
        std::shuffle(docs.begin(), docs.end(), rng);
        for (int i = depth(rng); i > 0; --i) {
            items.emplace_back("d" + std::to_string(docs[static_cast<std::size_t>(i)]), score(rng));
        }
        run.queries["q" + std::to_string(q)] = fixture::ranked(items);
    }
    return run;
}

std::string order_bytes(const Ranking& r) {
    std::string out;
    for (const auto& [qid, list] : r.queries) {
        for (const auto& e : list) {
            out += qid + ' ' + e.doc_id + '\n';
        }
    }
    return out;
}

Outcome fusion_invariance() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> scale(0.05, 20.0);
    std::uniform_real_distribution<double> shift(-10.0, 10.0);
    std::bernoulli_distribution side(0.5);
    FusionConfig cfg{50, 0.0, 0.5, 0.5};
    for (int trial = 0; trial < 100; ++trial) {
        auto a = random_run(rng);
        auto b = random_run(rng);
        auto base = order_bytes(hybrid_average(a, b, cfg).ranking);
        const double m = scale(rng);
        const double c = shift(rng);
        auto& target = side(rng) ? a : b;
        for (auto& [_, list] : target.queries) {
            for (auto& e : list) {
                e.score = m * e.score + c;
            }
        }
        if (order_bytes(hybrid_average(a, b, cfg).ranking) != base) {
            return fail(fmt::format("pair {}: ordering changed under {:.3f}*s{:+.3f}", trial, m, c));
        }
    }
    return {Verdict::pass, "100 run pairs, orderings byte-identical"};
}

// 8 -------------------------------------------------------------------------
Outcome maxp_properties() {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> passages(1, 5);
    std::uniform_real_distribution<double> score(0, 10);
    for (int trial = 0; trial < 50; ++trial) {
        Ranking run;
        std::vector<std::pair<std::string, double>> items;
        for (int d = 0; d < 50; ++d) {
            for (int p = passages(rng); p > 0; --p) {
                items.emplace_back("doc" + std::to_string(d) + "#" + std::to_string(p - 1), score(rng));
            }
        }
        run.queries["q"] = fixture::ranked(items);
        auto expected = oracle::group_by_max(run).at("q");
        auto got = maxp_aggregate(run).queries.at("q");
        if (got.size() != expected.size()) {
            return fail("document count differs from group-by-max");
        }
        for (std::size_t i = 0; i < got.size(); ++i) {
            if (got[i].score != expected.at(got[i].doc_id) || (i > 0 && got[i - 1].score < got[i].score)) {
                return fail(fmt::format("trial {}: {} wrong or out of order", trial, got[i].doc_id));
            }
        }
    }
    Ranking single;
    single.queries["q"] = fixture::ranked({{"a#0", 3}, {"b#0", 2}, {"c#0", 1}});
    auto docs = maxp_aggregate(single).queries.at("q");
    if (ids_of(docs) != std::vector<std::string>{"a", "b", "c"} || docs[0].score != 3 || docs[2].rank != 3) {
        return fail("single-passage identity broken");
    }
    if (make_windows(12, {10, 5}) != std::vector<WindowSpan>{{0, 10}, {5, 12}}) {
        return fail("12 sentences, 10/5 windows are not [0,10) [5,12)");
    }
    return {Verdict::pass, "oracle agreement on 50 runs; identity; windows [0,10) [5,12)"};
}

// 9 -------------------------------------------------------------------------
Outcome radar_geometry() {
    MetricsTable table = load_metrics(fs::path(IRBENCH_SOURCE_DIR) / "data" / "reference" / "ndcg_cut_10.tsv");
    for (const auto& [dataset, score] : table.at("BM25")) {
        table["Doubled"][dataset] = 2.0 * score;
    }
    auto spec = radar_spec_from_table(table, "BM25", {"Doubled", "SPLADE"}, registry());
    double worst_half = 0.0;
    for (const auto& v : radar_polygon(spec, spec.baseline)) {
        worst_half = std::max(worst_half, std::abs(v.r - spec.radius / 2));
        worst_half = std::max(worst_half, std::abs(std::hypot(v.x, v.y) - spec.radius / 2));
    }
    if (worst_half > 1e-9) {
        return fail(fmt::format("baseline vertex off R/2 by {:.3g}", worst_half));
    }
    double worst_rim = 0.0;
    for (const auto& v : radar_polygon(spec, spec.models[0])) {
        worst_rim = std::max(worst_rim, std::abs(v.r - spec.radius));
    }
    if (worst_rim > 1e-9) {
        return fail(fmt::format("doubled score off R by {:.3g}", worst_rim));
    }
    const auto svg = render_radar(spec);
    if (svg != render_radar(spec)) {
        return fail("SVG output differs between renders");
    }
    try {
        std::istringstream in(svg);
        boost::property_tree::ptree tree;
        boost::property_tree::read_xml(in, tree);
        if (tree.get_child("svg.<xmlattr>.viewBox").data().empty()) {
            return fail("svg root lacks a viewBox");
        }
    } catch (const std::exception& e) {
        return fail(fmt::format("XML parse error: {}", e.what()));
    }
    return {Verdict::pass, fmt::format("18 axes, {} bytes of SVG", svg.size())};
}

// 10 ------------------------------------------------------------------------
Outcome leaderboard_protocol() {
    const auto& specs = registry();
    auto qrels = fixture::leaderboard_qrels(specs);

    auto deep = fixture::leaderboard_upload(specs, 100);
    deep["scifact"] = fixture::run_text(fixture::leaderboard_run(101));
    auto report = validate_submission(deep, specs, qrels);
    if (report.ok() || report.rejections[0].kind != RejectionKind::DepthOutOfRange) {
        return fail("101-deep list was not rejected for depth");
    }

    Ranking self;
    self.queries["q1"] = fixture::ranked({{"q1", 5}, {"a1", 4}, {"a2", 3}});
    if (remove_self_retrievals(self) != 1 || self.queries["q1"][0] != ScoredDoc{"a1", 4, 1} ||
        self.queries["q1"][1].rank != 2) {
        return fail("self-retrieval filter did not compact ranks");
    }

    const Timestamp t0 = parse_timestamp("2026-03-01T12:00:00Z");
    std::map<std::string, SubmissionRecord> subs;
    SubmissionRecord r;
    r.id = "s";
    r.user = "u";
    r.created_at = t0;
    r.status = SubmissionStatus::scored;
    subs["s"] = r;
    auto two = check_rate_limit("u", t0 + 2h, subs);
    if (two.allowed || two.retry_after != 22h || !check_rate_limit("u", t0 + 25h, subs).allowed) {
        return fail("rolling 24h window wrong for 2h/25h");
    }
    subs["s"].status = SubmissionStatus::rejected;
    if (!check_rate_limit("u", t0 + 2h, subs).allowed) {
        return fail("rejected submission consumed quota");
    }

    // End to end over HTTP, then a restart from the same data directory.
    const auto started = std::chrono::steady_clock::now();
    fixture::TempDir tmp;
    const fs::path data_dir = tmp.path / "data";
    auto offset = std::make_shared<std::atomic<long>>(0);
    auto clock = [offset, t0] { return t0 + std::chrono::seconds(offset->load()); };
    auto files = [&](const std::string& name, std::size_t depth, bool ideal) {
        std::map<std::string, fs::path> out;
        fs::create_directories(tmp.path / name);
        for (const auto& [slug, text] : fixture::leaderboard_upload(specs, depth, ideal)) {
            std::ofstream(tmp.path / name / (slug + ".trec")) << text;
            out[slug] = tmp.path / name / (slug + ".trec");
        }
        return out;
    };
    std::string served;
    std::vector<std::string> problems;
    {
        LeaderboardService service(specs, qrels, {data_dir, 24h, {}, 2}, clock);
        LeaderboardServer server(service, {{"tok-pub", "pub"}, {"tok-priv", "priv"}, {"tok-low", "low"}});
        const int port = server.bind("127.0.0.1", 0);
        std::thread loop([&] { server.listen(); });
        server.wait_until_ready();
        const auto base = fmt::format("http://127.0.0.1:{}", port);
        auto expect = [&](const SubmissionResponse& r, int status, const std::string& what) {
            if (r.http_status != status) {
                problems.push_back(fmt::format("{}: HTTP {} (wanted {})", what, r.http_status, status));
            }
        };
        auto first = post_submission(base, "tok-pub", "ideal", Visibility::public_entry, files("ideal", 100, true));
        expect(first, 202, "first submission");
        expect(post_submission(base, "tok-priv", "hidden", Visibility::private_entry, files("hidden", 100, true)),
               202, "private submission");
        expect(post_submission(base, "tok-low", "deep", Visibility::public_entry, files("deep", 101, true)), 400,
               "101-deep submission");
        expect(post_submission(base, "tok-low", "weak", Visibility::public_entry, files("weak", 10, false)), 202,
               "submission after a rejection");
        *offset += 2 * 3600;
        expect(post_submission(base, "tok-pub", "again", Visibility::public_entry, files("again", 100, true)), 429,
               "resubmission after 2h");
        *offset += 23 * 3600;
        expect(post_submission(base, "tok-pub", "later", Visibility::public_entry, files("later", 10, false)), 202,
               "resubmission after 25h");
        service.wait_idle();
        if (first.http_status == 202 &&
            get_submission(base, first.body.at("id").get<std::string>()).body.value("status", "") != "scored") {
            problems.push_back("first submission not scored");
        }
        httplib::Client client(base);
        auto res = client.Get("/api/leaderboard");
        if (!res || res->status != 200) {
            problems.push_back("GET /api/leaderboard failed");
        } else {
            served = nlohmann::json::parse(res->body).dump();
            auto entries = nlohmann::json::parse(res->body).at("entries");
            std::vector<std::string> names;
            for (const auto& e : entries) {
                names.push_back(e.at("model_name").get<std::string>());
            }
            if (names != std::vector<std::string>{"ideal", "weak", "later"}) {
                problems.push_back(fmt::format("board lists [{}]", fmt::join(names, ", ")));
            } else if (std::abs(entries[0].at("macro_ndcg_cut_10").get<double>() - 1.0) > 1e-12) {
                problems.push_back("ideal submission not scored at 1.0");
            }
        }
        server.stop();
        loop.join();
    }
    LeaderboardService restarted(specs, qrels, {data_dir, 24h, {}, 2}, clock);
    restarted.wait_idle();
    if (restarted.board_json().dump() != served) {
        problems.push_back("restart from the journal does not reproduce the board");
    }
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (elapsed > 5.0) {
        problems.push_back(fmt::format("end to end took {:.2f} s", elapsed));
    }
    if (!problems.empty()) {
        return fail(fmt::format("{}", fmt::join(problems, "; ")));
    }
    return {Verdict::pass, fmt::format("depth, self-filter, rate window, visibility, replay; e2e {:.2f} s", elapsed)};
}

// 11 ------------------------------------------------------------------------
Outcome scifact_bm25_flat() {
    const char* dir_env = std::getenv("IRBENCH_SCIFACT_DIR");
    if (dir_env == nullptr || *dir_env == '\0') {
        return {Verdict::skip, "set IRBENCH_SCIFACT_DIR to a local SciFact copy (corpus.jsonl, queries.jsonl, qrels/test.tsv)"};
    }
    const fs::path dir(dir_env);
    auto index = build_lexical_index(dir / "corpus.jsonl", AnalyzerConfig{}, FieldMode::flat);
    if (index.doc_count() != 5183) {
        return fail(fmt::format("corpus has {} passages, expected 5183", index.doc_count()));
    }
    auto qrels = load_qrels(dir / "qrels" / "test.tsv").qrels;
    Ranking run;
    for (const auto& q : load_queries(dir / "queries.jsonl")) {
        if (qrels.find(q.id) == nullptr) {
            continue;
        }
        auto hits = search_bm25(index, q.text, 1000, index.default_field_weights());
        if (!hits.empty()) {
            run.queries[q.id] = std::move(hits);
        }
    }
    const double ndcg = ndcg_at(run, qrels, 10, true).aggregate;
    if (std::abs(ndcg - 0.679) > 0.02) {
        return fail(fmt::format("nDCG@10 = {:.4f}", ndcg));
    }
    return {Verdict::pass, fmt::format("nDCG@10 = {:.4f}", ndcg)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "metric oracle equivalence", 10.0, metric_oracle},
        {2, "nDCG@10 hand fixture", 0.0, hand_fixture},
        {3, "macro-average of the published per-dataset scores", 0.0, macro_fixture},
        {4, "flat/multifield equivalence with empty titles", 30.0, flat_multifield},
        {5, "BM25 hand oracle", 0.0, bm25_fixture},
        {6, "dense exactness", 5.0, dense_exactness},
        {7, "fusion affine invariance", 0.0, fusion_invariance},
        {8, "MaxP properties and windows", 0.0, maxp_properties},
        {9, "radar geometry and SVG", 0.0, radar_geometry},
        {10, "leaderboard protocol", 0.0, leaderboard_protocol},
        {11, "BM25 flat on SciFact (optional)", 120.0, scifact_bm25_flat},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = fail(fmt::format("exception: {}", e.what()));
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (o.verdict == Verdict::pass && c.time_limit_s > 0 && secs > c.time_limit_s) {
            o = fail(fmt::format("{} (took {:.2f} s, limit {:.0f} s)", o.detail, secs, c.time_limit_s));
        }
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::skip ? "SKIP" : "FAIL";
        failures += o.verdict == Verdict::fail ? 1 : 0;
        std::cout << fmt::format("[{}] criterion {:>2}: {} -- {} ({:.2f} s)\n", tag, c.number, c.title, o.detail, secs);
    }
    std::cout << (failures == 0 ? "acceptance: all required criteria passed\n"
                                : fmt::format("acceptance: {} criterion(s) failed\n", failures));
    return failures == 0 ? 0 : 1;
}
