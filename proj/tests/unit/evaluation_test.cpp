#include <doctest.h>

#include <random>
#include <sstream>

#include "irbench/errors.hpp"
#include "irbench/evaluation.hpp"
#include "support.hpp"

using namespace irbench;

namespace {

struct HandFixture {
    Ranking run;
    QrelSet qrels;
    HandFixture() {
        qrels.judgments["q"] = {{"dA", 2}, {"dB", 1}};
        run.queries["q"] = fixture::ranked({{"dC", 3}, {"dA", 2}, {"dB", 1}});
    }
};

}  // namespace

TEST_CASE("hand computed nDCG@10") {
    HandFixture f;
    auto r = ndcg_at(f.run, f.qrels, 10);
    CHECK(std::abs(r.aggregate - 0.6697) < 1e-4);
    const double dcg = 2 / std::log2(3.0) + 1 / std::log2(4.0);
    const double idcg = 2 + 1 / std::log2(3.0);
    CHECK(r.aggregate == doctest::Approx(dcg / idcg).epsilon(1e-12));
}

TEST_CASE("ideal ranking scores one") {
    QrelSet q;
    q.judgments["q"] = {{"a", 1}, {"b", 2}, {"c", 0}};
    Ranking run;
    run.queries["q"] = fixture::ranked({{"b", 3}, {"a", 2}, {"z", 1}});
    CHECK(ndcg_at(run, q, 10).aggregate == doctest::Approx(1.0));
}

TEST_CASE("complete-set semantics") {
    QrelSet q;
    q.judgments["q1"] = {{"a", 1}};
    q.judgments["q2"] = {{"b", 1}};
    q.judgments["q3"] = {{"c", 0}};  // no relevant document: never counted
    Ranking run;
    run.queries["q1"] = fixture::ranked({{"a", 1}});
    run.queries["q9"] = fixture::ranked({{"a", 1}});  // not judged: ignored
    auto complete = ndcg_at(run, q, 10, true);
    CHECK(complete.aggregate == doctest::Approx(0.5));
    CHECK(complete.num_queries_evaluated == 2);
    CHECK(complete.per_query.at("q2") == 0.0);
    auto partial = ndcg_at(run, q, 10, false);
    CHECK(partial.aggregate == doctest::Approx(1.0));
    CHECK(partial.num_queries_evaluated == 1);
}

TEST_CASE("recall at 100") {
    QrelSet q;
    q.judgments["q"] = {{"a", 1}, {"b", 2}, {"c", 1}, {"d", 1}};
    Ranking run;
    std::vector<std::pair<std::string, double>> items = {{"a", 1000}};
    for (int i = 0; i < 150; ++i) {
        items.emplace_back("x" + std::to_string(i), 999 - i);
    }
    items.emplace_back("b", 1);  // rank 152: outside the cutoff
    run.queries["q"] = fixture::ranked(items);
    CHECK(recall_at(run, q, 100).aggregate == doctest::Approx(0.25));
    QrelSet all3;
    all3.judgments["q"] = {{"a", 1}, {"x0", 1}, {"x1", 2}};
    CHECK(recall_at(run, all3, 100).aggregate == doctest::Approx(1.0));
}

TEST_CASE("metrics agree with a brute-force evaluator") {
    std::mt19937_64 rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        auto inst = fixture::random_eval_instance(rng);
        for (bool complete : {true, false}) {
            CHECK(std::abs(ndcg_at(inst.run, inst.qrels, 10, complete).aggregate -
                           oracle::evaluate(oracle::Metric::ndcg, 10, inst.run, inst.qrels, complete)) < 1e-9);
            CHECK(std::abs(recall_at(inst.run, inst.qrels, 100, complete).aggregate -
                           oracle::evaluate(oracle::Metric::recall, 100, inst.run, inst.qrels, complete)) < 1e-9);
        }
    }
}

TEST_CASE("nDCG ignores order-preserving score transforms") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = fixture::random_eval_instance(rng);
        auto moved = inst.run;
        for (auto& [_, list] : moved.queries) {
            for (auto& e : list) {
                e.score = std::exp(e.score) * 3.0 - 1.0;
            }
        }
        CHECK(ndcg_at(inst.run, inst.qrels, 10).aggregate == ndcg_at(moved, inst.qrels, 10).aggregate);
    }
}

TEST_CASE("metric selectors") {
    CHECK(MetricSpec::parse("ndcg_cut.10").name() == "ndcg_cut_10");
    CHECK(MetricSpec::parse("recall.100").name() == "recall_100");
    CHECK(MetricSpec::parse("recall_1000").cutoff == 1000);
    CHECK_THROWS_AS(MetricSpec::parse("map"), PreconditionError);
    CHECK_THROWS_AS(MetricSpec::parse("ndcg_cut.0"), PreconditionError);
    CHECK_THROWS_AS(MetricSpec::parse("P.10"), PreconditionError);
}

TEST_CASE("trec_eval output layout") {
    HandFixture f;
    std::ostringstream out;
    write_trec_eval(ndcg_at(f.run, f.qrels, 10), out, true);
    CHECK(out.str() == "ndcg_cut_10           \tq\t0.6697\nndcg_cut_10           \tall\t0.6697\n");
}

TEST_CASE("macro average requires every dataset") {
    std::map<std::string, double> scores;
    for (const auto& d : registry()) {
        scores[d.name] = static_cast<double>(d.display_order) / 17.0;
    }
    CHECK(macro_average(scores) == doctest::Approx(0.5));
    auto missing = scores;
    missing.erase("SciFact");
    try {
        macro_average(missing);
        FAIL("expected an error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("SciFact") != std::string::npos);
    }
    auto extra = scores;
    extra["MS MARCO"] = 1.0;
    CHECK_THROWS_AS(macro_average(extra), DataError);
    auto twice = scores;
    twice["scifact"] = 0.1;
    CHECK_THROWS_AS(macro_average(twice), DataError);
}
