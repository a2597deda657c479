#pragma once

#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "irbench/dataset.hpp"

namespace irbench {

struct EvalReport {
    std::string metric;  // trec_eval name, e.g. "ndcg_cut_10"
    std::map<std::string, double> per_query;
    double aggregate = 0.0;
    std::size_t num_queries_evaluated = 0;
};

enum class MetricKind { ndcg_cut, recall };

/// A metric selector such as `ndcg_cut.10` or `recall.100`.
struct MetricSpec {
    MetricKind kind = MetricKind::ndcg_cut;
    std::size_t cutoff = 10;

    static MetricSpec parse(std::string_view text);
    [[nodiscard]] std::string name() const;  // "ndcg_cut_10", "recall_100"
};

/// nDCG@k with linear gain: DCG = sum_{i<=k} grade_i / log2(i + 1), unjudged
/// documents have grade 0, the ideal DCG sorts all judged grades descending.
/// Queries whose judgments contain no grade > 0 are skipped. With
/// `complete_set`, every remaining judged query counts (0 when missing from
/// the run); otherwise only queries present in both.
EvalReport ndcg_at(const Ranking& run, const QrelSet& qrels, std::size_t k = 10,
                   bool complete_set = true);

/// |relevant in top k| / |relevant|, relevant meaning grade >= 1. Same query
/// selection rules as ndcg_at.
EvalReport recall_at(const Ranking& run, const QrelSet& qrels, std::size_t k = 100,
                     bool complete_set = true);

EvalReport evaluate(const MetricSpec& metric, const Ranking& run, const QrelSet& qrels,
                    bool complete_set);

/// Writes `<metric> <qid|all> <value>` lines in trec_eval's layout. Per-query
/// lines are emitted only with `per_query`.
void write_trec_eval(const EvalReport& report, std::ostream& out, bool per_query = false);

/// Unweighted mean over every registry dataset. Missing datasets or unknown
/// names -> DataError listing them. Names match display name or slug.
double macro_average(const std::map<std::string, double>& per_dataset,
                     std::span<const DatasetSpec> specs);
double macro_average(const std::map<std::string, double>& per_dataset);

}  // namespace irbench
