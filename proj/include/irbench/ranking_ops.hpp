#pragma once

#include <string>
#include <vector>

#include "irbench/dataset.hpp"

namespace irbench {

struct FusionConfig {
    std::size_t depth = 1000;
    double missing_score = 0.0;
    double weight_a = 0.5;
    double weight_b = 0.5;

    void validate() const;
};

/// Queries that appeared in only one of the fused runs.
struct FusionReport {
    std::vector<std::string> only_in_a;
    std::vector<std::string> only_in_b;

    [[nodiscard]] bool clean() const { return only_in_a.empty() && only_in_b.empty(); }
};

struct FusionResult {
    Ranking ranking;
    FusionReport report;
};

/// (s - min) / (max - min); a constant list maps to all 1.0. Order and
/// doc ids are kept. Empty list -> PreconditionError.
RankedList minmax_normalize(const RankedList& list);
std::vector<double> minmax_normalize(const std::vector<double>& scores);

/// Per query: truncate each run to `depth`, min-max normalise, then combine as
/// w_a * a(d) + w_b * b(d) with `missing_score` standing in for a document
/// absent from one side. Result is re-sorted (ties by doc id) and re-ranked.
FusionResult hybrid_average(const Ranking& run_a, const Ranking& run_b, const FusionConfig& cfg = {});

/// Passage ids look like `<doc_id><separator><window_index>`; the suffix is
/// split at the last separator. A document's score is its best passage score.
Ranking maxp_aggregate(const Ranking& passage_run, const std::string& separator = "#");

}  // namespace irbench
