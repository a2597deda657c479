#include "irbench/ranking_ops.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

#include "irbench/errors.hpp"

namespace irbench {

void FusionConfig::validate() const {
    if (depth < 1) {
        throw PreconditionError("fusion depth must be >= 1");
    }
    if (std::abs(weight_a + weight_b - 1.0) > 1e-9) {
        throw PreconditionError(
            fmt::format("fusion weights must sum to 1 (got {} + {})", weight_a, weight_b));
    }
}

std::vector<double> minmax_normalize(const std::vector<double>& scores) {
    if (scores.empty()) {
        throw PreconditionError("cannot normalise an empty score list");
    }
    auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
    const double min = *lo;
    const double max = *hi;
    std::vector<double> out(scores.size());
    if (max == min) {
        std::fill(out.begin(), out.end(), 1.0);
        return out;
    }
    const double span = max - min;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out[i] = (scores[i] - min) / span;
    }
    return out;
}

RankedList minmax_normalize(const RankedList& list) {
    std::vector<double> scores;
    scores.reserve(list.size());
    for (const auto& e : list) {
        scores.push_back(e.score);
    }
    auto norm = minmax_normalize(scores);
    RankedList out = list;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].score = norm[i];
    }
    return out;
}

FusionResult hybrid_average(const Ranking& run_a, const Ranking& run_b, const FusionConfig& cfg) {
    cfg.validate();
    FusionResult result;
    result.ranking.tag = "hybrid";

    auto normalized = [&](const RankedList& list) {
        std::unordered_map<std::string, double> out;
        if (list.empty()) {
            return out;
        }
        RankedList head(list.begin(),
                        list.begin() + static_cast<std::ptrdiff_t>(std::min(cfg.depth, list.size())));
        for (const auto& e : minmax_normalize(head)) {
            out.emplace(e.doc_id, e.score);
        }
        return out;
    };

    std::map<std::string, std::pair<const RankedList*, const RankedList*>> queries;
    for (const auto& [qid, list] : run_a.queries) {
        queries[qid].first = &list;
    }
    for (const auto& [qid, list] : run_b.queries) {
        queries[qid].second = &list;
    }
    static const RankedList kEmpty;
    for (const auto& [qid, lists] : queries) {
        if (lists.second == nullptr) {
            result.report.only_in_a.push_back(qid);
        } else if (lists.first == nullptr) {
            result.report.only_in_b.push_back(qid);
        }
        auto a = normalized(lists.first ? *lists.first : kEmpty);
        auto b = normalized(lists.second ? *lists.second : kEmpty);
        std::map<std::string, double> fused;
        for (const auto& [doc, s] : a) {
            auto it = b.find(doc);
            fused[doc] = cfg.weight_a * s + cfg.weight_b * (it == b.end() ? cfg.missing_score : it->second);
        }
        for (const auto& [doc, s] : b) {
            if (a.find(doc) == a.end()) {
                fused[doc] = cfg.weight_a * cfg.missing_score + cfg.weight_b * s;
            }
        }
        RankedList list;
        list.reserve(fused.size());
        for (const auto& [doc, s] : fused) {
            list.push_back(ScoredDoc{doc, s, 0});
        }
        sort_and_rank(list);
        if (!list.empty()) {
            result.ranking.queries.emplace(qid, std::move(list));
        }
    }
    return result;
}

Ranking maxp_aggregate(const Ranking& passage_run, const std::string& separator) {
    if (separator.empty()) {
        throw PreconditionError("passage separator must not be empty");
    }
    Ranking out;
    out.tag = passage_run.tag;
    for (const auto& [qid, list] : passage_run.queries) {
        std::unordered_map<std::string, double> best;
        for (const auto& e : list) {
            auto pos = e.doc_id.rfind(separator);
            auto suffix_begin = pos + separator.size();
            bool ok = pos != std::string::npos && pos > 0 && suffix_begin < e.doc_id.size() &&
                      std::all_of(e.doc_id.begin() + static_cast<std::ptrdiff_t>(suffix_begin),
                                  e.doc_id.end(), [](char c) { return c >= '0' && c <= '9'; });
            if (!ok) {
                throw DataError(fmt::format("query {}: malformed passage id \"{}\" (expected <doc>{}<n>)",
                                            qid, e.doc_id, separator));
            }
            auto doc = e.doc_id.substr(0, pos);
            auto [it, inserted] = best.emplace(doc, e.score);
            if (!inserted && e.score > it->second) {
                it->second = e.score;
            }
        }
        RankedList docs;
        docs.reserve(best.size());
        for (auto& [doc, s] : best) {
            docs.push_back(ScoredDoc{doc, s, 0});
        }
        sort_and_rank(docs);
        out.queries.emplace(qid, std::move(docs));
    }
    return out;
}

}  // namespace irbench
