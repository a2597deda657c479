#include "irbench/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>
#include <vector>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "irbench/errors.hpp"

namespace irbench {

namespace {

using QueryMetric =
    std::function<double(const RankedList* list, const std::map<std::string, int>& judged)>;

bool has_relevant(const std::map<std::string, int>& judged) {
    return std::any_of(judged.begin(), judged.end(), [](const auto& kv) { return kv.second > 0; });
}

// Shared query selection: judged queries with at least one positive grade;
// complete_set adds those absent from the run (scored with list == nullptr).
EvalReport run_metric(std::string name, const Ranking& run, const QrelSet& qrels,
                      bool complete_set, const QueryMetric& metric) {
    EvalReport report;
    report.metric = std::move(name);
    double sum = 0.0;
    for (const auto& [qid, judged] : qrels.judgments) {
        if (!has_relevant(judged)) {
            continue;
        }
        auto it = run.queries.find(qid);
        if (it == run.queries.end() && !complete_set) {
            continue;
        }
        const double v = metric(it == run.queries.end() ? nullptr : &it->second, judged);
        report.per_query[qid] = v;
        sum += v;
    }
    report.num_queries_evaluated = report.per_query.size();
    report.aggregate =
        report.per_query.empty() ? 0.0 : sum / static_cast<double>(report.per_query.size());
    return report;
}

}  // namespace

MetricSpec MetricSpec::parse(std::string_view text) {
    auto dot = text.find('.');
    if (dot == std::string_view::npos) {
        dot = text.rfind('_');
    }
    if (dot == std::string_view::npos) {
        throw PreconditionError(fmt::format("metric \"{}\" needs a cutoff, e.g. ndcg_cut.10", text));
    }
    auto base = text.substr(0, dot);
    auto cut = text.substr(dot + 1);
    MetricSpec spec;
    if (base == "ndcg_cut") {
        spec.kind = MetricKind::ndcg_cut;
    } else if (base == "recall") {
        spec.kind = MetricKind::recall;
    } else {
        throw PreconditionError(fmt::format("unsupported metric \"{}\"", text));
    }
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(cut.data(), cut.data() + cut.size(), k);
    if (ec != std::errc{} || ptr != cut.data() + cut.size() || k < 1) {
        throw PreconditionError(fmt::format("bad metric cutoff in \"{}\"", text));
    }
    spec.cutoff = k;
    return spec;
}

std::string MetricSpec::name() const {
    return fmt::format("{}_{}", kind == MetricKind::ndcg_cut ? "ndcg_cut" : "recall", cutoff);
}

EvalReport ndcg_at(const Ranking& run, const QrelSet& qrels, std::size_t k, bool complete_set) {
    if (k < 1) {
        throw PreconditionError("cutoff must be >= 1");
    }
    return run_metric(
        MetricSpec{MetricKind::ndcg_cut, k}.name(), run, qrels, complete_set,
        [k](const RankedList* list, const std::map<std::string, int>& judged) {
            std::vector<int> grades;
            grades.reserve(judged.size());
            for (const auto& [_, g] : judged) {
                grades.push_back(g);
            }
            std::sort(grades.begin(), grades.end(), std::greater<>());
            double ideal = 0.0;
            for (std::size_t i = 0; i < std::min(k, grades.size()); ++i) {
                ideal += grades[i] / std::log2(static_cast<double>(i) + 2.0);
            }
            if (list == nullptr || ideal <= 0.0) {
                return 0.0;
            }
            double dcg = 0.0;
            for (std::size_t i = 0; i < std::min(k, list->size()); ++i) {
                auto it = judged.find((*list)[i].doc_id);
                if (it != judged.end() && it->second > 0) {
                    dcg += it->second / std::log2(static_cast<double>(i) + 2.0);
                }
            }
            return dcg / ideal;
        });
}

EvalReport recall_at(const Ranking& run, const QrelSet& qrels, std::size_t k, bool complete_set) {
    if (k < 1) {
        throw PreconditionError("cutoff must be >= 1");
    }
    return run_metric(
        MetricSpec{MetricKind::recall, k}.name(), run, qrels, complete_set,
        [k](const RankedList* list, const std::map<std::string, int>& judged) {
            std::size_t relevant = 0;
            for (const auto& [_, g] : judged) {
                relevant += g >= 1 ? 1 : 0;
            }
            if (list == nullptr || relevant == 0) {
                return 0.0;
            }
            std::size_t found = 0;
            for (std::size_t i = 0; i < std::min(k, list->size()); ++i) {
                auto it = judged.find((*list)[i].doc_id);
                if (it != judged.end() && it->second >= 1) {
                    ++found;
                }
            }
            return static_cast<double>(found) / static_cast<double>(relevant);
        });
}

EvalReport evaluate(const MetricSpec& metric, const Ranking& run, const QrelSet& qrels,
                    bool complete_set) {
    return metric.kind == MetricKind::ndcg_cut ? ndcg_at(run, qrels, metric.cutoff, complete_set)
                                               : recall_at(run, qrels, metric.cutoff, complete_set);
}

void write_trec_eval(const EvalReport& report, std::ostream& out, bool per_query) {
    if (per_query) {
        for (const auto& [qid, v] : report.per_query) {
            out << fmt::format("{:<22}\t{}\t{:.4f}\n", report.metric, qid, v);
        }
    }
    out << fmt::format("{:<22}\tall\t{:.4f}\n", report.metric, report.aggregate);
}

double macro_average(const std::map<std::string, double>& per_dataset,
                     std::span<const DatasetSpec> specs) {
    std::vector<std::string> unknown;
    std::map<std::string, double> by_name;
    for (const auto& [name, score] : per_dataset) {
        const auto* spec = find_dataset(specs, name);
        if (spec == nullptr) {
            unknown.push_back(name);
            continue;
        }
        if (!by_name.emplace(spec->name, score).second) {
            throw DataError(fmt::format("dataset {} supplied twice", spec->name));
        }
    }
    if (!unknown.empty()) {
        throw DataError(fmt::format("unknown dataset(s): {}", fmt::join(unknown, ", ")));
    }
    std::vector<std::string> missing;
    double sum = 0.0;
    for (const auto& spec : specs) {
        auto it = by_name.find(spec.name);
        if (it == by_name.end()) {
            missing.push_back(spec.name);
        } else {
            sum += it->second;
        }
    }
    if (!missing.empty()) {
        throw DataError(fmt::format("macro average needs all {} datasets; missing: {}", specs.size(),
                                    fmt::join(missing, ", ")));
    }
    if (specs.empty()) {
        throw DataError("macro average over an empty registry");
    }
    return sum / static_cast<double>(specs.size());
}

double macro_average(const std::map<std::string, double>& per_dataset) {
    return macro_average(per_dataset, registry());
}

}  // namespace irbench
