// Independent reference implementations and fixture builders shared by the
// unit suites and the acceptance runner. Nothing here calls into the code
// under test except for plain data types.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "irbench/dataset.hpp"

namespace oracle {

// nDCG@k straight from the definition: positions are 1-based, discount
// log2(pos + 1), unjudged documents count as grade 0.
inline double ndcg(const std::vector<std::string>& ranked, const std::map<std::string, int>& grades,
                   std::size_t k) {
    double dcg = 0.0;
    for (std::size_t pos = 1; pos <= ranked.size() && pos <= k; ++pos) {
        auto it = grades.find(ranked[pos - 1]);
        int g = it == grades.end() ? 0 : it->second;
        if (g > 0) {
            dcg += g / std::log2(static_cast<double>(pos) + 1.0);
        }
    }
    std::vector<int> ideal;
    for (const auto& kv : grades) {
        if (kv.second > 0) {
            ideal.push_back(kv.second);
        }
    }
    std::sort(ideal.rbegin(), ideal.rend());
    double idcg = 0.0;
    for (std::size_t pos = 1; pos <= ideal.size() && pos <= k; ++pos) {
        idcg += ideal[pos - 1] / std::log2(static_cast<double>(pos) + 1.0);
    }
    return idcg == 0.0 ? 0.0 : dcg / idcg;
}

inline double recall(const std::vector<std::string>& ranked, const std::map<std::string, int>& grades,
                     std::size_t k) {
    std::set<std::string> relevant;
    for (const auto& kv : grades) {
        if (kv.second >= 1) {
            relevant.insert(kv.first);
        }
    }
    if (relevant.empty()) {
        return 0.0;
    }
    std::set<std::string> top(ranked.begin(), ranked.begin() + static_cast<long>(std::min(k, ranked.size())));
    std::size_t hit = 0;
    for (const auto& d : relevant) {
        hit += top.count(d);
    }
    return static_cast<double>(hit) / static_cast<double>(relevant.size());
}

enum class Metric { ndcg, recall };

// Mean over judged queries having a positive grade; absent queries score 0
// when `complete`, otherwise they are skipped.
inline double evaluate(Metric metric, std::size_t k, const irbench::Ranking& run,
                       const irbench::QrelSet& qrels, bool complete) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& [qid, grades] : qrels.judgments) {
        bool any = false;
        for (const auto& kv : grades) {
            any = any || kv.second > 0;
        }
        if (!any) {
            continue;
        }
        auto it = run.queries.find(qid);
        if (it == run.queries.end()) {
            if (complete) {
                ++n;
            }
            continue;
        }
        std::vector<std::string> ids;
        for (const auto& d : it->second) {
            ids.push_back(d.doc_id);
        }
        sum += metric == Metric::ndcg ? ndcg(ids, grades, k) : recall(ids, grades, k);
        ++n;
    }
    return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

struct Hit {
    std::string id;
    double score;
};

// Naive top-k inner product over every row, ties by id.
inline std::vector<Hit> exhaustive_dot(const std::vector<std::pair<std::string, std::vector<float>>>& rows,
                                       const std::vector<float>& query, std::size_t k) {
    std::vector<Hit> all;
    for (const auto& [id, v] : rows) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            s += static_cast<double>(v[i]) * static_cast<double>(query[i]);
        }
        all.push_back({id, s});
    }
    std::sort(all.begin(), all.end(), [](const Hit& a, const Hit& b) {
        return a.score != b.score ? a.score > b.score : a.id < b.id;
    });
    all.resize(std::min(k, all.size()));
    return all;
}

inline double bm25(double tf, double len, double avg, double df, double n, double k1, double b) {
    double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
    return idf * tf / (tf + k1 * (1.0 - b + b * len / avg));
}

// Per query: doc -> max passage score, doc id = passage id before the last separator.
inline std::map<std::string, std::map<std::string, double>> group_by_max(const irbench::Ranking& run,
                                                                        char separator = '#') {
    std::map<std::string, std::map<std::string, double>> out;
    for (const auto& [qid, list] : run.queries) {
        auto& docs = out[qid];
        for (const auto& p : list) {
            auto doc = p.doc_id.substr(0, p.doc_id.rfind(separator));
            auto it = docs.find(doc);
            if (it == docs.end() || p.score > it->second) {
                docs[doc] = p.score;
            }
        }
    }
    return out;
}

}  // namespace oracle

namespace fixture {

// A sorted ranked list with ranks 1..n and strictly positive scores.
inline irbench::RankedList ranked(const std::vector<std::pair<std::string, double>>& items) {
    irbench::RankedList list;
    for (const auto& [id, s] : items) {
        list.push_back({id, s, 0});
    }
    std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
        return a.score != b.score ? a.score > b.score : a.doc_id < b.doc_id;
    });
    for (std::size_t i = 0; i < list.size(); ++i) {
        list[i].rank = static_cast<int>(i + 1);
    }
    return list;
}

struct EvalInstance {
    irbench::Ranking run;
    irbench::QrelSet qrels;
};

// <= 50 docs, <= 10 queries, grades 0..2; runs may miss queries, contain
// unjudged docs and ties.
inline EvalInstance random_eval_instance(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num_docs(1, 50);
    std::uniform_int_distribution<int> num_queries(1, 10);
    std::uniform_int_distribution<int> grade(0, 2);
    std::uniform_int_distribution<int> coin(0, 9);
    EvalInstance inst;
    const int nd = num_docs(rng);
    const int nq = num_queries(rng);
    for (int q = 0; q < nq; ++q) {
        const auto qid = "q" + std::to_string(q);
        std::vector<int> docs(static_cast<std::size_t>(nd));
        for (int d = 0; d < nd; ++d) {
            docs[static_cast<std::size_t>(d)] = d;
        }
        std::shuffle(docs.begin(), docs.end(), rng);
        std::uniform_int_distribution<int> judged_count(0, nd);
        const int nj = judged_count(rng);
        for (int j = 0; j < nj; ++j) {
            inst.qrels.judgments[qid]["d" + std::to_string(docs[static_cast<std::size_t>(j)])] = grade(rng);
        }
        if (nj == 0 && coin(rng) < 5) {
            inst.qrels.judgments[qid];
        }
        if (coin(rng) == 0) {
            continue;  // query missing from the run
        }
        std::shuffle(docs.begin(), docs.end(), rng);
        std::uniform_int_distribution<int> depth(0, nd);
        const int n = depth(rng);
        std::vector<std::pair<std::string, double>> items;
        for (int i = 0; i < n; ++i) {
            // coarse scores force ties
            items.emplace_back("d" + std::to_string(docs[static_cast<std::size_t>(i)]),
                               static_cast<double>(std::uniform_int_distribution<int>(1, 20)(rng)) / 4.0);
        }
        if (!items.empty()) {
            inst.run.queries[qid] = ranked(items);
        }
    }
    return inst;
}

inline std::string run_text(const irbench::Ranking& run) {
    std::ostringstream out;
    for (const auto& [qid, list] : run.queries) {
        for (const auto& d : list) {
            out << qid << " Q0 " << d.doc_id << ' ' << d.rank << ' ' << d.score << " fixture\n";
        }
    }
    return out.str();
}

// Every registry dataset gets the same two judged queries: q1 {a1:2, a2:1},
// q2 {b1:1, b2:0}.
inline std::map<std::string, irbench::QrelSet> leaderboard_qrels(std::span<const irbench::DatasetSpec> specs) {
    std::map<std::string, irbench::QrelSet> store;
    for (const auto& s : specs) {
        auto& q = store[s.name];
        q.judgments["q1"] = {{"a1", 2}, {"a2", 1}};
        q.judgments["q2"] = {{"b1", 1}, {"b2", 0}};
    }
    return store;
}

// `depth` results per query; the judged documents lead so the lists are ideal.
inline irbench::Ranking leaderboard_run(std::size_t depth, bool ideal = true) {
    irbench::Ranking run;
    for (const std::string qid : {"q1", "q2"}) {
        std::vector<std::string> ids;
        if (ideal) {
            if (qid == "q1") {
                ids = {"a1", "a2"};
            } else {
                ids = {"b1"};
            }
        }
        for (std::size_t i = ids.size(), f = 0; i < depth; ++i, ++f) {
            ids.push_back(qid + "-filler" + std::to_string(f));
        }
        irbench::RankedList list;
        for (std::size_t i = 0; i < ids.size(); ++i) {
            list.push_back({ids[i], static_cast<double>(depth - i), static_cast<int>(i + 1)});
        }
        run.queries[qid] = list;
    }
    return run;
}

inline std::map<std::string, std::string> leaderboard_upload(std::span<const irbench::DatasetSpec> specs,
                                                             std::size_t depth, bool ideal = true) {
    std::map<std::string, std::string> texts;
    for (const auto& s : specs) {
        texts[s.slug] = run_text(leaderboard_run(depth, ideal));
    }
    return texts;
}

inline std::map<std::string, std::filesystem::path> write_qrels_files(
    const std::map<std::string, irbench::QrelSet>& store, std::span<const irbench::DatasetSpec> specs,
    const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::map<std::string, std::filesystem::path> paths;
    for (const auto& s : specs) {
        auto path = dir / (s.slug + ".tsv");
        std::ofstream out(path);
        for (const auto& [qid, docs] : store.at(s.name).judgments) {
            for (const auto& [doc, g] : docs) {
                out << qid << '\t' << doc << '\t' << g << '\n';
            }
        }
        paths[s.slug] = path;
    }
    return paths;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static std::atomic<int> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("irbench-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

}  // namespace fixture
