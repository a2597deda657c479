#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace irbench {

struct Document {
    std::string id;
    std::string title;
    std::string text;

    bool operator==(const Document&) const = default;
};

struct Query {
    std::string id;
    std::string text;

    bool operator==(const Query&) const = default;
};

/// Graded judgments: query id -> doc id -> grade (>= 0).
struct QrelSet {
    std::map<std::string, std::map<std::string, int>> judgments;

    [[nodiscard]] const std::map<std::string, int>* find(const std::string& query_id) const;
    [[nodiscard]] std::size_t size() const;
};

struct QrelLoadResult {
    QrelSet qrels;
    /// Number of (qid, docid) pairs that appeared more than once; the last
    /// occurrence wins.
    std::size_t duplicates = 0;
};

struct ScoredDoc {
    std::string doc_id;
    double score = 0.0;
    int rank = 0;

    bool operator==(const ScoredDoc&) const = default;
};

using RankedList = std::vector<ScoredDoc>;

/// A run: per-query ranked lists plus a run tag.
struct Ranking {
    std::string tag;
    std::map<std::string, RankedList> queries;

    bool operator==(const Ranking&) const = default;
};

/// Reads line-delimited corpus records (`_id`, `title`, `text`) one at a time.
/// Only document ids are retained (for the duplicate check); text is never
/// buffered beyond the current line.
class CorpusReader {
  public:
    explicit CorpusReader(const std::filesystem::path& path);

    std::optional<Document> next();
    [[nodiscard]] std::size_t line_number() const { return m_line; }

  private:
    std::filesystem::path m_path;
    std::ifstream m_in;
    std::size_t m_line = 0;
    std::unordered_set<std::string> m_seen;
};

/// Parses one corpus line. `line_number` is only used for error messages.
Document parse_document(std::string_view line, std::size_t line_number);

void for_each_document(const std::filesystem::path& path,
                       const std::function<void(Document&&)>& fn);
std::vector<Document> load_corpus(const std::filesystem::path& path);

/// Topics as JSONL (`_id`, `text`) or TSV (`qid<TAB>text`). File order is kept.
std::vector<Query> load_queries(const std::filesystem::path& path);

/// 3-column (`qid docid grade`, optional header) or 4-column
/// (`qid iter docid grade`) judgments.
QrelLoadResult load_qrels(const std::filesystem::path& path);
QrelLoadResult parse_qrels(std::istream& in);

/// Sorts by score descending, ties by doc id ascending, and assigns ranks 1..n.
void sort_and_rank(RankedList& list);

/// Throws DataError naming the offending query when ranks are not 1..n,
/// doc ids repeat, or scores increase with rank.
void validate_ranking(const Ranking& ranking);

Ranking read_run(const std::filesystem::path& path);
Ranking parse_run(std::istream& in);
void write_run(const Ranking& ranking, const std::filesystem::path& path);
void write_run(const Ranking& ranking, std::ostream& out);

/// Score text as written to run files (6 significant digits).
std::string format_score(double score);

struct DatasetSpec {
    std::string name;
    std::string slug;
    std::int64_t num_queries = 0;
    std::int64_t num_judgments = 0;
    std::int64_t num_passages = 0;
    std::string task;
    std::string domain;
    int display_order = 0;
};

/// The 18 benchmark datasets in canonical table order.
const std::vector<DatasetSpec>& registry();

/// Loads an alternative registry from a JSON array of objects with the
/// DatasetSpec field names. Entries are sorted by display_order.
std::vector<DatasetSpec> load_registry(const std::filesystem::path& path);

/// Matches display name or slug, case-insensitively.
const DatasetSpec* find_dataset(std::span<const DatasetSpec> specs, std::string_view name);

}  // namespace irbench
