#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "irbench/analysis.hpp"
#include "irbench/dataset.hpp"

namespace irbench {

inline constexpr std::string_view kContentsField = "contents";
inline constexpr std::string_view kTitleField = "title";

enum class FieldMode { flat, multifield };

std::string_view to_string(FieldMode mode);

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;

    void validate() const;
};

/// IDF = ln(1 + (N - df + 0.5) / (df + 0.5)),
/// score = IDF * tf / (tf + k1 * (1 - b + b * doc_len / avg_len)).
/// Throws PreconditionError unless N >= df >= 1, tf >= 1 and avg_len > 0.
double bm25_term_score(double tf, double doc_len, double avg_len, std::uint64_t df,
                       std::uint64_t num_docs, const Bm25Params& params);

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    bool operator==(const Posting&) const = default;
};

struct FieldIndex {
    std::unordered_map<std::string, std::vector<Posting>> postings;
    std::vector<std::uint32_t> doc_lengths;
    std::uint64_t total_length = 0;

    [[nodiscard]] double average_length() const;
    [[nodiscard]] const std::vector<Posting>* find(const std::string& term) const;
};

/// Field name -> weight, e.g. {contents: 1, title: 1}.
using FieldWeights = std::map<std::string, double>;

/// Parses `name=weight` pairs.
FieldWeights parse_field_weights(std::span<const std::string> pairs);

class InvertedIndex {
  public:
    InvertedIndex(AnalyzerConfig analyzer, FieldMode mode);

    /// Appends one document; ordinals follow insertion order.
    void add(const Document& doc);

    [[nodiscard]] FieldMode field_mode() const { return m_mode; }
    [[nodiscard]] std::uint32_t doc_count() const {
        return static_cast<std::uint32_t>(m_doc_ids.size());
    }
    [[nodiscard]] const std::string& doc_id(std::uint32_t ordinal) const {
        return m_doc_ids[ordinal];
    }
    [[nodiscard]] const std::vector<std::string>& doc_ids() const { return m_doc_ids; }
    [[nodiscard]] const std::map<std::string, FieldIndex, std::less<>>& fields() const {
        return m_fields;
    }
    [[nodiscard]] const FieldIndex* field(std::string_view name) const;
    [[nodiscard]] const Analyzer& analyzer() const { return m_analyzer; }
    [[nodiscard]] std::string fingerprint() const { return m_analyzer.fingerprint(); }

    /// Weights used when the caller does not name fields: every field at 1.0.
    [[nodiscard]] FieldWeights default_field_weights() const;

    /// Versioned directory: manifest.json, docids.txt, one postings file per
    /// field, and vocab.txt for wordpiece analyzers.
    void save(const std::filesystem::path& dir) const;
    static InvertedIndex load(const std::filesystem::path& dir);

  private:
    void index_field(std::string_view field, std::uint32_t ordinal, std::string_view text);

    Analyzer m_analyzer;
    FieldMode m_mode;
    std::map<std::string, FieldIndex, std::less<>> m_fields;
    std::vector<std::string> m_doc_ids;
};

InvertedIndex build_lexical_index(std::span<const Document> corpus, const AnalyzerConfig& analyzer,
                                  FieldMode mode);
InvertedIndex build_lexical_index(const std::filesystem::path& corpus_path,
                                  const AnalyzerConfig& analyzer, FieldMode mode);

/// Weighted sum over fields of per-field BM25. Top-k by score, ties by doc id
/// ascending, zero-score documents omitted. Unknown field -> DataError.
RankedList search_bm25(const InvertedIndex& index, std::string_view query, std::size_t k,
                       const FieldWeights& weights, const Bm25Params& params = {});

/// Selects the top `k` of (ordinal, score) candidates under the standard
/// ordering and converts them to a ranked list.
RankedList top_k(std::vector<std::pair<std::uint32_t, double>> candidates, std::size_t k,
                 const std::vector<std::string>& doc_ids);

}  // namespace irbench
