#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "irbench/dataset.hpp"

namespace irbench {

enum class AnalyzerMode { english, wordpiece, whitespace };

std::string_view to_string(AnalyzerMode mode);
AnalyzerMode parse_analyzer_mode(std::string_view name);

/// Subword vocabulary. Line number in the vocab file is the token id.
class Vocab {
  public:
    Vocab(std::vector<std::string> tokens, std::string unknown = "[UNK]");

    static Vocab load(const std::filesystem::path& path, std::string unknown = "[UNK]");

    [[nodiscard]] bool contains(std::string_view token) const;
    [[nodiscard]] const std::string& unknown() const { return m_unknown; }
    [[nodiscard]] const std::vector<std::string>& tokens() const { return m_tokens; }

  private:
    std::vector<std::string> m_tokens;
    std::unordered_map<std::string, std::size_t> m_ids;
    std::string m_unknown;
};

/// The fixed 33-word English stopword list applied by the english analyzer.
const std::set<std::string>& english_stopwords();

struct AnalyzerConfig {
    AnalyzerMode mode = AnalyzerMode::english;
    std::shared_ptr<const Vocab> vocab;  // required iff mode == wordpiece
    std::set<std::string> stopwords = english_stopwords();
};

/// An analyzed token and the byte range of the source word it came from.
struct Token {
    std::string term;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Porter (1980) suffix stripping on a lowercase word.
std::string porter_stem(std::string_view word);

class Analyzer {
  public:
    explicit Analyzer(AnalyzerConfig config);

    [[nodiscard]] std::vector<std::string> analyze(std::string_view text) const;
    [[nodiscard]] std::vector<Token> analyze_with_offsets(std::string_view text) const;

    /// Stable hash of everything that influences the token stream.
    [[nodiscard]] std::string fingerprint() const;
    [[nodiscard]] const AnalyzerConfig& config() const { return m_config; }

  private:
    AnalyzerConfig m_config;
};

/// lowercase -> split on non-alphanumeric -> stopwords -> Porter stemming.
std::vector<std::string> analyze_english(std::string_view text);
std::vector<std::string> analyze_wordpiece(std::string_view text, const Vocab& vocab);
std::vector<std::string> analyze_whitespace(std::string_view text);

/// Greedy longest-prefix decomposition of one (already lowercased) word.
/// Returns {vocab.unknown()} when no full decomposition exists.
std::vector<std::string> wordpiece_word(std::string_view word, const Vocab& vocab);

/// Half-open byte range of one sentence in the source text.
struct SentenceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const SentenceSpan&) const = default;
};

/// Abbreviations that never end a sentence.
const std::set<std::string>& sentence_abbreviations();

std::vector<SentenceSpan> split_sentences(std::string_view text);

struct WindowConfig {
    std::size_t window_size = 10;
    std::size_t stride = 5;

    void validate() const;
};

/// Half-open range of sentence indices.
struct WindowSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    bool operator==(const WindowSpan&) const = default;
};

std::vector<WindowSpan> make_windows(std::size_t num_sentences, const WindowConfig& cfg);

struct Passage {
    std::string parent_doc_id;
    std::size_t window_index = 0;
    std::string text;
    WindowSpan sentence_span;

    [[nodiscard]] std::string id(std::string_view separator) const;
};

/// Splits a document's text into sliding sentence windows. A document without
/// sentences yields a single empty passage so it stays addressable.
std::vector<Passage> segment_document(const Document& doc, const WindowConfig& cfg);

/// Prefix of `text` covering its first `n_tokens` analyzer tokens, cut at the
/// end of the source word of the last kept token.
std::string first_p(std::string_view text, std::size_t n_tokens, const Analyzer& analyzer);

}  // namespace irbench
