#include "irbench/analysis.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>

#include <fmt/format.h>

#include "irbench/errors.hpp"

namespace irbench {

namespace {

constexpr std::size_t kMaxWordpieceChars = 100;

struct CodePoint {
    char32_t value = 0;
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Lenient UTF-8 decoding: invalid bytes decode as U+FFFD, one byte each.
std::vector<CodePoint> decode_utf8(std::string_view s) {
    std::vector<CodePoint> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        char32_t cp = 0xFFFD;
        if (c < 0x80) {
            cp = c;
        } else if ((c >> 5) == 0x6) {
            len = 2;
            cp = c & 0x1F;
        } else if ((c >> 4) == 0xE) {
            len = 3;
            cp = c & 0x0F;
        } else if ((c >> 3) == 0x1E) {
            len = 4;
            cp = c & 0x07;
        } else {
            out.push_back({0xFFFD, i, i + 1});
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back({0xFFFD, i, i + 1});
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc >> 6) != 0x2) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            out.push_back({0xFFFD, i, i + 1});
            ++i;
            continue;
        }
        out.push_back({cp, i, i + len});
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_space(char32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\v' || cp == '\f' ||
           cp == 0x85 || cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
           cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F || cp == 0x3000;
}

bool is_control(char32_t cp) {
    return cp < 0x20 || cp == 0x7F || (cp >= 0x80 && cp < 0xA0) || cp == 0xFFFD ||
           (cp >= 0x200B && cp <= 0x200F) || cp == 0xFEFF;
}

// Punctuation and symbol blocks; everything else that is not space/control
// counts as a word character.
bool is_punct_or_symbol(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 33 && cp <= 47) || (cp >= 58 && cp <= 64) || (cp >= 91 && cp <= 96) ||
               (cp >= 123 && cp <= 126);
    }
    return (cp >= 0xA1 && cp <= 0xBF) || cp == 0xD7 || cp == 0xF7 ||
           (cp >= 0x2010 && cp <= 0x2027) || (cp >= 0x2030 && cp <= 0x205E) ||
           (cp >= 0x20A0 && cp <= 0x20CF) || (cp >= 0x2190 && cp <= 0x2BFF) ||
           (cp >= 0x3001 && cp <= 0x303F) || (cp >= 0xFE30 && cp <= 0xFE4F) ||
           (cp >= 0xFF01 && cp <= 0xFF0F) || (cp >= 0xFF1A && cp <= 0xFF20) ||
           (cp >= 0xFF3B && cp <= 0xFF40) || (cp >= 0xFF5B && cp <= 0xFF65) ||
           (cp >= 0x1F000 && cp <= 0x1FAFF);
}

bool is_cjk(char32_t cp) {
    return (cp >= 0x4E00 && cp <= 0x9FFF) || (cp >= 0x3400 && cp <= 0x4DBF) ||
           (cp >= 0x20000 && cp <= 0x2A6DF) || (cp >= 0x2A700 && cp <= 0x2CEAF) ||
           (cp >= 0xF900 && cp <= 0xFAFF) || (cp >= 0x2F800 && cp <= 0x2FA1F);
}

bool is_word_char(char32_t cp) {
    return !is_space(cp) && !is_control(cp) && !is_punct_or_symbol(cp);
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') {
        return cp + 32;
    }
    if ((cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) || (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) ||
        (cp >= 0x410 && cp <= 0x42F)) {
        return cp + 32;
    }
    if (cp >= 0x400 && cp <= 0x40F) {
        return cp + 80;
    }
    if (cp >= 0x100 && cp <= 0x17F && cp % 2 == 0 && cp != 0x130 && cp != 0x138) {
        return cp + 1;  // Latin Extended-A pairs (approximate)
    }
    return cp;
}

bool is_upper(char32_t cp) { return to_lower(cp) != cp; }

bool is_apostrophe(char32_t cp) { return cp == '\'' || cp == 0x2019; }

struct Word {
    std::string text;  // lowercased when requested
    std::size_t begin = 0;
    std::size_t end = 0;
};

// Words are maximal runs of word characters; CJK ideographs stand alone.
// With `keep_punct`, each punctuation/symbol code point is its own word.
// With `strip_possessive`, a trailing 's after a word is dropped.
std::vector<Word> split_words(std::string_view text, bool lowercase, bool keep_punct,
                              bool strip_possessive) {
    auto cps = decode_utf8(text);
    std::vector<Word> words;
    Word cur;
    bool open = false;
    auto flush = [&] {
        if (open) {
            words.push_back(std::move(cur));
            cur = Word{};
            open = false;
        }
    };
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const auto& c = cps[i];
        if (strip_possessive && open && is_apostrophe(c.value) && i + 1 < cps.size() &&
            (cps[i + 1].value == 's' || cps[i + 1].value == 'S') &&
            (i + 2 == cps.size() || !is_word_char(cps[i + 2].value))) {
            flush();
            ++i;
            continue;
        }
        if (is_cjk(c.value) || (keep_punct && is_punct_or_symbol(c.value))) {
            flush();
            Word w;
            append_utf8(w.text, lowercase ? to_lower(c.value) : c.value);
            w.begin = c.begin;
            w.end = c.end;
            words.push_back(std::move(w));
            continue;
        }
        if (!is_word_char(c.value)) {
            flush();
            continue;
        }
        if (!open) {
            cur.begin = c.begin;
            open = true;
        }
        append_utf8(cur.text, lowercase ? to_lower(c.value) : c.value);
        cur.end = c.end;
    }
    flush();
    return words;
}

std::vector<Token> english_tokens(std::string_view text, const std::set<std::string>& stopwords) {
    std::vector<Token> out;
    for (auto& w : split_words(text, /*lowercase=*/true, /*keep_punct=*/false,
                               /*strip_possessive=*/true)) {
        if (stopwords.count(w.text) != 0) {
            continue;
        }
        out.push_back({porter_stem(w.text), w.begin, w.end});
    }
    return out;
}

std::vector<Token> wordpiece_tokens(std::string_view text, const Vocab& vocab) {
    std::vector<Token> out;
    for (auto& w : split_words(text, /*lowercase=*/true, /*keep_punct=*/true,
                               /*strip_possessive=*/false)) {
        for (auto& piece : wordpiece_word(w.text, vocab)) {
            out.push_back({std::move(piece), w.begin, w.end});
        }
    }
    return out;
}

std::vector<Token> whitespace_tokens(std::string_view text) {
    std::vector<Token> out;
    auto cps = decode_utf8(text);
    std::size_t i = 0;
    while (i < cps.size()) {
        while (i < cps.size() && is_space(cps[i].value)) {
            ++i;
        }
        if (i == cps.size()) {
            break;
        }
        std::size_t j = i;
        while (j < cps.size() && !is_space(cps[j].value)) {
            ++j;
        }
        auto b = cps[i].begin;
        auto e = cps[j - 1].end;
        out.push_back({std::string(text.substr(b, e - b)), b, e});
        i = j;
    }
    return out;
}

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    // field separator so ("ab","c") and ("a","bc") differ
    h ^= 0xFF;
    h *= 0x100000001b3ULL;
    return h;
}

}  // namespace

std::string_view to_string(AnalyzerMode mode) {
    switch (mode) {
        case AnalyzerMode::english:
            return "english";
        case AnalyzerMode::wordpiece:
            return "wordpiece";
        case AnalyzerMode::whitespace:
            return "whitespace";
    }
    return "unknown";
}

AnalyzerMode parse_analyzer_mode(std::string_view name) {
    if (name == "english") {
        return AnalyzerMode::english;
    }
    if (name == "wordpiece") {
        return AnalyzerMode::wordpiece;
    }
    if (name == "whitespace") {
        return AnalyzerMode::whitespace;
    }
    throw PreconditionError(fmt::format("unknown analyzer \"{}\"", name));
}

Vocab::Vocab(std::vector<std::string> tokens, std::string unknown)
    : m_tokens(std::move(tokens)), m_unknown(std::move(unknown)) {
    for (std::size_t i = 0; i < m_tokens.size(); ++i) {
        m_ids.emplace(m_tokens[i], i);
    }
    if (m_tokens.empty()) {
        throw DataError("wordpiece vocabulary is empty");
    }
    if (m_ids.count(m_unknown) == 0) {
        throw DataError(fmt::format("wordpiece vocabulary lacks the unknown symbol {}", m_unknown));
    }
}

Vocab Vocab::load(const std::filesystem::path& path, std::string unknown) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open vocabulary {}", path.string()));
    }
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        tokens.push_back(line);
    }
    return Vocab(std::move(tokens), std::move(unknown));
}

bool Vocab::contains(std::string_view token) const {
    return m_ids.find(std::string(token)) != m_ids.end();
}

const std::set<std::string>& english_stopwords() {
    static const std::set<std::string> words = {
        "a",    "an",    "and",   "are",  "as",   "at",    "be",   "but",   "by",
        "for",  "if",    "in",    "into", "is",   "it",    "no",   "not",   "of",
        "on",   "or",    "such",  "that", "the",  "their", "then", "there", "these",
        "they", "this",  "to",    "was",  "will", "with",
    };
    return words;
}

std::vector<std::string> wordpiece_word(std::string_view word, const Vocab& vocab) {
    auto cps = decode_utf8(word);
    if (cps.empty()) {
        return {};
    }
    if (cps.size() > kMaxWordpieceChars) {
        return {vocab.unknown()};
    }
    std::vector<std::string> pieces;
    std::size_t start = 0;
    std::string candidate;
    while (start < cps.size()) {
        std::size_t end = cps.size();
        bool found = false;
        while (end > start) {
            candidate.clear();
            if (start > 0) {
                candidate = "##";
            }
            candidate.append(word.substr(cps[start].begin, cps[end - 1].end - cps[start].begin));
            if (vocab.contains(candidate)) {
                found = true;
                break;
            }
            --end;
        }
        if (!found) {
            return {vocab.unknown()};
        }
        pieces.push_back(candidate);
        start = end;
    }
    return pieces;
}

Analyzer::Analyzer(AnalyzerConfig config) : m_config(std::move(config)) {
    if (m_config.mode == AnalyzerMode::wordpiece && !m_config.vocab) {
        throw PreconditionError("wordpiece analyzer requires a vocabulary");
    }
}

std::vector<Token> Analyzer::analyze_with_offsets(std::string_view text) const {
    switch (m_config.mode) {
        case AnalyzerMode::english:
            return english_tokens(text, m_config.stopwords);
        case AnalyzerMode::wordpiece:
            return wordpiece_tokens(text, *m_config.vocab);
        case AnalyzerMode::whitespace:
            return whitespace_tokens(text);
    }
    return {};
}

std::vector<std::string> Analyzer::analyze(std::string_view text) const {
    auto tokens = analyze_with_offsets(text);
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (auto& t : tokens) {
        out.push_back(std::move(t.term));
    }
    return out;
}

std::string Analyzer::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = fnv1a(h, "irbench-analyzer-v1");
    h = fnv1a(h, to_string(m_config.mode));
    if (m_config.mode == AnalyzerMode::english) {
        for (const auto& w : m_config.stopwords) {
            h = fnv1a(h, w);
        }
    } else if (m_config.mode == AnalyzerMode::wordpiece) {
        h = fnv1a(h, m_config.vocab->unknown());
        for (const auto& t : m_config.vocab->tokens()) {
            h = fnv1a(h, t);
        }
    }
    return fmt::format("{}-{:016x}", to_string(m_config.mode), h);
}

std::vector<std::string> analyze_english(std::string_view text) {
    return Analyzer(AnalyzerConfig{}).analyze(text);
}

std::vector<std::string> analyze_wordpiece(std::string_view text, const Vocab& vocab) {
    std::vector<std::string> out;
    for (auto& t : wordpiece_tokens(text, vocab)) {
        out.push_back(std::move(t.term));
    }
    return out;
}

std::vector<std::string> analyze_whitespace(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : whitespace_tokens(text)) {
        out.push_back(std::move(t.term));
    }
    return out;
}

const std::set<std::string>& sentence_abbreviations() {
    static const std::set<std::string> abbrevs = {
        "e.g.", "i.e.", "dr.", "mr.", "mrs.", "ms.", "prof.", "vs.", "cf.",
        "al.",  "fig.", "no.", "st.", "jr.", "sr.",  "approx.",
    };
    return abbrevs;
}

std::vector<SentenceSpan> split_sentences(std::string_view text) {
    auto cps = decode_utf8(text);
    std::vector<SentenceSpan> out;
    const auto n = cps.size();
    std::size_t i = 0;
    auto skip_space = [&](std::size_t k) {
        while (k < n && (is_space(cps[k].value) || is_control(cps[k].value))) {
            ++k;
        }
        return k;
    };
    auto is_closer = [](char32_t cp) {
        return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == 0x201D || cp == 0x2019;
    };
    auto is_opener = [](char32_t cp) {
        return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0x201C || cp == 0x2018;
    };
    i = skip_space(0);
    std::size_t start = i;
    while (i < n) {
        char32_t c = cps[i].value;
        if (c != '.' && c != '!' && c != '?') {
            ++i;
            continue;
        }
        std::size_t term_first = i;
        while (i < n && (cps[i].value == '.' || cps[i].value == '!' || cps[i].value == '?')) {
            ++i;
        }
        while (i < n && is_closer(cps[i].value)) {
            ++i;
        }
        std::size_t sentence_end = i;  // exclusive code point index
        bool boundary = false;
        if (i == n) {
            boundary = true;
        } else if (is_space(cps[i].value)) {
            std::size_t k = skip_space(i);
            while (k < n && is_opener(cps[k].value)) {
                ++k;
            }
            boundary = k == n || is_upper(cps[k].value) ||
                       (cps[k].value >= '0' && cps[k].value <= '9');
        }
        if (boundary && cps[term_first].value == '.' && sentence_end == term_first + 1) {
            // Abbreviation guard: the whitespace-delimited word ending here.
            std::size_t w = term_first;
            while (w > start && !is_space(cps[w - 1].value)) {
                --w;
            }
            while (w < term_first && is_opener(cps[w].value)) {
                ++w;
            }
            std::string word;
            for (std::size_t k = w; k <= term_first; ++k) {
                append_utf8(word, to_lower(cps[k].value));
            }
            if (sentence_abbreviations().count(word) != 0) {
                boundary = false;
            }
        }
        if (boundary) {
            out.push_back({cps[start].begin, cps[sentence_end - 1].end});
            i = skip_space(sentence_end);
            start = i;
        }
    }
    if (start < n) {
        std::size_t last = n;
        while (last > start && (is_space(cps[last - 1].value) || is_control(cps[last - 1].value))) {
            --last;
        }
        if (last > start) {
            out.push_back({cps[start].begin, cps[last - 1].end});
        }
    }
    return out;
}

void WindowConfig::validate() const {
    if (window_size < 1) {
        throw PreconditionError("window size must be >= 1");
    }
    if (stride < 1 || stride > window_size) {
        throw PreconditionError("stride must be in [1, window size]");
    }
}

std::vector<WindowSpan> make_windows(std::size_t num_sentences, const WindowConfig& cfg) {
    cfg.validate();
    std::vector<WindowSpan> out;
    for (std::size_t s = 0; s < num_sentences; s += cfg.stride) {
        WindowSpan span{s, std::min(s + cfg.window_size, num_sentences)};
        // Starts increase, so containment in the previous window reduces to
        // sharing its end.
        if (!out.empty() && span.end <= out.back().end) {
            continue;
        }
        out.push_back(span);
    }
    return out;
}

std::string Passage::id(std::string_view separator) const {
    return fmt::format("{}{}{}", parent_doc_id, separator, window_index);
}

std::vector<Passage> segment_document(const Document& doc, const WindowConfig& cfg) {
    auto sentences = split_sentences(doc.text);
    auto windows = make_windows(sentences.size(), cfg);
    std::vector<Passage> out;
    if (windows.empty()) {
        out.push_back(Passage{doc.id, 0, "", WindowSpan{0, 0}});
        return out;
    }
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const auto& span = windows[w];
        auto begin = sentences[span.start].begin;
        auto end = sentences[span.end - 1].end;
        out.push_back(Passage{doc.id, w, doc.text.substr(begin, end - begin), span});
    }
    return out;
}

std::string first_p(std::string_view text, std::size_t n_tokens, const Analyzer& analyzer) {
    if (n_tokens < 1) {
        throw PreconditionError("first_p requires n_tokens >= 1");
    }
    auto tokens = analyzer.analyze_with_offsets(text);
    if (tokens.size() <= n_tokens) {
        return std::string(text);
    }
    return std::string(text.substr(0, tokens[n_tokens - 1].end));
}

}  // namespace irbench
