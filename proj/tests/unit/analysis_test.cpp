#include <doctest.h>

#include <random>

#include "irbench/analysis.hpp"
#include "irbench/errors.hpp"

using namespace irbench;

namespace {

std::string strip_continuations(const std::vector<std::string>& pieces) {
    std::string out;
    for (const auto& p : pieces) {
        out += p.rfind("##", 0) == 0 ? p.substr(2) : p;
    }
    return out;
}

}  // namespace

TEST_CASE("porter stemmer reference outputs") {
    const std::vector<std::pair<std::string, std::string>> cases = {
        {"caresses", "caress"}, {"ponies", "poni"},       {"cats", "cat"},
        {"running", "run"},     {"hopping", "hop"},       {"relational", "relat"},
        {"conditional", "condit"}, {"generalization", "gener"}, {"agreed", "agre"},
        {"happy", "happi"},     {"hopeful", "hope"},      {"electricity", "electr"},
        {"adjustable", "adjust"}, {"controlling", "control"}, {"sky", "sky"},
        {"feed", "feed"},       {"motoring", "motor"},    {"sing", "sing"},
        {"probate", "probat"},  {"rate", "rate"},         {"cease", "ceas"},
    };
    for (const auto& [word, stem] : cases) {
        CHECK_MESSAGE(porter_stem(word) == stem, word);
    }
}

TEST_CASE("english analyzer") {
    CHECK(analyze_english("Cats are running") == std::vector<std::string>{"cat", "run"});
    CHECK(analyze_english("The dog's bone, and THE cat.") == std::vector<std::string>{"dog", "bone", "cat"});
    CHECK(analyze_english("").empty());
    CHECK(analyze_english("a an the of").empty());
}

TEST_CASE("whitespace analyzer keeps case and punctuation") {
    CHECK(analyze_whitespace("  Cat sat.  dog ") == std::vector<std::string>{"Cat", "sat.", "dog"});
}

TEST_CASE("wordpiece greedy longest prefix") {
    Vocab vocab({"[UNK]", "un", "##aff", "##able", "##a", "aff", "a", "cat", ",", "!"});
    CHECK(wordpiece_word("unaffable", vocab) == std::vector<std::string>{"un", "##aff", "##able"});
    CHECK(wordpiece_word("xyz", vocab) == std::vector<std::string>{"[UNK]"});
    CHECK(analyze_wordpiece("Unaffable cat, CAT!", vocab) ==
          std::vector<std::string>{"un", "##aff", "##able", "cat", ",", "cat", "!"});
    CHECK_THROWS_AS(Vocab({"a", "b"}), DataError);
}

TEST_CASE("wordpiece pieces concatenate back to the word") {
    Vocab vocab({"[UNK]", "a", "b", "c", "ab", "abc", "##a", "##b", "##c", "##bc", "##ca"});
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> len(1, 12);
    std::uniform_int_distribution<int> letter(0, 2);
    for (int trial = 0; trial < 500; ++trial) {
        std::string word;
        for (int i = len(rng); i > 0; --i) {
            word.push_back(static_cast<char>('a' + letter(rng)));
        }
        auto pieces = wordpiece_word(word, vocab);
        REQUIRE(!pieces.empty());
        CHECK(pieces[0].rfind("##", 0) != 0);
        CHECK(strip_continuations(pieces) == word);
    }
}

TEST_CASE("analyzer fingerprint depends on configuration") {
    AnalyzerConfig a;
    AnalyzerConfig b;
    b.stopwords.clear();
    AnalyzerConfig c;
    c.mode = AnalyzerMode::whitespace;
    CHECK(Analyzer(a).fingerprint() == Analyzer(AnalyzerConfig{}).fingerprint());
    CHECK(Analyzer(a).fingerprint() != Analyzer(b).fingerprint());
    CHECK(Analyzer(a).fingerprint().rfind("english-", 0) == 0);
    CHECK(Analyzer(c).fingerprint().rfind("whitespace-", 0) == 0);
    AnalyzerConfig wp;
    wp.mode = AnalyzerMode::wordpiece;
    CHECK_THROWS_AS(Analyzer{wp}, PreconditionError);
}

TEST_CASE("sentence splitting") {
    auto text = std::string("Dr. Smith arrived. He sat down! Was it late? e.g. not really. Yes.");
    auto spans = split_sentences(text);
    REQUIRE(spans.size() == 4);
    CHECK(text.substr(spans[0].begin, spans[0].end - spans[0].begin) == "Dr. Smith arrived.");
    CHECK(text.substr(spans[3].begin, spans[3].end - spans[3].begin) == "Yes.");
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("no terminator here").size() == 1);
}

TEST_CASE("sliding windows") {
    CHECK(make_windows(12, {10, 5}) == std::vector<WindowSpan>{{0, 10}, {5, 12}});
    CHECK(make_windows(10, {10, 5}) == std::vector<WindowSpan>{{0, 10}});
    CHECK(make_windows(3, {10, 5}) == std::vector<WindowSpan>{{0, 3}});
    CHECK(make_windows(0, {10, 5}).empty());
    CHECK(make_windows(9, {4, 2}) == std::vector<WindowSpan>{{0, 4}, {2, 6}, {4, 8}, {6, 9}});
    CHECK_THROWS_AS((WindowConfig{5, 6}.validate()), PreconditionError);
    CHECK_THROWS_AS((WindowConfig{0, 0}.validate()), PreconditionError);
}

TEST_CASE("windows cover every sentence") {
    for (std::size_t n = 1; n < 40; ++n) {
        for (std::size_t w = 1; w <= 8; ++w) {
            for (std::size_t s = 1; s <= w; ++s) {
                auto spans = make_windows(n, {w, s});
                REQUIRE(!spans.empty());
                CHECK(spans.front().start == 0);
                CHECK(spans.back().end == n);
                for (std::size_t i = 1; i < spans.size(); ++i) {
                    CHECK(spans[i].start <= spans[i - 1].end);
                    CHECK(spans[i].end > spans[i - 1].end);
                }
            }
        }
    }
}

TEST_CASE("segmenting a 12-sentence document") {
    std::string text;
    for (int i = 0; i < 12; ++i) {
        text += "Sentence number " + std::to_string(i) + " is here. ";
    }
    auto passages = segment_document(Document{"doc", "Title", text}, {10, 5});
    REQUIRE(passages.size() == 2);
    CHECK(passages[0].id("#") == "doc#0");
    CHECK(passages[1].id("#") == "doc#1");
    CHECK(passages[1].sentence_span == WindowSpan{5, 12});
    CHECK(passages[0].text.rfind("Sentence number 0", 0) == 0);
    CHECK(passages[1].text.find("Sentence number 11 is here.") != std::string::npos);

    auto empty = segment_document(Document{"e", "", ""}, {10, 5});
    REQUIRE(empty.size() == 1);
    CHECK(empty[0].text.empty());
}

TEST_CASE("first_p keeps a token prefix") {
    Analyzer ws(AnalyzerConfig{AnalyzerMode::whitespace, nullptr, {}});
    CHECK(first_p("one two three four", 2, ws) == "one two");
    CHECK(first_p("one two", 5, ws) == "one two");
    CHECK_THROWS_AS(first_p("x", 0, ws), PreconditionError);
}
