#include "irbench/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "irbench/errors.hpp"
#include "json.hpp"

namespace irbench {

using nlohmann::json;

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::optional<long long> parse_int(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::optional<double> parse_double(std::string_view s) {
    // from_chars for double is unavailable on some libstdc++ builds; strtod
    // on a bounded copy is fine here.
    std::string buf(s);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size()) {
        return std::nullopt;
    }
    return v;
}

bool blank(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open {}", path.string()));
    }
    return in;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string id_field(const json& rec, std::size_t line_number) {
    auto it = rec.find("_id");
    if (it == rec.end()) {
        throw DataError(fmt::format("line {}: missing \"_id\"", line_number));
    }
    std::string id = it->is_string() ? it->get<std::string>() : it->dump();
    if (id.empty()) {
        throw DataError(fmt::format("line {}: empty \"_id\"", line_number));
    }
    return id;
}

}  // namespace

const std::map<std::string, int>* QrelSet::find(const std::string& query_id) const {
    auto it = judgments.find(query_id);
    return it == judgments.end() ? nullptr : &it->second;
}

std::size_t QrelSet::size() const {
    std::size_t n = 0;
    for (const auto& [_, docs] : judgments) {
        n += docs.size();
    }
    return n;
}

Document parse_document(std::string_view line, std::size_t line_number) {
    json rec;
    try {
        rec = json::parse(line);
    } catch (const json::parse_error& e) {
        throw DataError(fmt::format("line {}: malformed record: {}", line_number, e.what()));
    }
    if (!rec.is_object()) {
        throw DataError(fmt::format("line {}: record is not an object", line_number));
    }
    Document doc;
    doc.id = id_field(rec, line_number);
    if (auto it = rec.find("title"); it != rec.end() && it->is_string()) {
        doc.title = it->get<std::string>();
    }
    if (auto it = rec.find("text"); it != rec.end() && it->is_string()) {
        doc.text = it->get<std::string>();
    } else if (it == rec.end()) {
        throw DataError(fmt::format("line {}: missing \"text\"", line_number));
    }
    return doc;
}

CorpusReader::CorpusReader(const std::filesystem::path& path)
    : m_path(path), m_in(open_or_throw(path)) {}

std::optional<Document> CorpusReader::next() {
    std::string line;
    while (std::getline(m_in, line)) {
        ++m_line;
        if (blank(line)) {
            continue;
        }
        Document doc = parse_document(line, m_line);
        if (!m_seen.insert(doc.id).second) {
            throw DataError(fmt::format("{}:{}: duplicate document id \"{}\"", m_path.string(),
                                        m_line, doc.id));
        }
        return doc;
    }
    return std::nullopt;
}

void for_each_document(const std::filesystem::path& path,
                       const std::function<void(Document&&)>& fn) {
    CorpusReader reader(path);
    while (auto doc = reader.next()) {
        fn(std::move(*doc));
    }
}

std::vector<Document> load_corpus(const std::filesystem::path& path) {
    std::vector<Document> docs;
    for_each_document(path, [&](Document&& d) { docs.push_back(std::move(d)); });
    return docs;
}

std::vector<Query> load_queries(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    std::vector<Query> out;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (blank(line)) {
            continue;
        }
        Query q;
        auto first = line.find_first_not_of(" \t");
        if (line[first] == '{') {
            json rec;
            try {
                rec = json::parse(line);
            } catch (const json::parse_error& e) {
                throw DataError(fmt::format("{}:{}: malformed record: {}", path.string(),
                                            line_number, e.what()));
            }
            q.id = id_field(rec, line_number);
            q.text = rec.value("text", "");
        } else {
            auto tab = line.find('\t');
            if (tab == std::string::npos) {
                throw DataError(fmt::format("{}:{}: expected `qid<TAB>text`", path.string(),
                                            line_number));
            }
            q.id = line.substr(0, tab);
            q.text = line.substr(tab + 1);
            if (q.id.empty()) {
                throw DataError(fmt::format("{}:{}: empty query id", path.string(), line_number));
            }
        }
        if (!seen.insert(q.id).second) {
            throw DataError(
                fmt::format("{}:{}: duplicate query id \"{}\"", path.string(), line_number, q.id));
        }
        out.push_back(std::move(q));
    }
    return out;
}

QrelLoadResult parse_qrels(std::istream& in) {
    QrelLoadResult result;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        auto cols = split_ws(line);
        if (cols.empty()) {
            continue;
        }
        std::string_view qid;
        std::string_view docid;
        std::string_view grade_text;
        if (cols.size() == 3) {
            qid = cols[0];
            docid = cols[1];
            grade_text = cols[2];
        } else if (cols.size() == 4) {
            qid = cols[0];
            docid = cols[2];
            grade_text = cols[3];
        } else {
            throw DataError(
                fmt::format("qrels line {}: expected 3 or 4 columns, got {}", line_number, cols.size()));
        }
        auto grade = parse_int(grade_text);
        if (!grade) {
            if (line_number == 1 && cols.size() == 3) {
                continue;  // header row
            }
            throw DataError(fmt::format("qrels line {}: grade \"{}\" is not an integer", line_number,
                                        grade_text));
        }
        if (*grade < 0) {
            throw DataError(fmt::format("qrels line {}: negative grade {}", line_number, *grade));
        }
        auto& docs = result.qrels.judgments[std::string(qid)];
        auto [it, inserted] = docs.insert_or_assign(std::string(docid), static_cast<int>(*grade));
        if (!inserted) {
            ++result.duplicates;
        }
    }
    return result;
}

QrelLoadResult load_qrels(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    try {
        return parse_qrels(in);
    } catch (const DataError& e) {
        throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

void sort_and_rank(RankedList& list) {
    std::sort(list.begin(), list.end(), [](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return a.doc_id < b.doc_id;
    });
    for (std::size_t i = 0; i < list.size(); ++i) {
        list[i].rank = static_cast<int>(i + 1);
    }
}

void validate_ranking(const Ranking& ranking) {
    for (const auto& [qid, list] : ranking.queries) {
        std::unordered_set<std::string_view> seen;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& e = list[i];
            if (e.rank != static_cast<int>(i + 1)) {
                throw DataError(fmt::format("query {}: rank gap (expected rank {}, found {})", qid,
                                            i + 1, e.rank));
            }
            if (!seen.insert(e.doc_id).second) {
                throw DataError(fmt::format("query {}: duplicate doc id \"{}\"", qid, e.doc_id));
            }
            if (i > 0 && e.score > list[i - 1].score) {
                throw DataError(
                    fmt::format("query {}: score increases at rank {}", qid, e.rank));
            }
        }
    }
}

Ranking parse_run(std::istream& in) {
    Ranking run;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        auto cols = split_ws(line);
        if (cols.empty()) {
            continue;
        }
        if (cols.size() != 6) {
            throw DataError(
                fmt::format("run line {}: expected 6 columns, got {}", line_number, cols.size()));
        }
        auto rank = parse_int(cols[3]);
        auto score = parse_double(cols[4]);
        if (!rank || !score || !std::isfinite(*score)) {
            throw DataError(fmt::format("run line {}: bad rank or score", line_number));
        }
        if (run.tag.empty()) {
            run.tag = std::string(cols[5]);
        }
        run.queries[std::string(cols[0])].push_back(
            ScoredDoc{std::string(cols[2]), *score, static_cast<int>(*rank)});
    }
    for (auto& [_, list] : run.queries) {
        std::stable_sort(list.begin(), list.end(),
                         [](const ScoredDoc& a, const ScoredDoc& b) { return a.rank < b.rank; });
    }
    validate_ranking(run);
    return run;
}

Ranking read_run(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    try {
        return parse_run(in);
    } catch (const DataError& e) {
        throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string format_score(double score) { return fmt::format("{:.6g}", score); }

void write_run(const Ranking& ranking, std::ostream& out) {
    validate_ranking(ranking);
    const std::string tag = ranking.tag.empty() ? "irbench" : ranking.tag;
    for (const auto& [qid, list] : ranking.queries) {
        for (const auto& e : list) {
            out << qid << " Q0 " << e.doc_id << ' ' << e.rank << ' ' << format_score(e.score)
                << ' ' << tag << '\n';
        }
    }
}

void write_run(const Ranking& ranking, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError(fmt::format("cannot write {}", path.string()));
    }
    write_run(ranking, out);
}

const std::vector<DatasetSpec>& registry() {
    static const std::vector<DatasetSpec> specs = {
        {"TREC-COVID", "trec-covid", 50, 66336, 171332, "Bio-Medical IR", "Bio-Medical", 0},
        {"BioASQ", "bioasq", 500, 2359, 14914602, "Bio-Medical IR", "Bio-Medical", 1},
        {"NFCorpus", "nfcorpus", 323, 12334, 3633, "Bio-Medical IR", "Bio-Medical", 2},
        {"NQ", "nq", 3452, 4201, 2681468, "QA", "Wikipedia", 3},
        {"HotpotQA", "hotpotqa", 7405, 14810, 5233329, "QA", "Wikipedia", 4},
        {"FiQA-2018", "fiqa", 648, 1706, 57638, "QA", "Finance", 5},
        {"Signal-1M (RT)", "signal1m", 97, 1899, 2866316, "Tweet-Retrieval", "Twitter", 6},
        {"TREC-NEWS", "trec-news", 57, 15655, 594977, "News-Retrieval", "News", 7},
        {"Robust04", "robust04", 249, 311410, 528155, "News-Retrieval", "News", 8},
        {"ArguAna", "arguana", 1406, 1406, 8674, "Argument-Retrieval", "Misc.", 9},
        {"Touché-2020", "webis-touche2020", 49, 2214, 382545, "Argument-Retrieval", "Misc.", 10},
        {"CQADupStack", "cqadupstack", 13145, 23703, 457199, "Dup. Ques.-Retrieval", "StackExc.", 11},
        {"Quora", "quora", 10000, 15675, 522931, "Dup. Ques.-Retrieval", "Quora", 12},
        {"DBPedia", "dbpedia-entity", 400, 43515, 4635922, "Entity-Retrieval", "Wikipedia", 13},
        {"SCIDOCS", "scidocs", 1000, 29928, 25657, "Citation-Prediction", "Scientific", 14},
        {"FEVER", "fever", 6666, 7937, 5416568, "Fact Checking", "Wikipedia", 15},
        {"Climate-FEVER", "climate-fever", 4681, 4682, 5416593, "Fact Checking", "Wikipedia", 16},
        {"SciFact", "scifact", 300, 339, 5183, "Fact Checking", "Scientific", 17},
    };
    return specs;
}

std::vector<DatasetSpec> load_registry(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw DataError(fmt::format("{}: {}", path.string(), e.what()));
    }
    if (!doc.is_array()) {
        throw DataError(fmt::format("{}: registry must be a JSON array", path.string()));
    }
    std::vector<DatasetSpec> specs;
    for (const auto& row : doc) {
        DatasetSpec s;
        s.name = row.at("name").get<std::string>();
        s.slug = row.value("slug", lower(s.name));
        s.num_queries = row.value("num_queries", 0);
        s.num_judgments = row.value("num_judgments", 0);
        s.num_passages = row.value("num_passages", 0);
        s.task = row.value("task", "");
        s.domain = row.value("domain", "");
        s.display_order = row.value("display_order", static_cast<int>(specs.size()));
        specs.push_back(std::move(s));
    }
    std::sort(specs.begin(), specs.end(), [](const auto& a, const auto& b) {
        return a.display_order < b.display_order;
    });
    return specs;
}

namespace {

// Lowercase ASCII alphanumerics only, Latin-1 accents folded, parenthesised
// groups dropped: "Tóuche-2020 (v2)" and "Touché-2020" both give "touche2020".
std::string loose_key(std::string_view name) {
    static constexpr std::string_view kFold =
        "aaaaaaaceeeeiiiidnooooo/ouuuuypsaaaaaaaceeeeiiiidnooooo/ouuuuypy";
    std::string out;
    int depth = 0;
    for (std::size_t i = 0; i < name.size(); ++i) {
        auto c = static_cast<unsigned char>(name[i]);
        if (c == '(') {
            ++depth;
        } else if (c == ')') {
            depth = std::max(0, depth - 1);
        } else if (depth > 0) {
            continue;
        } else if (c == 0xC3 && i + 1 < name.size()) {
            auto next = static_cast<unsigned char>(name[++i]);
            if (next >= 0x80 && next <= 0xBF) {
                char folded = kFold[next - 0x80];
                if (std::isalpha(static_cast<unsigned char>(folded))) {
                    out.push_back(folded);
                }
            }
        } else if (std::isalnum(c)) {
            out.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    return out;
}

}  // namespace

const DatasetSpec* find_dataset(std::span<const DatasetSpec> specs, std::string_view name) {
    const auto key = lower(name);
    for (const auto& s : specs) {
        if (lower(s.name) == key || lower(s.slug) == key) {
            return &s;
        }
    }
    const auto loose = loose_key(name);
    if (loose.empty()) {
        return nullptr;
    }
    for (const auto& s : specs) {
        if (loose_key(s.name) == loose || loose_key(s.slug) == loose) {
            return &s;
        }
    }
    return nullptr;
}

}  // namespace irbench
