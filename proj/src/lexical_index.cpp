#include "irbench/lexical_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "binary_io.hpp"
#include "irbench/errors.hpp"
#include "irbench/index_manifest.hpp"
#include "json.hpp"
#include "manifest_io.hpp"

namespace irbench {

using nlohmann::json;

namespace {

constexpr std::uint32_t kFieldMagic = 0x49464931;  // "1IFI" little-endian on disk

double bm25_unchecked(double tf, double doc_len, double avg_len, std::uint64_t df,
                      std::uint64_t num_docs, const Bm25Params& p) {
    const double n = static_cast<double>(num_docs);
    const double d = static_cast<double>(df);
    const double idf = std::log(1.0 + (n - d + 0.5) / (d + 0.5));
    return idf * tf / (tf + p.k1 * (1.0 - p.b + p.b * doc_len / avg_len));
}

bool ranks_before(double sa, const std::string& ia, double sb, const std::string& ib) {
    if (sa != sb) {
        return sa > sb;
    }
    return ia < ib;
}

void write_field(const std::filesystem::path& path, const FieldIndex& field) {
    detail::BinaryWriter out(path);
    out.u32(kFieldMagic);
    out.u32(static_cast<std::uint32_t>(kIndexFormatVersion));
    out.u32(static_cast<std::uint32_t>(field.doc_lengths.size()));
    for (auto len : field.doc_lengths) {
        out.u32(len);
    }
    out.u64(field.total_length);
    std::vector<const std::string*> terms;
    terms.reserve(field.postings.size());
    for (const auto& [term, _] : field.postings) {
        terms.push_back(&term);
    }
    std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) { return *a < *b; });
    out.u64(terms.size());
    for (const auto* term : terms) {
        const auto& list = field.postings.at(*term);
        out.str(*term);
        out.u32(static_cast<std::uint32_t>(list.size()));
        for (const auto& p : list) {
            out.u32(p.doc);
            out.u32(p.tf);
        }
    }
    out.close();
}

FieldIndex read_field(const std::filesystem::path& path, std::uint32_t doc_count) {
    detail::BinaryReader in(path);
    if (in.u32() != kFieldMagic) {
        throw DataError(fmt::format("{}: not a field postings file", path.string()));
    }
    if (in.u32() != static_cast<std::uint32_t>(kIndexFormatVersion)) {
        throw DataError(fmt::format("{}: unsupported format version", path.string()));
    }
    FieldIndex field;
    auto n = in.u32();
    if (n != doc_count) {
        throw DataError(fmt::format("{}: doc count {} does not match manifest {}", path.string(), n,
                                    doc_count));
    }
    field.doc_lengths.resize(n);
    for (auto& len : field.doc_lengths) {
        len = in.u32();
    }
    field.total_length = in.u64();
    auto num_terms = in.u64();
    field.postings.reserve(num_terms);
    for (std::uint64_t t = 0; t < num_terms; ++t) {
        auto term = in.str();
        auto count = in.u32();
        std::vector<Posting> list(count);
        for (auto& p : list) {
            p.doc = in.u32();
            p.tf = in.u32();
            if (p.doc >= doc_count) {
                throw DataError(fmt::format("{}: posting ordinal out of range", path.string()));
            }
        }
        field.postings.emplace(std::move(term), std::move(list));
    }
    return field;
}

}  // namespace

std::string_view to_string(FieldMode mode) {
    return mode == FieldMode::flat ? "flat" : "multifield";
}

void Bm25Params::validate() const {
    if (!(k1 >= 0.0)) {
        throw PreconditionError(fmt::format("BM25 k1 must be >= 0 (got {})", k1));
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw PreconditionError(fmt::format("BM25 b must be in [0, 1] (got {})", b));
    }
}

double bm25_term_score(double tf, double doc_len, double avg_len, std::uint64_t df,
                       std::uint64_t num_docs, const Bm25Params& params) {
    params.validate();
    if (df < 1 || num_docs < df) {
        throw PreconditionError(fmt::format("BM25 requires N >= df >= 1 (N={}, df={})", num_docs, df));
    }
    if (!(tf >= 1.0)) {
        throw PreconditionError("BM25 requires tf >= 1");
    }
    if (!(avg_len > 0.0)) {
        throw PreconditionError("BM25 requires avg_len > 0");
    }
    return bm25_unchecked(tf, doc_len, avg_len, df, num_docs, params);
}

double FieldIndex::average_length() const {
    if (doc_lengths.empty()) {
        return 0.0;
    }
    return static_cast<double>(total_length) / static_cast<double>(doc_lengths.size());
}

const std::vector<Posting>* FieldIndex::find(const std::string& term) const {
    auto it = postings.find(term);
    return it == postings.end() ? nullptr : &it->second;
}

FieldWeights parse_field_weights(std::span<const std::string> pairs) {
    FieldWeights out;
    for (const auto& p : pairs) {
        auto eq = p.find('=');
        std::string name = p.substr(0, eq);
        double w = 1.0;
        if (eq != std::string::npos) {
            char* end = nullptr;
            auto value = p.substr(eq + 1);
            w = std::strtod(value.c_str(), &end);
            if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(w)) {
                throw PreconditionError(fmt::format("bad field weight \"{}\"", p));
            }
        }
        if (name.empty()) {
            throw PreconditionError(fmt::format("bad field weight \"{}\"", p));
        }
        out[name] = w;
    }
    return out;
}

InvertedIndex::InvertedIndex(AnalyzerConfig analyzer, FieldMode mode)
    : m_analyzer(std::move(analyzer)), m_mode(mode) {
    m_fields[std::string(kContentsField)];
    if (m_mode == FieldMode::multifield) {
        m_fields[std::string(kTitleField)];
    }
}

void InvertedIndex::index_field(std::string_view field, std::uint32_t ordinal,
                                std::string_view text) {
    auto& fi = m_fields.find(field)->second;
    auto terms = m_analyzer.analyze(text);
    std::map<std::string, std::uint32_t> tf;
    for (auto& t : terms) {
        ++tf[std::move(t)];
    }
    for (auto& [term, count] : tf) {
        fi.postings[term].push_back(Posting{ordinal, count});
    }
    fi.doc_lengths.push_back(static_cast<std::uint32_t>(terms.size()));
    fi.total_length += terms.size();
}

void InvertedIndex::add(const Document& doc) {
    if (doc.id.find_first_of("\r\n") != std::string::npos) {
        throw DataError(fmt::format("document id contains a line break: \"{}\"", doc.id));
    }
    const auto ordinal = static_cast<std::uint32_t>(m_doc_ids.size());
    if (m_mode == FieldMode::flat) {
        std::string contents;
        contents.reserve(doc.title.size() + 1 + doc.text.size());
        contents.append(doc.title).append(" ").append(doc.text);
        index_field(kContentsField, ordinal, contents);
    } else {
        index_field(kContentsField, ordinal, doc.text);
        index_field(kTitleField, ordinal, doc.title);
    }
    m_doc_ids.push_back(doc.id);
}

const FieldIndex* InvertedIndex::field(std::string_view name) const {
    auto it = m_fields.find(name);
    return it == m_fields.end() ? nullptr : &it->second;
}

FieldWeights InvertedIndex::default_field_weights() const {
    FieldWeights w;
    for (const auto& [name, _] : m_fields) {
        w[name] = 1.0;
    }
    return w;
}

void InvertedIndex::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    json manifest = detail::manifest_header(IndexKind::bm25);
    manifest["field_mode"] = std::string(to_string(m_mode));
    json fields = json::array();
    for (const auto& [name, _] : m_fields) {
        fields.push_back(name);
    }
    manifest["fields"] = fields;
    manifest["doc_count"] = doc_count();
    manifest["analyzer"] = detail::analyzer_to_json(m_analyzer);
    manifest["bm25_defaults"] = {{"k1", Bm25Params{}.k1}, {"b", Bm25Params{}.b}};
    detail::write_analyzer_files(m_analyzer, dir);
    detail::write_doc_ids(dir / "docids.txt", m_doc_ids);
    for (const auto& [name, fi] : m_fields) {
        write_field(dir / fmt::format("field-{}.bin", name), fi);
    }
    detail::write_manifest(dir, manifest);
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& dir) {
    auto manifest = detail::read_manifest(dir, IndexKind::bm25);
    auto config = detail::analyzer_from_json(manifest.at("analyzer"), dir);
    auto mode = manifest.at("field_mode").get<std::string>() == "flat" ? FieldMode::flat
                                                                       : FieldMode::multifield;
    InvertedIndex index(std::move(config), mode);
    const auto expected = manifest.at("analyzer").at("fingerprint").get<std::string>();
    if (index.fingerprint() != expected) {
        throw DataError(fmt::format("{}: analyzer fingerprint mismatch (manifest {}, rebuilt {})",
                                    dir.string(), expected, index.fingerprint()));
    }
    index.m_doc_ids = detail::read_doc_ids(dir / "docids.txt");
    const auto n = manifest.at("doc_count").get<std::uint32_t>();
    if (index.m_doc_ids.size() != n) {
        throw DataError(fmt::format("{}: docids.txt has {} entries, manifest says {}", dir.string(),
                                    index.m_doc_ids.size(), n));
    }
    index.m_fields.clear();
    for (const auto& name : manifest.at("fields")) {
        auto field_name = name.get<std::string>();
        index.m_fields.emplace(field_name,
                               read_field(dir / fmt::format("field-{}.bin", field_name), n));
    }
    return index;
}

InvertedIndex build_lexical_index(std::span<const Document> corpus, const AnalyzerConfig& analyzer,
                                  FieldMode mode) {
    InvertedIndex index(analyzer, mode);
    for (const auto& doc : corpus) {
        index.add(doc);
    }
    return index;
}

InvertedIndex build_lexical_index(const std::filesystem::path& corpus_path,
                                  const AnalyzerConfig& analyzer, FieldMode mode) {
    InvertedIndex index(analyzer, mode);
    for_each_document(corpus_path, [&](Document&& doc) { index.add(doc); });
    return index;
}

RankedList top_k(std::vector<std::pair<std::uint32_t, double>> candidates, std::size_t k,
                 const std::vector<std::string>& doc_ids) {
    auto cmp = [&](const auto& a, const auto& b) {
        return ranks_before(a.second, doc_ids[a.first], b.second, doc_ids[b.first]);
    };
    const auto n = std::min(k, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(n),
                      candidates.end(), cmp);
    RankedList out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(ScoredDoc{doc_ids[candidates[i].first], candidates[i].second,
                                static_cast<int>(i + 1)});
    }
    return out;
}

RankedList search_bm25(const InvertedIndex& index, std::string_view query, std::size_t k,
                       const FieldWeights& weights, const Bm25Params& params) {
    params.validate();
    if (k < 1) {
        throw PreconditionError("k must be >= 1");
    }
    for (const auto& [name, _] : weights) {
        if (index.field(name) == nullptr) {
            throw DataError(fmt::format("unknown field \"{}\"", name));
        }
    }
    std::map<std::string, std::uint32_t> query_tf;
    for (auto& t : index.analyzer().analyze(query)) {
        ++query_tf[std::move(t)];
    }
    const auto n = index.doc_count();
    if (query_tf.empty() || n == 0) {
        return {};
    }
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<char> seen(n, 0);
    for (const auto& [name, weight] : weights) {
        if (weight == 0.0) {
            continue;
        }
        const auto& fi = *index.field(name);
        const double avg = fi.average_length();
        for (const auto& [term, qtf] : query_tf) {
            const auto* list = fi.find(term);
            if (list == nullptr || list->empty()) {
                continue;
            }
            const auto df = list->size();
            for (const auto& p : *list) {
                const double s = bm25_unchecked(p.tf, fi.doc_lengths[p.doc], avg, df, n, params);
                acc[p.doc] += weight * static_cast<double>(qtf) * s;
                if (seen[p.doc] == 0) {
                    seen[p.doc] = 1;
                    touched.push_back(p.doc);
                }
            }
        }
    }
    std::vector<std::pair<std::uint32_t, double>> candidates;
    candidates.reserve(touched.size());
    for (auto d : touched) {
        if (acc[d] > 0.0) {
            candidates.emplace_back(d, acc[d]);
        }
    }
    return top_k(std::move(candidates), k, index.doc_ids());
}

}  // namespace irbench
