#include "irbench/impact_index.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "binary_io.hpp"
#include "irbench/errors.hpp"
#include "irbench/lexical_index.hpp"
#include "manifest_io.hpp"

namespace irbench {

using nlohmann::json;

namespace {

constexpr std::uint32_t kImpactMagic = 0x49504D31;

std::string record_id(const json& rec, std::size_t line) {
    for (const char* key : {"id", "_id", "docid"}) {
        if (auto it = rec.find(key); it != rec.end()) {
            return it->is_string() ? it->get<std::string>() : it->dump();
        }
    }
    throw DataError(fmt::format("line {}: record has no \"id\"", line));
}

}  // namespace

double ImpactQuantization::apply(double weight) const {
    if (kind == Kind::none) {
        return weight;
    }
    return std::min(std::round(weight * scale), static_cast<double>(cap));
}

ImpactIndex::ImpactIndex(ImpactQuantization quantization) : m_quant(quantization) {
    if (m_quant.quantized() && !(m_quant.scale > 0.0)) {
        throw PreconditionError("quantization scale must be > 0");
    }
}

void ImpactIndex::add(const SparseVector& vec) {
    if (vec.id.empty() || vec.id.find_first_of("\r\n") != std::string::npos) {
        throw DataError(fmt::format("invalid sparse vector id \"{}\"", vec.id));
    }
    const auto ordinal = static_cast<std::uint32_t>(m_doc_ids.size());
    if (!m_ordinals.emplace(vec.id, ordinal).second) {
        throw DataError(fmt::format("duplicate sparse vector id \"{}\"", vec.id));
    }
    for (const auto& [term, w] : vec.weights) {
        if (!std::isfinite(w) || w < 0.0) {
            m_ordinals.erase(vec.id);
            throw DataError(
                fmt::format("sparse vector \"{}\": invalid weight {} for term \"{}\"", vec.id, w, term));
        }
    }
    for (const auto& [term, w] : vec.weights) {
        const double stored = m_quant.apply(w);
        if (stored > 0.0) {
            m_postings[term].push_back(ImpactPosting{ordinal, stored});
        }
    }
    m_doc_ids.push_back(vec.id);
}

const std::vector<ImpactPosting>* ImpactIndex::find(const std::string& term) const {
    auto it = m_postings.find(term);
    return it == m_postings.end() ? nullptr : &it->second;
}

void ImpactIndex::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    json manifest = detail::manifest_header(IndexKind::impact);
    manifest["doc_count"] = doc_count();
    manifest["term_count"] = term_count();
    manifest["quantization"] =
        m_quant.quantized()
            ? json{{"kind", "fixed"}, {"scale", m_quant.scale}, {"cap", m_quant.cap}}
            : json{{"kind", "none"}};
    detail::write_doc_ids(dir / "docids.txt", m_doc_ids);

    detail::BinaryWriter out(dir / "impacts.bin");
    out.u32(kImpactMagic);
    out.u32(static_cast<std::uint32_t>(kIndexFormatVersion));
    std::vector<const std::string*> terms;
    for (const auto& [term, _] : m_postings) {
        terms.push_back(&term);
    }
    std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) { return *a < *b; });
    out.u64(terms.size());
    for (const auto* term : terms) {
        const auto& list = m_postings.at(*term);
        out.str(*term);
        out.u32(static_cast<std::uint32_t>(list.size()));
        for (const auto& p : list) {
            out.u32(p.doc);
            out.f64(p.weight);
        }
    }
    out.close();
    detail::write_manifest(dir, manifest);
}

ImpactIndex ImpactIndex::load(const std::filesystem::path& dir) {
    auto manifest = detail::read_manifest(dir, IndexKind::impact);
    const auto& q = manifest.at("quantization");
    ImpactIndex index(q.at("kind") == "fixed"
                          ? ImpactQuantization::fixed(q.at("scale").get<double>(),
                                                      q.at("cap").get<std::uint32_t>())
                          : ImpactQuantization::none());
    index.m_doc_ids = detail::read_doc_ids(dir / "docids.txt");
    const auto n = manifest.at("doc_count").get<std::uint32_t>();
    if (index.m_doc_ids.size() != n) {
        throw DataError(fmt::format("{}: docids.txt does not match manifest", dir.string()));
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        index.m_ordinals.emplace(index.m_doc_ids[i], i);
    }
    detail::BinaryReader in(dir / "impacts.bin");
    if (in.u32() != kImpactMagic || in.u32() != static_cast<std::uint32_t>(kIndexFormatVersion)) {
        throw DataError(fmt::format("{}: bad impacts.bin header", dir.string()));
    }
    auto num_terms = in.u64();
    for (std::uint64_t t = 0; t < num_terms; ++t) {
        auto term = in.str();
        auto count = in.u32();
        std::vector<ImpactPosting> list(count);
        for (auto& p : list) {
            p.doc = in.u32();
            p.weight = in.f64();
            if (p.doc >= n) {
                throw DataError(fmt::format("{}: posting ordinal out of range", dir.string()));
            }
        }
        index.m_postings.emplace(std::move(term), std::move(list));
    }
    return index;
}

void for_each_sparse_vector(const std::filesystem::path& path,
                            const std::function<void(SparseVector&&)>& fn) {
    std::ifstream in(path);
    if (!in) {
        throw DataError(fmt::format("cannot open {}", path.string()));
    }
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError(fmt::format("{}:{}: malformed record: {}", path.string(), line_number,
                                        e.what()));
        }
        SparseVector vec;
        vec.id = record_id(rec, line_number);
        auto it = rec.find("vector");
        if (it == rec.end() || !it->is_object()) {
            throw DataError(fmt::format(
                "{}:{}: \"vector\" must be an object of term weights (is this a dense vector file?)",
                path.string(), line_number));
        }
        for (const auto& [term, w] : it->items()) {
            if (!w.is_number()) {
                throw DataError(fmt::format("{}:{}: non-numeric weight for term \"{}\"",
                                            path.string(), line_number, term));
            }
            vec.weights[term] = w.get<double>();
        }
        fn(std::move(vec));
    }
}

std::vector<SparseVector> load_sparse_vectors(const std::filesystem::path& path) {
    std::vector<SparseVector> out;
    for_each_sparse_vector(path, [&](SparseVector&& v) { out.push_back(std::move(v)); });
    return out;
}

ImpactIndex build_impact_index(std::span<const SparseVector> vectors,
                               const ImpactQuantization& quantization) {
    ImpactIndex index(quantization);
    for (const auto& v : vectors) {
        index.add(v);
    }
    return index;
}

ImpactIndex build_impact_index(const std::filesystem::path& path,
                               const ImpactQuantization& quantization) {
    ImpactIndex index(quantization);
    for_each_sparse_vector(path, [&](SparseVector&& v) { index.add(v); });
    return index;
}

RankedList search_impact(const ImpactIndex& index, const std::map<std::string, double>& query,
                         std::size_t k) {
    if (k < 1) {
        throw PreconditionError("k must be >= 1");
    }
    const auto n = index.doc_count();
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> touched;
    std::vector<char> seen(n, 0);
    const auto& quant = index.quantization();
    for (const auto& [term, raw] : query) {
        if (!std::isfinite(raw) || (quant.quantized() && raw < 0.0)) {
            throw DataError(fmt::format("invalid query weight {} for term \"{}\"", raw, term));
        }
        const double qw = quant.apply(raw);
        if (qw == 0.0) {
            continue;
        }
        const auto* list = index.find(term);
        if (list == nullptr) {
            continue;
        }
        for (const auto& p : *list) {
            acc[p.doc] += qw * p.weight;
            if (seen[p.doc] == 0) {
                seen[p.doc] = 1;
                touched.push_back(p.doc);
            }
        }
    }
    std::vector<std::pair<std::uint32_t, double>> candidates;
    for (auto d : touched) {
        if (acc[d] > 0.0) {
            candidates.emplace_back(d, acc[d]);
        }
    }
    return top_k(std::move(candidates), k, index.doc_ids());
}

}  // namespace irbench
