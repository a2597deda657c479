#include "irbench/dense_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <thread>

#include <fmt/format.h>

#include "binary_io.hpp"
#include "irbench/errors.hpp"
#include "manifest_io.hpp"

namespace irbench {

using nlohmann::json;

namespace {

constexpr std::string_view kDenseMagic = "IRDV";
constexpr std::uint32_t kDenseVersion = 1;
constexpr std::size_t kBlockRows = 256;
constexpr std::size_t kMinPartitionRows = 64;

struct Hit {
    double score;
    std::uint32_t row;
};

// Total order used for every dense ranking: score desc, then id asc.
struct Better {
    const std::vector<std::string>* ids;
    bool operator()(const Hit& a, const Hit& b) const {
        if (a.score != b.score) {
            return a.score > b.score;
        }
        return (*ids)[a.row] < (*ids)[b.row];
    }
};

double dot(std::span<const float> a, std::span<const float> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    }
    return acc;
}

// Top-k of rows [begin, end), unordered.
std::vector<Hit> scan_partition(const DenseVectorStore& store, std::span<const float> query,
                                std::size_t begin, std::size_t end, std::size_t k,
                                const Better& better) {
    // priority_queue with `better` keeps the worst retained hit on top.
    std::priority_queue<Hit, std::vector<Hit>, Better> heap(better);
    std::vector<double> block(kBlockRows);
    for (std::size_t base = begin; base < end; base += kBlockRows) {
        const auto rows = std::min(kBlockRows, end - base);
        for (std::size_t r = 0; r < rows; ++r) {
            block[r] = dot(store.row(base + r), query);
        }
        for (std::size_t r = 0; r < rows; ++r) {
            Hit h{block[r], static_cast<std::uint32_t>(base + r)};
            if (heap.size() < k) {
                heap.push(h);
            } else if (better(h, heap.top())) {
                heap.pop();
                heap.push(h);
            }
        }
    }
    std::vector<Hit> out;
    out.reserve(heap.size());
    while (!heap.empty()) {
        out.push_back(heap.top());
        heap.pop();
    }
    return out;
}

}  // namespace

void DenseVectorStore::add(const DenseVector& vec) {
    if (vec.id.empty()) {
        throw DataError("dense vector with empty id");
    }
    if (m_ids.empty() && m_dim == 0) {
        if (vec.values.empty()) {
            throw DataError(fmt::format("dense vector \"{}\" is empty", vec.id));
        }
        m_dim = vec.values.size();
    }
    if (vec.values.size() != m_dim) {
        throw DataError(fmt::format("dense vector \"{}\" has dimension {}, expected {}", vec.id,
                                    vec.values.size(), m_dim));
    }
    for (auto v : vec.values) {
        if (!std::isfinite(v)) {
            throw DataError(fmt::format("dense vector \"{}\" contains a non-finite value", vec.id));
        }
    }
    const auto ordinal = static_cast<std::uint32_t>(m_ids.size());
    if (!m_ordinals.emplace(vec.id, ordinal).second) {
        throw DataError(fmt::format("duplicate dense vector id \"{}\"", vec.id));
    }
    m_ids.push_back(vec.id);
    m_values.insert(m_values.end(), vec.values.begin(), vec.values.end());
}

void DenseVectorStore::write_binary(const std::filesystem::path& path) const {
    detail::BinaryWriter out(path);
    out.bytes(kDenseMagic);
    out.u32(kDenseVersion);
    out.u32(static_cast<std::uint32_t>(m_dim));
    out.u64(m_ids.size());
    for (auto v : m_values) {
        out.f32(v);
    }
    for (const auto& id : m_ids) {
        out.str(id);
    }
    out.close();
}

DenseVectorStore DenseVectorStore::read_binary(const std::filesystem::path& path) {
    detail::BinaryReader in(path);
    if (in.bytes(4) != kDenseMagic) {
        throw DataError(fmt::format("{}: not a dense vector file", path.string()));
    }
    if (in.u32() != kDenseVersion) {
        throw DataError(fmt::format("{}: unsupported dense vector file version", path.string()));
    }
    DenseVectorStore store;
    store.m_dim = in.u32();
    const auto count = in.u64();
    store.m_values.resize(count * store.m_dim);
    for (auto& v : store.m_values) {
        v = in.f32();
    }
    store.m_ids.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        auto id = in.str();
        if (!store.m_ordinals.emplace(id, static_cast<std::uint32_t>(i)).second) {
            throw DataError(fmt::format("{}: duplicate id \"{}\"", path.string(), id));
        }
        store.m_ids.push_back(std::move(id));
    }
    if (!in.at_end()) {
        throw DataError(fmt::format("{}: trailing bytes", path.string()));
    }
    return store;
}

void DenseVectorStore::save(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    write_binary(dir / "vectors.bin");
    auto manifest = detail::manifest_header(IndexKind::dense);
    manifest["dim"] = m_dim;
    manifest["doc_count"] = count();
    detail::write_manifest(dir, manifest);
}

DenseVectorStore DenseVectorStore::load(const std::filesystem::path& dir) {
    auto manifest = detail::read_manifest(dir, IndexKind::dense);
    auto store = read_binary(dir / "vectors.bin");
    if (store.dim() != manifest.at("dim").get<std::size_t>() ||
        store.count() != manifest.at("doc_count").get<std::size_t>()) {
        throw DataError(fmt::format("{}: vectors.bin does not match manifest", dir.string()));
    }
    return store;
}

void for_each_dense_vector(const std::filesystem::path& path,
                           const std::function<void(DenseVector&&)>& fn) {
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
        DenseVector vec;
        auto id = rec.find("id");
        if (id == rec.end()) {
            id = rec.find("_id");
        }
        if (id == rec.end()) {
            throw DataError(fmt::format("{}:{}: record has no \"id\"", path.string(), line_number));
        }
        vec.id = id->is_string() ? id->get<std::string>() : id->dump();
        auto it = rec.find("vector");
        if (it == rec.end() || !it->is_array()) {
            throw DataError(fmt::format(
                "{}:{}: \"vector\" must be an array of floats (is this a sparse vector file?)",
                path.string(), line_number));
        }
        vec.values.reserve(it->size());
        for (const auto& v : *it) {
            if (!v.is_number()) {
                throw DataError(fmt::format("{}:{}: dense vector \"{}\" has a non-numeric entry",
                                            path.string(), line_number, vec.id));
            }
            vec.values.push_back(static_cast<float>(v.get<double>()));
        }
        fn(std::move(vec));
    }
}

std::vector<DenseVector> load_dense_vectors(const std::filesystem::path& path) {
    std::vector<DenseVector> out;
    for_each_dense_vector(path, [&](DenseVector&& v) { out.push_back(std::move(v)); });
    return out;
}

DenseVectorStore build_dense_index(std::span<const DenseVector> vectors) {
    DenseVectorStore store;
    for (const auto& v : vectors) {
        store.add(v);
    }
    return store;
}

DenseVectorStore build_dense_index(const std::filesystem::path& path) {
    DenseVectorStore store;
    for_each_dense_vector(path, [&](DenseVector&& v) { store.add(v); });
    return store;
}

RankedList search_dense(const DenseVectorStore& store, std::span<const float> query, std::size_t k,
                        unsigned threads) {
    if (k < 1) {
        throw PreconditionError("k must be >= 1");
    }
    const auto n = store.count();
    if (n == 0) {
        return {};
    }
    if (query.size() != store.dim()) {
        throw DataError(fmt::format("query dimension {} does not match index dimension {}",
                                    query.size(), store.dim()));
    }
    const Better better{&store.ids()};
    const std::size_t parts = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n / kMinPartitionRows));
    std::vector<std::vector<Hit>> partials(parts);
    if (parts == 1) {
        partials[0] = scan_partition(store, query, 0, n, k, better);
    } else {
        std::vector<std::thread> workers;
        workers.reserve(parts);
        for (std::size_t p = 0; p < parts; ++p) {
            const auto begin = n * p / parts;
            const auto end = n * (p + 1) / parts;
            workers.emplace_back([&, p, begin, end] {
                partials[p] = scan_partition(store, query, begin, end, k, better);
            });
        }
        for (auto& w : workers) {
            w.join();
        }
    }
    std::vector<Hit> merged;
    for (auto& part : partials) {
        merged.insert(merged.end(), part.begin(), part.end());
    }
    const auto take = std::min(k, merged.size());
    std::partial_sort(merged.begin(), merged.begin() + static_cast<std::ptrdiff_t>(take),
                      merged.end(), better);
    RankedList out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back(ScoredDoc{store.ids()[merged[i].row], merged[i].score, static_cast<int>(i + 1)});
    }
    return out;
}

}  // namespace irbench
