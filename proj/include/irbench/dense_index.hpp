#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "irbench/dataset.hpp"

namespace irbench {

struct DenseVector {
    std::string id;
    std::vector<float> values;
};

/// Exhaustive inner-product store. Rows are float32, row-major and contiguous.
class DenseVectorStore {
  public:
    DenseVectorStore() = default;

    /// The first added vector fixes the dimension. Mismatched dimension,
    /// non-finite values or a duplicate id -> DataError naming the id.
    void add(const DenseVector& vec);

    [[nodiscard]] std::size_t dim() const { return m_dim; }
    [[nodiscard]] std::size_t count() const { return m_ids.size(); }
    [[nodiscard]] std::span<const float> row(std::size_t i) const {
        return {m_values.data() + i * m_dim, m_dim};
    }
    [[nodiscard]] const std::vector<std::string>& ids() const { return m_ids; }

    /// Packed binary layout (all little-endian):
    ///   "IRDV" magic, u32 version, u32 dim, u64 count,
    ///   count * dim float32 values (row-major),
    ///   count * (u32 byte length, UTF-8 id bytes).
    void write_binary(const std::filesystem::path& path) const;
    static DenseVectorStore read_binary(const std::filesystem::path& path);

    /// Index directory: manifest.json + vectors.bin.
    void save(const std::filesystem::path& dir) const;
    static DenseVectorStore load(const std::filesystem::path& dir);

  private:
    std::size_t m_dim = 0;
    std::vector<float> m_values;
    std::vector<std::string> m_ids;
    std::unordered_map<std::string, std::uint32_t> m_ordinals;
};

/// Line-delimited `{"id": ..., "vector": [f0, f1, ...]}` records.
void for_each_dense_vector(const std::filesystem::path& path,
                           const std::function<void(DenseVector&&)>& fn);
std::vector<DenseVector> load_dense_vectors(const std::filesystem::path& path);

DenseVectorStore build_dense_index(std::span<const DenseVector> vectors);
DenseVectorStore build_dense_index(const std::filesystem::path& path);

/// Exact top-k by inner product (double accumulation), ties by id ascending.
/// Returns min(k, count) results; negative scores are kept. With threads > 1
/// rows are split into contiguous partitions whose local top-k heaps are
/// merged; the result is identical to the sequential scan.
RankedList search_dense(const DenseVectorStore& store, std::span<const float> query, std::size_t k,
                        unsigned threads = 1);

}  // namespace irbench
