#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "irbench/dataset.hpp"

namespace irbench {

/// A precomputed learned-sparse representation (term -> weight).
struct SparseVector {
    std::string id;
    std::map<std::string, double> weights;
};

/// `none` keeps raw weights; `fixed` stores min(round(w * scale), cap).
struct ImpactQuantization {
    enum class Kind { none, fixed };

    Kind kind = Kind::fixed;
    double scale = 100.0;
    std::uint32_t cap = 255;

    static ImpactQuantization none() { return {Kind::none, 1.0, 0}; }
    static ImpactQuantization fixed(double scale = 100.0, std::uint32_t cap = 255) {
        return {Kind::fixed, scale, cap};
    }

    [[nodiscard]] bool quantized() const { return kind == Kind::fixed; }
    /// Applies the storage rule to a non-negative weight.
    [[nodiscard]] double apply(double weight) const;
};

struct ImpactPosting {
    std::uint32_t doc = 0;
    double weight = 0.0;  // integral when quantized
};

class ImpactIndex {
  public:
    explicit ImpactIndex(ImpactQuantization quantization = {});

    /// Adds one document vector. Negative or non-finite weight or duplicate
    /// id -> DataError. Weights that store as zero are dropped.
    void add(const SparseVector& vec);

    [[nodiscard]] const ImpactQuantization& quantization() const { return m_quant; }
    [[nodiscard]] std::uint32_t doc_count() const {
        return static_cast<std::uint32_t>(m_doc_ids.size());
    }
    [[nodiscard]] const std::vector<std::string>& doc_ids() const { return m_doc_ids; }
    [[nodiscard]] const std::vector<ImpactPosting>* find(const std::string& term) const;
    [[nodiscard]] std::size_t term_count() const { return m_postings.size(); }

    void save(const std::filesystem::path& dir) const;
    static ImpactIndex load(const std::filesystem::path& dir);

  private:
    ImpactQuantization m_quant;
    std::unordered_map<std::string, std::vector<ImpactPosting>> m_postings;
    std::vector<std::string> m_doc_ids;
    std::unordered_map<std::string, std::uint32_t> m_ordinals;
};

/// Line-delimited `{"id": ..., "vector": {term: weight}}` records.
void for_each_sparse_vector(const std::filesystem::path& path,
                            const std::function<void(SparseVector&&)>& fn);
std::vector<SparseVector> load_sparse_vectors(const std::filesystem::path& path);

ImpactIndex build_impact_index(std::span<const SparseVector> vectors,
                               const ImpactQuantization& quantization);
ImpactIndex build_impact_index(const std::filesystem::path& path,
                               const ImpactQuantization& quantization);

/// Sparse dot product over shared terms. Quantized indexes quantize the query
/// with the same rule, so scores are integer dot products.
RankedList search_impact(const ImpactIndex& index, const std::map<std::string, double>& query,
                         std::size_t k);

}  // namespace irbench
