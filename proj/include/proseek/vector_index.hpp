#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace proseek {

struct IndexHit {
    std::string doc_id;
    double score;
};

// Exact inner-product index over unit-norm vectors.
//
// On-disk layout (little endian):
//   "PMIX1" | u32 dimension | u64 count | count x (u32 id_len | id bytes | dimension x f32)
class VectorIndex {
public:
    static constexpr std::string_view kMagic = "PMIX1";
    static constexpr double kNormTolerance = 1e-6;

    explicit VectorIndex(std::size_t dimension);

    // Throws ContractViolation on wrong dimension, non-unit norm, duplicate id
    // or a sealed index.
    void add(std::string doc_id, std::span<const float> vec);
    bool contains(const std::string& doc_id) const { return rows_.contains(doc_id); }

    // After sealing the index is read-only and may be searched concurrently.
    void seal() { sealed_ = true; }
    bool sealed() const { return sealed_; }

    // min(k, size()) best documents, score descending, ties by doc_id ascending.
    std::vector<IndexHit> search(std::span<const float> query, std::size_t k) const;
    // Same ranking via the serial reference kernel.
    std::vector<IndexHit> search_serial(std::span<const float> query, std::size_t k) const;

    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return ids_.size(); }
    const std::vector<std::string>& ids() const { return ids_; }
    std::span<const float> vector(std::size_t row) const;
    std::span<const float> vector(const std::string& doc_id) const;

    void save(const std::filesystem::path& path) const;
    // Throws FormatError on a bad header or truncated body.
    static VectorIndex load(const std::filesystem::path& path);

private:
    std::size_t dimension_;
    std::vector<std::string> ids_;
    std::vector<float> matrix_;
    std::unordered_map<std::string, std::size_t> rows_;
    bool sealed_ = false;
};

}  // namespace proseek
