#pragma once

// Data-parallel hot loops. Each kernel has an OpenMP version used by the
// library and a serial reference used by parity tests and benchmarks; both
// produce identical results (same per-element arithmetic, same tie rules).

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "proseek/frames.hpp"

namespace proseek {
class Embedder;
}

namespace proseek::kernels {

// |a ∩ b| for sorted, duplicate-free bigram sets.
std::size_t intersection_size(std::span<const Bigram> a, std::span<const Bigram> b);

// Double-accumulated dot product in index order.
double dot(std::span<const float> a, std::span<const float> b);

struct Hit {
    std::size_t row;
    double score;
};

// Rows of a row-major matrix ranked by inner product with `query`, best
// first; equal scores are ordered by ids[row] ascending.
struct TopKInput {
    std::span<const float> matrix;  // rows * dim
    std::size_t dim;
    std::span<const std::string> ids;
    std::span<const float> query;
};

namespace serial {
std::vector<Hit> top_k_inner_product(const TopKInput& in, std::size_t k);
std::vector<double> jaccard_many(const BigramSet& query, std::span<const BigramSet* const> others);
std::vector<std::vector<float>> embed_all(const Embedder& embedder, std::span<const std::string> texts);
}  // namespace serial

namespace parallel {
std::vector<Hit> top_k_inner_product(const TopKInput& in, std::size_t k);
std::vector<double> jaccard_many(const BigramSet& query, std::span<const BigramSet* const> others);
// Exceptions thrown by the embedder are rethrown on the calling thread.
std::vector<std::vector<float>> embed_all(const Embedder& embedder, std::span<const std::string> texts);
}  // namespace parallel

// True when `a` ranks strictly before `b`.
bool ranks_before(const Hit& a, const Hit& b, std::span<const std::string> ids);

}  // namespace proseek::kernels
