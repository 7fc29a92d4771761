#include "proseek/kernels.hpp"

#include <algorithm>
#include <omp.h>

#include <exception>

#include "proseek/adapters.hpp"
#include "proseek/error.hpp"
#include "proseek/textdyn.hpp"

namespace proseek::kernels {

std::size_t intersection_size(std::span<const Bigram> a, std::span<const Bigram> b) {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t n = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j]) {
            ++i;
        } else if (b[j] < a[i]) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

double dot(std::span<const float> a, std::span<const float> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return acc;
}

bool ranks_before(const Hit& a, const Hit& b, std::span<const std::string> ids) {
    if (a.score != b.score) return a.score > b.score;
    return ids[a.row] < ids[b.row];
}

namespace {

void check_input(const TopKInput& in) {
    if (in.query.size() != in.dim) {
        throw ContractViolation("query dimension " + std::to_string(in.query.size()) +
                                " does not match index dimension " + std::to_string(in.dim));
    }
    if (in.dim == 0 || in.matrix.size() != in.ids.size() * in.dim) {
        throw ContractViolation("matrix shape does not match id count");
    }
}

// Bounded heap whose front is the worst retained hit.
class TopKHeap {
    struct Cmp {
        std::span<const std::string> ids;
        bool operator()(const Hit& a, const Hit& b) const { return ranks_before(a, b, ids); }
    };

public:
    TopKHeap(std::size_t k, std::span<const std::string> ids) : k_(k), ids_(ids) { hits_.reserve(k + 1); }

    void push(Hit h) {
        if (k_ == 0) return;
        if (hits_.size() < k_) {
            hits_.push_back(h);
            std::push_heap(hits_.begin(), hits_.end(), cmp());
        } else if (ranks_before(h, hits_.front(), ids_)) {
            std::pop_heap(hits_.begin(), hits_.end(), cmp());
            hits_.back() = h;
            std::push_heap(hits_.begin(), hits_.end(), cmp());
        }
    }

    std::vector<Hit> sorted() && {
        std::sort(hits_.begin(), hits_.end(), cmp());
        return std::move(hits_);
    }

    const std::vector<Hit>& hits() const { return hits_; }

private:
    Cmp cmp() const { return Cmp{ids_}; }

    std::size_t k_;
    std::span<const std::string> ids_;
    std::vector<Hit> hits_;
};

}  // namespace

namespace serial {

std::vector<Hit> top_k_inner_product(const TopKInput& in, std::size_t k) {
    check_input(in);
    const std::size_t rows = in.ids.size();
    TopKHeap heap(std::min(k, rows), in.ids);
    for (std::size_t r = 0; r < rows; ++r) {
        heap.push({r, dot(in.matrix.subspan(r * in.dim, in.dim), in.query)});
    }
    return std::move(heap).sorted();
}

std::vector<double> jaccard_many(const BigramSet& query, std::span<const BigramSet* const> others) {
    std::vector<double> out(others.size());
    for (std::size_t i = 0; i < others.size(); ++i) out[i] = jaccard(query, *others[i]).value;
    return out;
}

std::vector<std::vector<float>> embed_all(const Embedder& embedder, std::span<const std::string> texts) {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embedder.embed(t));
    return out;
}

}  // namespace serial

namespace parallel {

std::vector<Hit> top_k_inner_product(const TopKInput& in, std::size_t k) {
    check_input(in);
    const std::size_t rows = in.ids.size();
    const std::size_t keep = std::min(k, rows);
    if (keep == 0) return {};

    std::vector<std::vector<Hit>> partial(static_cast<std::size_t>(omp_get_max_threads()));
#pragma omp parallel
    {
        TopKHeap heap(keep, in.ids);
#pragma omp for schedule(static)
        for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(rows); ++r) {
            const auto row = static_cast<std::size_t>(r);
            heap.push({row, dot(in.matrix.subspan(row * in.dim, in.dim), in.query)});
        }
        partial[static_cast<std::size_t>(omp_get_thread_num())] = heap.hits();
    }

    TopKHeap merged(keep, in.ids);
    for (const auto& part : partial) {
        for (const Hit& h : part) merged.push(h);
    }
    return std::move(merged).sorted();
}

std::vector<double> jaccard_many(const BigramSet& query, std::span<const BigramSet* const> others) {
    std::vector<double> out(others.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(others.size()); ++i) {
        out[static_cast<std::size_t>(i)] = jaccard(query, *others[static_cast<std::size_t>(i)]).value;
    }
    return out;
}

std::vector<std::vector<float>> embed_all(const Embedder& embedder, std::span<const std::string> texts) {
    std::vector<std::vector<float>> out(texts.size());
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(texts.size()); ++i) {
        try {
            out[static_cast<std::size_t>(i)] = embedder.embed(texts[static_cast<std::size_t>(i)]);
        } catch (...) {
#pragma omp critical(proseek_embed_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

}  // namespace parallel

}  // namespace proseek::kernels
