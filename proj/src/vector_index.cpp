#include "proseek/vector_index.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "proseek/error.hpp"
#include "proseek/kernels.hpp"

namespace proseek {

namespace {

template <typename T>
void write_le(std::ostream& out, T value) {
    static_assert(std::is_integral_v<T>);
    unsigned char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((value >> (8 * i)) & 0xFF);
    out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const char* what) {
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw FormatError(std::string("truncated index: ") + what);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
    return value;
}

std::vector<IndexHit> to_hits(const std::vector<kernels::Hit>& hits, const std::vector<std::string>& ids) {
    std::vector<IndexHit> out;
    out.reserve(hits.size());
    for (const auto& h : hits) out.push_back({ids[h.row], h.score});
    return out;
}

}  // namespace

VectorIndex::VectorIndex(std::size_t dimension) : dimension_(dimension) {
    if (dimension_ == 0) throw ContractViolation("index dimension must be positive");
}

void VectorIndex::add(std::string doc_id, std::span<const float> vec) {
    if (sealed_) throw ContractViolation("index is sealed");
    if (vec.size() != dimension_) {
        throw ContractViolation("vector for '" + doc_id + "' has dimension " + std::to_string(vec.size()) +
                                ", index expects " + std::to_string(dimension_));
    }
    const double norm = std::sqrt(kernels::dot(vec, vec));
    if (!(std::abs(norm - 1.0) <= kNormTolerance)) {
        throw ContractViolation("vector for '" + doc_id + "' is not unit norm (" + std::to_string(norm) + ")");
    }
    if (rows_.contains(doc_id)) throw ContractViolation("duplicate doc_id '" + doc_id + "'");
    rows_.emplace(doc_id, ids_.size());
    ids_.push_back(std::move(doc_id));
    matrix_.insert(matrix_.end(), vec.begin(), vec.end());
}

std::span<const float> VectorIndex::vector(std::size_t row) const {
    return std::span<const float>(matrix_).subspan(row * dimension_, dimension_);
}

std::span<const float> VectorIndex::vector(const std::string& doc_id) const {
    auto it = rows_.find(doc_id);
    if (it == rows_.end()) throw ContractViolation("unknown doc_id '" + doc_id + "'");
    return vector(it->second);
}

std::vector<IndexHit> VectorIndex::search(std::span<const float> query, std::size_t k) const {
    return to_hits(kernels::parallel::top_k_inner_product({matrix_, dimension_, ids_, query}, k), ids_);
}

std::vector<IndexHit> VectorIndex::search_serial(std::span<const float> query, std::size_t k) const {
    return to_hits(kernels::serial::top_k_inner_product({matrix_, dimension_, ids_, query}, k), ids_);
}

void VectorIndex::save(const std::filesystem::path& path) const {
    static_assert(std::numeric_limits<float>::is_iec559 && sizeof(float) == 4);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write index " + path.string());
    out.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(dimension_));
    write_le<std::uint64_t>(out, static_cast<std::uint64_t>(ids_.size()));
    for (std::size_t r = 0; r < ids_.size(); ++r) {
        write_le<std::uint32_t>(out, static_cast<std::uint32_t>(ids_[r].size()));
        out.write(ids_[r].data(), static_cast<std::streamsize>(ids_[r].size()));
        for (float f : vector(r)) write_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(f));
    }
    if (!out) throw Error("failed writing index " + path.string());
}

VectorIndex VectorIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open index " + path.string());
    char magic[5];
    if (!in.read(magic, 5) || std::string_view(magic, 5) != kMagic) throw FormatError("bad index magic");
    const auto dim = read_le<std::uint32_t>(in, "dimension");
    const auto count = read_le<std::uint64_t>(in, "count");
    if (dim == 0) throw FormatError("index dimension is zero");

    VectorIndex index(dim);
    std::vector<float> vec(dim);
    for (std::uint64_t r = 0; r < count; ++r) {
        const auto len = read_le<std::uint32_t>(in, "id length");
        std::string id(len, '\0');
        if (len && !in.read(id.data(), len)) throw FormatError("truncated index: id");
        for (auto& f : vec) f = std::bit_cast<float>(read_le<std::uint32_t>(in, "vector"));
        try {
            index.add(std::move(id), vec);
        } catch (const ContractViolation& e) {
            throw FormatError(std::string("invalid index record: ") + e.what());
        }
    }
    index.seal();
    return index;
}

}  // namespace proseek
