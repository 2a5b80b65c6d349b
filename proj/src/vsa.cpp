#include "hdspk/vsa.hpp"

#include <cmath>

namespace hdspk {

Hypervector random_bipolar(Xoshiro256ss& rng, int dim) {
    Hypervector v(dim);
    std::uint64_t word = 0;
    int bits_left = 0;
    for (int i = 0; i < dim; ++i) {
        if (bits_left == 0) {
            word = rng.next();
            bits_left = 64;
        }
        v[i] = (word & 1u) ? std::int8_t{1} : std::int8_t{-1};
        word >>= 1;
        --bits_left;
    }
    return v;
}

SeedMemory::SeedMemory(std::uint64_t rng_seed, int dim) : dim_(dim), rng_seed_(rng_seed) {
    if (dim < 2) throw std::invalid_argument("SeedMemory: dimension must be >= 2");
    Xoshiro256ss rng(rng_seed);
    seeds_.reserve(2 * kLbpBits);
    // Draw order is part of the format: i = 1..39, direction 0 then 1.
    for (int i = 1; i <= kLbpBits; ++i)
        for (int direction = 0; direction < 2; ++direction)
            seeds_.push_back(random_bipolar(rng, dim));
}

Permutation::Permutation(std::uint64_t rng_seed, int dim) : rng_seed_(rng_seed) {
    if (dim < 1) throw std::invalid_argument("Permutation: dimension must be >= 1");
    mapping_.resize(dim);
    for (int i = 0; i < dim; ++i) mapping_[i] = i;
    // Fisher-Yates over the identity, bounded draws by masked rejection.
    Xoshiro256ss rng(rng_seed);
    for (int i = dim - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(mapping_[i], mapping_[j]);
    }
    inverse_.resize(dim);
    for (int i = 0; i < dim; ++i) inverse_[mapping_[i]] = i;
}

namespace {

Hypervector gather(const Hypervector& v, const Eigen::VectorXi& idx) {
    Hypervector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v[idx[i]];
    return out;
}

}  // namespace

Hypervector Permutation::apply(const Hypervector& v, int repetitions) const {
    detail::require_same_dim(v.size(), mapping_.size(), "permute");
    if (repetitions < 0) throw std::invalid_argument("permute: repetition count must be >= 0");
    Hypervector out = v;
    for (int k = 0; k < repetitions; ++k) out = gather(out, mapping_);
    return out;
}

Hypervector Permutation::apply_inverse(const Hypervector& v, int repetitions) const {
    detail::require_same_dim(v.size(), mapping_.size(), "permute");
    if (repetitions < 0) throw std::invalid_argument("permute: repetition count must be >= 0");
    Hypervector out = v;
    for (int k = 0; k < repetitions; ++k) out = gather(out, inverse_);
    return out;
}

Eigen::VectorXi Permutation::composed(int repetitions) const {
    if (repetitions < 0) throw std::invalid_argument("permute: repetition count must be >= 0");
    const int dim = static_cast<int>(mapping_.size());
    Eigen::VectorXi idx(dim);
    for (int i = 0; i < dim; ++i) idx[i] = i;
    for (int k = 0; k < repetitions; ++k) {
        Eigen::VectorXi next(dim);
        // (f . g)[i] = g[f[i]] when both act as gathers applied left to right.
        for (int i = 0; i < dim; ++i) next[i] = idx[mapping_[i]];
        idx.swap(next);
    }
    return idx;
}

AccumVector bundle(std::span<const Hypervector> vs) {
    if (vs.empty()) throw std::invalid_argument("bundle: empty input");
    AccumVector acc;
    acc.coords = RealVec::Zero(vs.front().size());
    for (const auto& v : vs) {
        detail::require_same_dim(v.size(), acc.coords.size(), "bundle");
        acc.coords += v.cast<double>();
        ++acc.count;
    }
    return acc;
}

AccumVector bundle(std::span<const Hypervector> vs, std::span<const double> weights) {
    if (vs.empty()) throw std::invalid_argument("bundle: empty input");
    if (vs.size() != weights.size())
        throw std::invalid_argument("bundle: weight count does not match vector count");
    AccumVector acc;
    acc.coords = RealVec::Zero(vs.front().size());
    for (std::size_t i = 0; i < vs.size(); ++i) {
        detail::require_same_dim(vs[i].size(), acc.coords.size(), "bundle");
        if (!std::isfinite(weights[i]) || weights[i] < 0.0)
            throw std::invalid_argument("bundle: weights must be finite and non-negative");
        acc.coords += weights[i] * vs[i].cast<double>();
        ++acc.count;
    }
    return acc;
}

AccumVector bundle(std::span<const AccumVector> parts) {
    if (parts.empty()) throw std::invalid_argument("bundle: empty input");
    AccumVector acc;
    acc.coords = RealVec::Zero(parts.front().coords.size());
    for (const auto& part : parts) {
        detail::require_same_dim(part.coords.size(), acc.coords.size(), "bundle");
        acc.coords += part.coords;
        acc.count += part.count;
    }
    return acc;
}

}  // namespace hdspk
