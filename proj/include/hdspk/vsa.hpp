#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hdspk/rng.hpp"

namespace hdspk {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

// Bipolar hypervector: every coordinate is exactly +1 or -1.
using Hypervector = Vec<std::int8_t>;
using RealVec = Vec<double>;

// Real-valued superposition of hypervectors. `count` tracks how many items
// were bundled in.
struct AccumVector {
    RealVec coords;
    std::int64_t count = 0;
};

// Number of adjacent-bin differences in a 40-bin spectrum slice.
inline constexpr int kLbpBits = 39;

// Table of 78 random bipolar seed vectors, one per (difference index,
// direction) pair: difference index i in 1..39, direction 0 (power fell or
// held) or 1 (power rose). The table is a pure function of (rng_seed, dim).
class SeedMemory {
public:
    SeedMemory(std::uint64_t rng_seed, int dim);

    // i in [1, 39], direction in {0, 1}.
    const Hypervector& seed(int diff_index, int direction) const {
        if (diff_index < 1 || diff_index > kLbpBits)
            throw std::out_of_range("SeedMemory: difference index must be in [1, 39]");
        if (direction != 0 && direction != 1)
            throw std::out_of_range("SeedMemory: direction must be 0 or 1");
        return seeds_[static_cast<std::size_t>(2 * (diff_index - 1) + direction)];
    }

    int dim() const { return dim_; }
    std::uint64_t rng_seed() const { return rng_seed_; }
    std::size_t size() const { return seeds_.size(); }

private:
    int dim_;
    std::uint64_t rng_seed_;
    std::vector<Hypervector> seeds_;  // laid out as [2*(i-1) + direction]
};

// Random bijection on {0..dim-1}, a pure function of (rng_seed, dim).
// apply(v, 1)[i] = v[mapping[i]] (gather); apply(v, k) iterates the gather.
class Permutation {
public:
    Permutation(std::uint64_t rng_seed, int dim);

    Hypervector apply(const Hypervector& v, int repetitions = 1) const;
    Hypervector apply_inverse(const Hypervector& v, int repetitions = 1) const;

    // Gather indices for the k-fold composition: composed(k)[i] selects the
    // source coordinate of result[i] after k applications.
    Eigen::VectorXi composed(int repetitions) const;

    const Eigen::VectorXi& mapping() const { return mapping_; }
    int dim() const { return static_cast<int>(mapping_.size()); }
    std::uint64_t rng_seed() const { return rng_seed_; }

private:
    std::uint64_t rng_seed_;
    Eigen::VectorXi mapping_;
    Eigen::VectorXi inverse_;
};

namespace detail {
inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* op) {
    if (a != b)
        throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
}
}  // namespace detail

// Coordinate-wise product of two bipolar vectors. Self-inverse:
// bind(bind(a, b), b) == a exactly.
inline Hypervector bind(const Hypervector& a, const Hypervector& b) {
    detail::require_same_dim(a.size(), b.size(), "bind");
    return a.cwiseProduct(b);
}

// Coordinate-wise sign with ties mapped to +1. A sum of an odd number of
// bipolar vectors has no zero coordinate, so the tie rule is not exercised on
// the slice-encoding path; it exists to keep the function total and
// deterministic.
template <typename Derived>
Hypervector threshold(const Eigen::MatrixBase<Derived>& accum) {
    Hypervector out(accum.size());
    for (Eigen::Index i = 0; i < accum.size(); ++i)
        out[i] = accum[i] >= 0 ? std::int8_t{1} : std::int8_t{-1};
    return out;
}

inline Hypervector threshold(const AccumVector& accum) { return threshold(accum.coords); }

// Weighted coordinate-wise sums. Accumulation follows input order; callers
// that reduce in parallel must merge partial sums in a canonical order.
AccumVector bundle(std::span<const Hypervector> vs);
AccumVector bundle(std::span<const Hypervector> vs, std::span<const double> weights);
AccumVector bundle(std::span<const AccumVector> parts);

inline Hypervector permute(const Hypervector& v, const Permutation& p, int repetitions = 1) {
    return p.apply(v, repetitions);
}

// Cosine similarity of two real (or bipolar) vectors; throws on zero norm.
template <typename DerivedA, typename DerivedB>
double cosine(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    detail::require_same_dim(a.size(), b.size(), "cosine");
    const Eigen::VectorXd ad = a.template cast<double>();
    const Eigen::VectorXd bd = b.template cast<double>();
    const double na = ad.norm();
    const double nb = bd.norm();
    if (na == 0.0 || nb == 0.0)
        throw std::domain_error("cosine: undefined for a zero vector");
    return ad.dot(bd) / (na * nb);
}

inline bool is_bipolar(const Hypervector& v) {
    return ((v.array() == 1) || (v.array() == -1)).all();
}

// One random bipolar vector drawn from the generator, one bit per coordinate.
Hypervector random_bipolar(Xoshiro256ss& rng, int dim);

}  // namespace hdspk
