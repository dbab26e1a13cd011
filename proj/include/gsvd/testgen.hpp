#ifndef GSVD_TESTGEN_HPP
#define GSVD_TESTGEN_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gsvd/matrix.hpp"
#include "gsvd/oracle.hpp"
#include "gsvd/pair.hpp"

namespace gsvd {

inline constexpr std::uint64_t kDefaultSeed = 2024;

///
/// A = C_A Wᵀ D, L = S_L Wᵀ D with W a seeded random orthogonal matrix and
/// D = diag(linspace(lo, hi, n)). The truth is known analytically:
/// x_i = D⁻¹W e_i, p_{A,i} = p_{L,i} = e_i.
///
struct DesignedPair {
    MatrixPair pair;
    GsvdReference truth;
    DenseMatrix W;
    Vector d;
    std::string recipe;
    std::uint64_t seed = kDefaultSeed;
};

/// n uniformly spaced values from a to b (a alone when count = 1).
std::vector<double> linspace(double a, double b, Index count);

DesignedPair make_designed_pair(Index n, Index r, std::span<const double> c_spec, std::pair<double, double> d_range,
                                std::uint64_t seed = kDefaultSeed);

/// c = 1, 0.95, 0.90, linspace(0.88, 0.12, n−6), 0.1, 0.05, 0.01; D ∈ [1, 100].
DesignedPair make_example1(Index n, std::uint64_t seed = kDefaultSeed);

/// Rank r < n. c = 0.99, 0.98, linspace(0.96, 0.06, r−4), 0.04, 0.02; D ∈ [1, 10].
DesignedPair make_example3(Index n, Index r, std::uint64_t seed = kDefaultSeed);

/// c = 0.99, 0.97, linspace(0.95, 0.15, n−4), 0.1, 0.05; D ∈ [1, 10].
DesignedPair make_example4(Index n, std::uint64_t seed = kDefaultSeed);

/// (n−1) × n upper bidiagonal with `diag` on the diagonal and `offdiag` on
/// the superdiagonal.
SparseMatrix make_bidiag_L(Index n, double diag, double offdiag);

/// Seeded n × n orthogonal matrix (Gram–Schmidt of a Gaussian matrix).
DenseMatrix random_orthogonal(Index n, std::uint64_t seed);

} // namespace gsvd

#endif // GSVD_TESTGEN_HPP
