#ifndef GSVD_DENSE_KERNELS_HPP
#define GSVD_DENSE_KERNELS_HPP

#include <cstdint>
#include <vector>

#include "gsvd/matrix.hpp"
#include "gsvd/pair.hpp"

namespace gsvd {

struct SymEigResult {
    std::vector<double> eigenvalues; ///< descending
    DenseMatrix eigenvectors;        ///< orthonormal columns, same order
    int sweeps = 0;
};

struct SmallSvdResult {
    std::vector<double> singular_values; ///< descending, nonnegative
    DenseMatrix left;                    ///< nrows × ncols
    DenseMatrix right;                   ///< ncols × ncols
};

///
/// Full eigendecomposition of a symmetric matrix by cyclic Jacobi rotations,
/// iterated until the off-diagonal Frobenius norm drops to 1e-14·‖S‖_F.
///
/// Throws std::invalid_argument when S is not square or not symmetric to
/// 1e-12 relative.
///
SymEigResult sym_eig(const DenseMatrix& s);

/// Same, with rotations started from the orthogonal basis `start`
/// (Jacobi on startᵀ S start, accumulated onto start). A good start
/// leaves little to rotate.
SymEigResult sym_eig(const DenseMatrix& s, const DenseMatrix& start);

///
/// Compact SVD of a tall matrix (nrows ≥ ncols) computed from sym_eig(BᵀB).
///
/// Right vectors and singular values come from the eigendecomposition.
/// Left vectors are Y = B H Θ⁻¹ for σ above nrows·ε·σ_max; the remaining
/// columns are completed orthonormally. Each right vector is signed so its
/// largest-magnitude entry is positive.
///
SmallSvdResult small_svd(const DenseMatrix& b);

/// Same, with the eigensolver started from `right_start` (j × j, j ≤ ncols)
/// padded by the identity; typically the right vectors of the leading
/// j columns of B.
SmallSvdResult small_svd(const DenseMatrix& b, const DenseMatrix& right_start);

/// Default power iteration count for spectral_norm_estimate.
inline constexpr int kDefaultNormIterations = 100;

/// √λ_max(M) ≈ ‖(Aᵀ, Lᵀ)ᵀ‖₂ by power iteration on M from a fixed seeded
/// start vector. Returns 0 for a zero pair.
double spectral_norm_estimate(const MatrixPair& pair, int iters = kDefaultNormIterations,
                              std::uint64_t seed = 2024);

/// Orthonormalize `candidate` against the columns of `basis` (two passes of
/// classical Gram–Schmidt). Returns false when the candidate is (numerically)
/// in their span.
bool orthonormalize_against(std::span<const Vector> basis, Vector& candidate);

} // namespace gsvd

#endif // GSVD_DENSE_KERNELS_HPP
