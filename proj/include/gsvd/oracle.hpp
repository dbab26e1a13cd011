#ifndef GSVD_ORACLE_HPP
#define GSVD_ORACLE_HPP

#include <cstdint>
#include <vector>

#include "gsvd/matrix.hpp"
#include "gsvd/pair.hpp"

namespace gsvd {

///
/// Reference GSVD of a pair {A, L} with rank r = rank((Aᵀ, Lᵀ)ᵀ):
///
///   A X̃₁ = P_A Σ_A,   L X̃₁ = P_L Σ_L,   X̃₁ᵀ M X̃₁ = I_r,   x_i ∈ R(M),
///
/// with c descending (q₁ ones, q₂ interior values, q₃ zeros) and
/// c_i² + s_i² = 1.
///
/// Column layout of the left factors follows the block structure of Σ_A and
/// Σ_L: component i uses column i of P_A (i < q₁+q₂) and column p−r+i of P_L
/// (i ≥ q₁); the remaining columns complete the orthogonal bases. A
/// component whose column falls outside the factor (c_i = 0 with i ≥ m, or
/// s_i = 0 with i < r − p) gets a zero left vector.
///
/// A value-only reference (loaded from a truth manifest) leaves the matrices
/// empty.
///
struct GsvdReference {
    Index r = 0;
    Index q1 = 0;
    Index q2 = 0;
    Index q3 = 0;
    std::vector<double> c;
    std::vector<double> s;
    DenseMatrix X1;         ///< n × r
    DenseMatrix P_A;        ///< m × m
    DenseMatrix P_L;        ///< p × p
    DenseMatrix null_basis; ///< n × (n − r)
    double rank_cutoff = 0.0; ///< relative eigenvalue cutoff used for r
    double zero_cutoff = 1e-10;

    bool has_vectors() const noexcept { return X1.cols() == r && r > 0; }

    double gamma(Index i) const;
    Vector x(Index i) const { return X1.col_vector(i); }
    Vector p_a(Index i) const;
    Vector p_l(Index i) const;

    /// m × r and p × r block-diagonal factors.
    DenseMatrix sigma_a() const;
    DenseMatrix sigma_l() const;

    /// The same decomposition seen from the L side (roles of A and L
    /// exchanged): all component orders and left bases are reversed.
    GsvdReference swapped() const;
};

///
/// Dense reference from the eigendecomposition of M: W = P_r Λ_r^{-1/2}
/// spans R(M) M-orthonormally; the eigenvectors z_i of Wᵀ(AᵀA)W give
/// x_i = W z_i. c_i = ‖Ax_i‖ and s_i = ‖Lx_i‖ are normalized to
/// c² + s² = 1 and snapped to 0/1 below `zero_cutoff`.
///
/// Works on pair.op() as "A" and pair.complement() as "L". Throws
/// DenseLimitError above dense_limit().
///
GsvdReference dense_gsvd(const MatrixPair& pair, double zero_cutoff = 1e-10, std::uint64_t seed = 2024);

struct GsvdIdentityDiagnostics {
    double ax = 0.0;       ///< max_i ‖Ax_i − c_i p_{A,i}‖
    double lx = 0.0;       ///< max_i ‖Lx_i − s_i p_{L,i}‖
    double adjoint = 0.0;  ///< max_i ‖s_i Aᵀp_{A,i} − c_i Lᵀp_{L,i}‖
    double gen_eig = 0.0;  ///< max_i ‖s_i² AᵀAx_i − c_i² LᵀLx_i‖

    double max() const;
};

GsvdIdentityDiagnostics verify_gsvd_identities(const GsvdReference& ref, const MatrixPair& pair);

/// First index of each group of equal (within 1e-10) nonzero c values, in
/// descending order of c.
std::vector<Index> distinct_value_starts(const GsvdReference& ref);

///
/// Predicted termination step: the number of distinct nonzero c values
/// (equal within 1e-10) whose left singular subspace carries a projection of
/// b larger than 1e-10·‖b‖.
///
Index predict_kt(const GsvdReference& ref, const MatrixPair& pair, std::span<const double> b);

} // namespace gsvd

#endif // GSVD_ORACLE_HPP
