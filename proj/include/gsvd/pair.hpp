#ifndef GSVD_PAIR_HPP
#define GSVD_PAIR_HPP

#include "gsvd/matrix.hpp"

namespace gsvd {

///
/// A matrix pair {A, L} with a common column dimension n, together with the
/// implicit operator M = AᵀA + LᵀL.
///
/// `role_swap` selects which matrix the iteration operates on: the A-side
/// (operated = A, complement = L) or the L-side (operated = L,
/// complement = A). M is the same for both sides.
///
class MatrixPair {
public:
    MatrixPair() = default;
    MatrixPair(SparseMatrix a, SparseMatrix l, bool role_swap = false)
        : a_(std::move(a)), l_(std::move(l)), role_swap_(role_swap)
    {
        if (a_.cols() != l_.cols()) {
            throw DimensionError("MatrixPair: A has " + std::to_string(a_.cols()) + " columns, L has " +
                                 std::to_string(l_.cols()));
        }
    }

    const SparseMatrix& a() const noexcept { return a_; }
    const SparseMatrix& l() const noexcept { return l_; }
    bool role_swap() const noexcept { return role_swap_; }

    /// The matrix the process operates on (A unless roles are swapped).
    const SparseMatrix& op() const noexcept { return role_swap_ ? l_ : a_; }
    const SparseMatrix& complement() const noexcept { return role_swap_ ? a_ : l_; }

    Index n() const noexcept { return a_.cols(); }
    /// Row count of the operated matrix.
    Index op_rows() const noexcept { return op().rows(); }

    MatrixPair swapped() const { return MatrixPair(a_, l_, !role_swap_); }
    MatrixPair with_side(bool swap) const { return MatrixPair(a_, l_, swap); }

private:
    SparseMatrix a_;
    SparseMatrix l_;
    bool role_swap_ = false;
};

} // namespace gsvd

#endif // GSVD_PAIR_HPP
