#ifndef GSVD_PAIR_OPERATORS_HPP
#define GSVD_PAIR_OPERATORS_HPP

#include <atomic>
#include <memory>
#include <stdexcept>

#include "gsvd/dense_kernels.hpp"
#include "gsvd/matrix.hpp"
#include "gsvd/pair.hpp"

namespace gsvd {

/// Aᵀ(Av) + Lᵀ(Lv). M is never assembled.
Vector apply_M(const MatrixPair& pair, std::span<const double> v);

/// ⟨u, v⟩_M = (Au)·(Av) + (Lu)·(Lv).
double m_inner(const MatrixPair& pair, std::span<const double> u, std::span<const double> v);

/// M-norm, clamped at zero against rounding.
double m_norm(const MatrixPair& pair, std::span<const double> v);

/// Densified M = AᵀA + LᵀL (n × n).
DenseMatrix densify_M(const MatrixPair& pair);

/// Size limit for densifying M; GSVD_DENSE_LIMIT overrides the default 2000.
Index dense_limit();

struct LsqrReport {
    Vector solution;
    int iterations = 0;
    double final_relative_residual = 0.0; ///< ‖M s − rhs‖ / ‖rhs‖
    bool converged = false;
};

///
/// LSQR on min ‖M s − rhs‖₂ started from zero, so every iterate stays in
/// R(M) and the limit is the minimum-norm solution M†rhs for consistent
/// right-hand sides.
///
/// Stops on either of the standard tests with atol = btol = tol:
///   ‖r‖ ≤ tol·‖rhs‖ + tol·‖M‖·‖s‖   or   ‖M r‖ ≤ tol·‖M‖·‖r‖,
/// where ‖M‖ is the running Frobenius estimate of the bidiagonalization.
///
LsqrReport lsqr_solve(const MatrixPair& pair, std::span<const double> rhs, double tol, int max_iters);

/// Thrown when direct mode is requested above the dense size limit.
class DenseLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

///
/// Application of M†, either from a precomputed eigendecomposition of the
/// densified M (direct) or by LSQR (iterative).
///
class PinvApplier {
public:
    enum class Mode { direct, iterative };

    /// Eigendecompose the densified M of `pair`. rtol ≤ 0 selects n·ε.
    static PinvApplier direct(const MatrixPair& pair, double rtol = 0.0);
    /// max_inner_iters ≤ 0 selects 20n + 100.
    static PinvApplier iterative(double tol = 1e-10, int max_inner_iters = 0);

    Mode mode() const noexcept { return mode_; }
    double rtol() const noexcept { return rtol_; }
    double tol() const noexcept { return tol_; }
    int max_inner_iters() const noexcept { return max_inner_iters_; }

    /// Direct mode: numerical rank of M under the rtol cutoff.
    Index rank() const noexcept { return rank_; }
    /// Direct mode: the eigendecomposition used.
    const SymEigResult* eigen() const noexcept { return eig_.get(); }

    /// Cumulative LSQR statistics (iterative mode).
    struct Stats {
        std::atomic<long long> solves{0};
        std::atomic<long long> inner_iterations{0};
        std::atomic<long long> unconverged{0};
    };
    const Stats& stats() const noexcept { return *stats_; }

    Vector apply(const MatrixPair& pair, std::span<const double> rhs) const;

private:
    PinvApplier() = default;

    Mode mode_ = Mode::iterative;
    double rtol_ = 0.0;
    double tol_ = 1e-10;
    int max_inner_iters_ = 0;
    Index rank_ = 0;
    std::shared_ptr<const SymEigResult> eig_;
    std::shared_ptr<Stats> stats_ = std::make_shared<Stats>();
};

inline Vector pinv_apply(const PinvApplier& applier, const MatrixPair& pair, std::span<const double> rhs)
{
    return applier.apply(pair, rhs);
}

} // namespace gsvd

#endif // GSVD_PAIR_OPERATORS_HPP
