#ifndef GSVD_GSVD_SOLVER_HPP
#define GSVD_GSVD_SOLVER_HPP

#include <optional>
#include <string>
#include <vector>

#include "gsvd/ggkb.hpp"
#include "gsvd/matrix.hpp"
#include "gsvd/oracle.hpp"
#include "gsvd/pair.hpp"

namespace gsvd {

enum class Side { A, L };

const char* to_string(Side side) noexcept;
Side parse_side(const std::string& text);

///
/// Approximate GSVD component (c̄, s̄, p̄, x̄) from the Ritz pair
/// (θ_i, y_i, h_i) of B_k on the operated side.
///
/// `p` is U_{k+1}y_i (p_A on an A-side run, p_L on an L-side run).
/// `p_complement` is the other side's left vector, reconstructed as
/// complement·x̄/s̄ when s̄ > 1e-8.
///
struct GsvdTuple {
    double c = 0.0;
    double s = 0.0;
    double gamma = 0.0;
    Vector x;
    Vector p;
    std::optional<Vector> p_complement;
    /// α_{k+1}β_{k+1}|e_kᵀh_i|, an upper bound on ‖r‖/ν.
    double residual_bound = 0.0;
    bool converged = false;
    Side side = Side::A;
    std::string target_id;
    /// Position among the Ritz values of B_k (0 = largest).
    Index ritz_index = 0;
    /// e_kᵀh_i, kept for the residual identity.
    double h_last = 0.0;
    Index k = 0;
};

struct SolverConfig {
    int n_largest = 1;
    int n_smallest = 0;
    double tol = 1e-10;
    int max_iters = 500;
    Side side = Side::A;
    GgkbConfig ggkb;
    bool stop_when_converged = true;
    /// Compute the true combined residual of every target at every step.
    bool track_residuals = false;
    int norm_iters = kDefaultNormIterations;

    void validate() const;
};

struct TargetRecord {
    std::string target_id;
    Index ritz_index = 0;
    double theta = 0.0;
    double c = 0.0;
    double s = 0.0;
    double bound = 0.0;
    double err_value = 0.0; ///< NaN without reference
    double err_sin_x = 0.0; ///< NaN without reference vectors
    double err_sin_p = 0.0;
    double rel_residual = 0.0; ///< NaN unless track_residuals
};

struct IterationRecord {
    Index k = 0;
    std::vector<double> ritz; ///< all θ_i^{(k)}, descending
    std::vector<TargetRecord> targets;
};

struct ConvergenceHistory {
    std::vector<IterationRecord> iterations;
    bool ghost_detected = false;
    std::optional<Index> ghost_first_k;
};

struct SolverResult {
    std::vector<GsvdTuple> tuples;
    ConvergenceHistory history;
    GgkbState state;
    Side side = Side::A;
    double nu = 0.0;
    Vector b;
    bool all_converged = false;
    bool max_iters_hit = false;
    /// First k at which every target bound fell below tol.
    std::optional<Index> converged_at;
};

///
/// Ritz extraction from the current B_k for the given Ritz positions.
/// `pair` must be oriented to the operated side of the state. Throws when
/// an index is ≥ k.
///
std::vector<GsvdTuple> extract_ritz(const GgkbState& state, const MatrixPair& pair, std::span<const Index> which);

struct ResidualCheck {
    double first = 0.0;    ///< ‖Ax̄ − c̄p̄‖
    double second = 0.0;   ///< ‖s̄²AᵀAx̄ − c̄²LᵀLx̄ − α_{k+1}β_{k+1}Mv_{k+1}e_kᵀh‖
    double combined = 0.0; ///< (‖Ax̄ − c̄p̄‖² + ‖s̄²AᵀAx̄ − c̄²LᵀLx̄‖²)^{1/2}
};

ResidualCheck residual_identity_check(const GsvdTuple& tuple, const MatrixPair& pair, const GgkbState& state);

///
/// gGKB-based computation of the n_largest / n_smallest extreme components.
///
/// `reference` (optional) must describe the unswapped pair; it is used only
/// for history diagnostics and ghost detection. An empty `b` means a seeded
/// random start vector.
///
SolverResult run_solver(const MatrixPair& pair, std::optional<Vector> b, const SolverConfig& cfg,
                        const GsvdReference* reference = nullptr);

/// √(1 − cos²∠(x, y)) clamped to [0, 1]. Throws for a zero vector.
double sin_angle(std::span<const double> x, std::span<const double> y);

struct CbBoundReport {
    double angle = 0.0;
    double gap_ratio = 0.0;
    double kappa = 1.0;
    double chebyshev = 1.0;
    double bound = 0.0;
};

/// C_j(t) = cosh(j·acosh t) for t ≥ 1, by the closed form.
double chebyshev_value(Index j, double t);

///
/// Convergence bound for the i-th (0-based) largest component after k
/// iterations: (c₁² − c_r²)·(κ tan θ_i / C_{k−i−1}(1 + 2γ_i)). `ritz` holds
/// θ_j^{(k)} for at least the first i positions. The bracket is evaluated
/// without a square.
///
CbBoundReport chebyshev_bound(const GsvdReference& reference, std::span<const double> b, Index k, Index i,
                              std::span<const double> ritz);

} // namespace gsvd

#endif // GSVD_GSVD_SOLVER_HPP
