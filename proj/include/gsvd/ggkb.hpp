#ifndef GSVD_GGKB_HPP
#define GSVD_GGKB_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gsvd/matrix.hpp"
#include "gsvd/pair.hpp"
#include "gsvd/pair_operators.hpp"

namespace gsvd {

enum class Reorth { none, full };

/// Symmetric positive definite weight G applied as an operator.
using WeightOperator = std::function<Vector(std::span<const double>)>;

struct GgkbConfig {
    int max_iters = 1000;
    Reorth reorth = Reorth::full;
    /// α or β at or below breakdown_tol·ν counts as zero.
    double breakdown_tol = 1e-12;
    /// ν = ‖(Aᵀ, Lᵀ)ᵀ‖₂ for the breakdown threshold; ≤ 0 means estimate it
    /// with spectral_norm_estimate.
    double scale = 0.0;
    PinvApplier pinv = PinvApplier::iterative();
    /// Empty means G = I.
    WeightOperator g_weight;
    std::uint64_t seed = 2024;

    void validate() const;
};

///
/// Coefficients of the lower bidiagonal B_k: alphas = α₁..α_{k+1},
/// betas = β₁..β_{k+1}.
///
struct BidiagonalFactor {
    std::vector<double> alphas;
    std::vector<double> betas;
    Index k = 0;
};

/// (k+1) × k lower bidiagonal with diagonal α₁..α_k and subdiagonal
/// β₂..β_{k+1}. Throws for k = 0.
DenseMatrix assemble_Bk(const BidiagonalFactor& factor);

///
/// U is G-orthonormal in R^m, V is M-orthonormal in R(M). MV caches M·v_i
/// and GU caches G·u_i (left empty when G = I). A vector following a
/// breakdown is stored as zero.
///
struct KrylovBases {
    std::vector<Vector> U;
    std::vector<Vector> V;
    std::vector<Vector> MV;
    std::vector<Vector> GU;

    const Vector& gu(Index i) const { return GU.empty() ? U[i] : GU[i]; }
};

struct GgkbState {
    BidiagonalFactor factor;
    KrylovBases bases;
    bool terminated = false;
    /// k_t = min{k : α_{k+1}β_{k+1} = 0} once detected.
    std::optional<Index> terminate_step;
    double b_norm = 0.0;
    double breakdown_threshold = 0.0;

    Index k() const noexcept { return factor.k; }
};

/// Standard-normal start vector from a seeded generator.
Vector random_start_vector(Index length, std::uint64_t seed);

///
/// Lines 1–3 of the process: β₁ = ‖b‖_G, u₁ = b/β₁, s = M†AᵀGu₁,
/// α₁ = ‖s‖_M, v₁ = s/α₁. When α₁ vanishes the state is terminated with
/// terminate_step = 0. Throws for b = 0 or a length mismatch.
///
GgkbState ggkb_init(const MatrixPair& pair, std::span<const double> b, const GgkbConfig& cfg);

///
/// One loop iteration: β_{k+1}u_{k+1} = Av_k − α_k u_k, then
/// α_{k+1}v_{k+1} = M†AᵀGu_{k+1} − β_{k+1}v_k, with optional two-pass
/// classical Gram–Schmidt reorthogonalization (G-inner product for u, M-inner
/// product for v via the cached M·v_j).
///
void ggkb_step(GgkbState& state, const MatrixPair& pair, const GgkbConfig& cfg);

struct RecurrenceDiagnostics {
    double av_residual = 0.0;      ///< ‖AV_k − U_{k+1}B_k‖_max
    double adjoint_residual = 0.0; ///< ‖M†AᵀGU_{k+1} − V_kB_kᵀ − α_{k+1}v_{k+1}e_{k+1}ᵀ‖_max
    double u_orthogonality = 0.0;  ///< ‖UᵀGU − I‖_max over nonzero u
    double v_orthogonality = 0.0;  ///< ‖VᵀMV − I‖_max over nonzero v
};

RecurrenceDiagnostics verify_recurrences(const GgkbState& state, const MatrixPair& pair,
                                         const GgkbConfig& cfg);

} // namespace gsvd

#endif // GSVD_GGKB_HPP
