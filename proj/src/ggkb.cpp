#include "gsvd/ggkb.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gsvd {

namespace {

Vector apply_g(const GgkbConfig& cfg, std::span<const double> u)
{
    if (cfg.g_weight) {
        return cfg.g_weight(u);
    }
    return Vector(u.begin(), u.end());
}

// Two-pass classical Gram–Schmidt of x against `basis` in the inner product
// ⟨y, x⟩ = weighted[j]ᵀx, where weighted[j] is the basis vector already
// multiplied by the weight matrix.
void reorthogonalize(const std::vector<Vector>& basis, const std::vector<Vector>& weighted, Vector& x)
{
    std::vector<double> coeff(basis.size());
    for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < basis.size(); ++j) {
            coeff[j] = dot(weighted[j], x);
        }
        for (Index j = 0; j < basis.size(); ++j) {
            axpy(-coeff[j], basis[j], x);
        }
    }
}

double max_identity_defect(const std::vector<Vector>& basis, const std::vector<Vector>& weighted)
{
    double defect = 0.0;
    for (Index i = 0; i < basis.size(); ++i) {
        if (norm_inf(basis[i]) == 0.0) {
            continue;
        }
        for (Index j = 0; j < basis.size(); ++j) {
            if (norm_inf(basis[j]) == 0.0) {
                continue;
            }
            const double target = i == j ? 1.0 : 0.0;
            defect = std::max(defect, std::abs(dot(basis[i], weighted[j]) - target));
        }
    }
    return defect;
}

} // namespace

void GgkbConfig::validate() const
{
    if (max_iters < 1) {
        throw std::invalid_argument("GgkbConfig: max_iters must be >= 1");
    }
    if (!(breakdown_tol > 0.0)) {
        throw std::invalid_argument("GgkbConfig: breakdown_tol must be positive");
    }
}

DenseMatrix assemble_Bk(const BidiagonalFactor& factor)
{
    const Index k = factor.k;
    if (k == 0) {
        throw std::invalid_argument("assemble_Bk: k must be >= 1");
    }
    if (factor.alphas.size() < k || factor.betas.size() < k + 1) {
        throw std::invalid_argument("assemble_Bk: not enough coefficients for k");
    }
    DenseMatrix b(k + 1, k);
    for (Index j = 0; j < k; ++j) {
        b(j, j) = factor.alphas[j];
        b(j + 1, j) = factor.betas[j + 1];
    }
    return b;
}

Vector random_start_vector(Index length, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Vector b(length);
    for (double& x : b) {
        x = normal(rng);
    }
    return b;
}

GgkbState ggkb_init(const MatrixPair& pair, std::span<const double> b, const GgkbConfig& cfg)
{
    cfg.validate();
    const auto& a = pair.op();
    if (b.size() != a.rows()) {
        throw DimensionError("ggkb_init: b has length " + std::to_string(b.size()) + ", expected " +
                             std::to_string(a.rows()));
    }
    if (norm_inf(b) == 0.0) {
        throw std::invalid_argument("ggkb_init: starting vector b is zero");
    }

    GgkbState st;
    const double nu = cfg.scale > 0.0 ? cfg.scale : spectral_norm_estimate(pair, kDefaultNormIterations, cfg.seed);
    st.breakdown_threshold = cfg.breakdown_tol * nu;

    Vector gb = apply_g(cfg, b);
    const double beta1 = std::sqrt(std::max(dot(b, gb), 0.0));
    st.b_norm = beta1;
    Vector u = scaled(1.0 / beta1, b);
    Vector gu = scaled(1.0 / beta1, gb);

    Vector s = cfg.pinv.apply(pair, spmv(a, gu, true));
    Vector ms = apply_M(pair, s);
    double alpha1 = std::sqrt(std::max(dot(s, ms), 0.0));

    st.factor.betas.push_back(beta1);
    st.bases.U.push_back(std::move(u));
    if (cfg.g_weight) {
        st.bases.GU.push_back(std::move(gu));
    }
    if (alpha1 <= st.breakdown_threshold) {
        st.factor.alphas.push_back(0.0);
        st.bases.V.emplace_back(pair.n(), 0.0);
        st.bases.MV.emplace_back(pair.n(), 0.0);
        st.terminated = true;
        st.terminate_step = 0;
        return st;
    }
    scale(1.0 / alpha1, s);
    scale(1.0 / alpha1, ms);
    st.factor.alphas.push_back(alpha1);
    st.bases.V.push_back(std::move(s));
    st.bases.MV.push_back(std::move(ms));
    return st;
}

void ggkb_step(GgkbState& st, const MatrixPair& pair, const GgkbConfig& cfg)
{
    if (st.terminated) {
        throw std::logic_error("ggkb_step: process already terminated");
    }
    if (st.factor.k >= static_cast<Index>(cfg.max_iters)) {
        throw std::logic_error("ggkb_step: max_iters reached");
    }
    const auto& a = pair.op();
    const Index n = pair.n();
    auto& f = st.factor;
    auto& B = st.bases;
    const Index k = f.k; // current v_{k+1} is B.V.back() in 1-based terms

    // q = A v_i − α_i u_i
    Vector q = spmv(a, B.V.back());
    axpy(-f.alphas.back(), B.U.back(), q);
    if (cfg.reorth == Reorth::full) {
        reorthogonalize(B.U, cfg.g_weight ? B.GU : B.U, q);
    }
    Vector gq = apply_g(cfg, q);
    const double beta = std::sqrt(std::max(dot(q, gq), 0.0));

    f.k = k + 1;
    if (beta <= st.breakdown_threshold) {
        f.betas.push_back(0.0);
        f.alphas.push_back(0.0);
        B.U.emplace_back(q.size(), 0.0);
        if (cfg.g_weight) {
            B.GU.emplace_back(q.size(), 0.0);
        }
        B.V.emplace_back(n, 0.0);
        B.MV.emplace_back(n, 0.0);
        st.terminated = true;
        st.terminate_step = f.k;
        return;
    }
    scale(1.0 / beta, q);
    scale(1.0 / beta, gq);

    // s = M†AᵀG u_{i+1} − β_{i+1} v_i
    Vector s = cfg.pinv.apply(pair, spmv(a, gq, true));
    axpy(-beta, B.V.back(), s);
    if (cfg.reorth == Reorth::full) {
        reorthogonalize(B.V, B.MV, s);
    }
    Vector ms = apply_M(pair, s);
    const double alpha = std::sqrt(std::max(dot(s, ms), 0.0));

    f.betas.push_back(beta);
    B.U.push_back(std::move(q));
    if (cfg.g_weight) {
        B.GU.push_back(std::move(gq));
    }
    if (alpha <= st.breakdown_threshold) {
        f.alphas.push_back(0.0);
        B.V.emplace_back(n, 0.0);
        B.MV.emplace_back(n, 0.0);
        st.terminated = true;
        st.terminate_step = f.k;
        return;
    }
    scale(1.0 / alpha, s);
    scale(1.0 / alpha, ms);
    f.alphas.push_back(alpha);
    B.V.push_back(std::move(s));
    B.MV.push_back(std::move(ms));
}

RecurrenceDiagnostics verify_recurrences(const GgkbState& st, const MatrixPair& pair, const GgkbConfig& cfg)
{
    RecurrenceDiagnostics d;
    const Index k = st.k();
    const auto& B = st.bases;
    if (k >= 1) {
        const auto& a = pair.op();
        const DenseMatrix bk = assemble_Bk(st.factor);

        // A V_k − U_{k+1} B_k, column by column.
        for (Index j = 0; j < k; ++j) {
            Vector r = spmv(a, B.V[j]);
            axpy(-bk(j, j), B.U[j], r);
            axpy(-bk(j + 1, j), B.U[j + 1], r);
            d.av_residual = std::max(d.av_residual, norm_inf(r));
        }

        // M†AᵀG U_{k+1} − V_k B_kᵀ − α_{k+1} v_{k+1} e_{k+1}ᵀ. Column j of
        // V_k B_kᵀ is α_j v_j + β_j v_{j−1} (1-based, with v_0 = 0, j ≤ k).
        for (Index j = 0; j <= k; ++j) {
            Vector r = cfg.pinv.apply(pair, spmv(a, B.gu(j), true));
            if (j < k) {
                axpy(-bk(j, j), B.V[j], r);
            } else {
                axpy(-st.factor.alphas[k], B.V[k], r);
            }
            if (j >= 1) {
                axpy(-bk(j, j - 1), B.V[j - 1], r);
            }
            d.adjoint_residual = std::max(d.adjoint_residual, norm_inf(r));
        }
    }
    d.u_orthogonality = max_identity_defect(B.U, cfg.g_weight ? B.GU : B.U);
    d.v_orthogonality = max_identity_defect(B.V, B.MV);
    return d;
}

} // namespace gsvd
