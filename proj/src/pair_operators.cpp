#include "gsvd/pair_operators.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

namespace gsvd {

namespace {
constexpr Index kDefaultDenseLimit = 2000;
}

Vector apply_M(const MatrixPair& pair, std::span<const double> v)
{
    if (v.size() != pair.n()) {
        throw DimensionError("apply_M: vector has length " + std::to_string(v.size()) + ", expected " +
                             std::to_string(pair.n()));
    }
    Vector y = spmv(pair.a(), spmv(pair.a(), v), true);
    axpy(1.0, spmv(pair.l(), spmv(pair.l(), v), true), y);
    return y;
}

double m_inner(const MatrixPair& pair, std::span<const double> u, std::span<const double> v)
{
    if (u.size() != pair.n() || v.size() != pair.n()) {
        throw DimensionError("m_inner: dimension mismatch");
    }
    return dot(spmv(pair.a(), u), spmv(pair.a(), v)) + dot(spmv(pair.l(), u), spmv(pair.l(), v));
}

double m_norm(const MatrixPair& pair, std::span<const double> v)
{
    const double au = norm2(spmv(pair.a(), v));
    const double lu = norm2(spmv(pair.l(), v));
    return std::hypot(au, lu);
}

DenseMatrix densify_M(const MatrixPair& pair)
{
    const auto a = pair.a().to_dense();
    const auto l = pair.l().to_dense();
    auto m = multiply_transposed(a, a);
    axpy(1.0, multiply_transposed(l, l).data(), m.data());
    return m;
}

Index dense_limit()
{
    if (const char* env = std::getenv("GSVD_DENSE_LIMIT")) {
        try {
            return static_cast<Index>(std::stoull(env));
        } catch (const std::exception&) {
            // fall through to default
        }
    }
    return kDefaultDenseLimit;
}

LsqrReport lsqr_solve(const MatrixPair& pair, std::span<const double> rhs, double tol, int max_iters)
{
    const Index n = pair.n();
    if (rhs.size() != n) {
        throw DimensionError("lsqr_solve: rhs length mismatch");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("lsqr_solve: tol must be positive");
    }
    LsqrReport report;
    report.solution.assign(n, 0.0);

    const double bnorm = norm2(rhs);
    if (bnorm == 0.0) {
        report.converged = true;
        return report;
    }
    const double atol = tol;
    const double btol = tol;

    Vector& x = report.solution;
    Vector u(rhs.begin(), rhs.end());
    double beta = bnorm;
    scale(1.0 / beta, u);
    Vector v = apply_M(pair, u);
    double alpha = norm2(v);
    if (alpha == 0.0) {
        // rhs ⟂ R(M): the minimum-norm solution is zero.
        report.converged = true;
        report.final_relative_residual = 1.0;
        return report;
    }
    scale(1.0 / alpha, v);
    Vector w = v;

    double phibar = beta;
    double rhobar = alpha;
    double anorm = 0.0;
    double rnorm = beta;

    for (int itn = 1; itn <= max_iters; ++itn) {
        // Continue the bidiagonalization.
        Vector mv = apply_M(pair, v);
        axpy(-alpha, u, mv);
        u = std::move(mv);
        beta = norm2(u);
        anorm = std::sqrt(anorm * anorm + alpha * alpha + beta * beta);
        if (beta > 0.0) {
            scale(1.0 / beta, u);
            Vector mu = apply_M(pair, u);
            axpy(-beta, v, mu);
            v = std::move(mu);
            alpha = norm2(v);
            if (alpha > 0.0) {
                scale(1.0 / alpha, v);
            }
        } else {
            alpha = 0.0;
        }

        // Plane rotation eliminating the subdiagonal.
        const double rho = std::hypot(rhobar, beta);
        const double c = rhobar / rho;
        const double s = beta / rho;
        const double theta = s * alpha;
        rhobar = -c * alpha;
        const double phi = c * phibar;
        phibar = s * phibar;

        axpy(phi / rho, w, x);
        Vector wn = v;
        axpy(-theta / rho, w, wn);
        w = std::move(wn);

        report.iterations = itn;
        rnorm = phibar;
        const double arnorm = alpha * std::abs(c) * phibar;
        const double xnorm = norm2(x);
        if (rnorm <= btol * bnorm + atol * anorm * xnorm || arnorm <= atol * anorm * rnorm ||
            beta == 0.0 || alpha == 0.0) {
            report.converged = true;
            break;
        }
    }

    Vector r = apply_M(pair, x);
    axpy(-1.0, rhs, r);
    report.final_relative_residual = norm2(r) / bnorm;
    return report;
}

PinvApplier PinvApplier::direct(const MatrixPair& pair, double rtol)
{
    const Index n = pair.n();
    const Index limit = dense_limit();
    if (n > limit) {
        throw DenseLimitError("direct pseudoinverse needs a dense " + std::to_string(n) + "x" +
                              std::to_string(n) + " M, above the limit " + std::to_string(limit) +
                              "; use the iterative (LSQR) mode");
    }
    PinvApplier p;
    p.mode_ = Mode::direct;
    p.rtol_ = rtol > 0.0 ? rtol : static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    auto eig = std::make_shared<SymEigResult>(sym_eig(densify_M(pair)));
    const double lmax = eig->eigenvalues.empty() ? 0.0 : eig->eigenvalues.front();
    Index r = 0;
    while (r < n && eig->eigenvalues[r] > p.rtol_ * lmax) {
        ++r;
    }
    p.rank_ = r;
    p.eig_ = std::move(eig);
    return p;
}

PinvApplier PinvApplier::iterative(double tol, int max_inner_iters)
{
    if (!(tol > 0.0)) {
        throw std::invalid_argument("PinvApplier: tol must be positive");
    }
    PinvApplier p;
    p.mode_ = Mode::iterative;
    p.tol_ = tol;
    p.max_inner_iters_ = max_inner_iters;
    return p;
}

Vector PinvApplier::apply(const MatrixPair& pair, std::span<const double> rhs) const
{
    if (rhs.size() != pair.n()) {
        throw DimensionError("pinv_apply: rhs length mismatch");
    }
    if (mode_ == Mode::direct) {
        const auto& q = eig_->eigenvectors;
        if (q.rows() != pair.n()) {
            throw DimensionError("pinv_apply: applier was built for a different pair");
        }
        Vector out(pair.n(), 0.0);
        for (Index j = 0; j < rank_; ++j) {
            const double coeff = dot(q.col(j), rhs) / eig_->eigenvalues[j];
            axpy(coeff, q.col(j), out);
        }
        return out;
    }
    const int max_iters = max_inner_iters_ > 0 ? max_inner_iters_ : static_cast<int>(20 * pair.n() + 100);
    auto report = lsqr_solve(pair, rhs, tol_, max_iters);
    ++stats_->solves;
    stats_->inner_iterations += report.iterations;
    if (!report.converged) {
        ++stats_->unconverged;
    }
    return std::move(report.solution);
}

} // namespace gsvd
