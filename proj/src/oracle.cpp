#include "gsvd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gsvd/dense_kernels.hpp"
#include "gsvd/pair_operators.hpp"

namespace gsvd {

namespace {

// Fill the columns of `p` listed in `free_cols` with an orthonormal
// completion of the columns listed in `used_cols`.
void complete_basis(DenseMatrix& p, const std::vector<Index>& used_cols, const std::vector<Index>& free_cols,
                    std::uint64_t seed)
{
    const Index m = p.rows();
    std::vector<Vector> basis;
    basis.reserve(m);
    for (Index j : used_cols) {
        basis.push_back(p.col_vector(j));
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (Index j : free_cols) {
        for (int attempt = 0;; ++attempt) {
            if (attempt > 100) {
                throw std::runtime_error("dense_gsvd: orthonormal completion failed");
            }
            Vector cand(m);
            for (double& x : cand) {
                x = normal(rng);
            }
            if (orthonormalize_against(basis, cand)) {
                p.set_col(j, cand);
                basis.push_back(std::move(cand));
                break;
            }
        }
    }
}

DenseMatrix reversed_columns(const DenseMatrix& a)
{
    DenseMatrix b(a.rows(), a.cols());
    for (Index j = 0; j < a.cols(); ++j) {
        b.set_col(j, a.col(a.cols() - 1 - j));
    }
    return b;
}

} // namespace

double GsvdReference::gamma(Index i) const
{
    if (s[i] == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return c[i] / s[i];
}

Vector GsvdReference::p_a(Index i) const
{
    if (i >= P_A.cols()) {
        return Vector(P_A.rows(), 0.0);
    }
    return P_A.col_vector(i);
}

Vector GsvdReference::p_l(Index i) const
{
    if (P_L.cols() + i < r) {
        return Vector(P_L.rows(), 0.0);
    }
    return P_L.col_vector(P_L.cols() + i - r);
}

DenseMatrix GsvdReference::sigma_a() const
{
    DenseMatrix sa(P_A.rows(), r);
    for (Index i = 0; i < r && i < sa.rows(); ++i) {
        sa(i, i) = c[i];
    }
    return sa;
}

DenseMatrix GsvdReference::sigma_l() const
{
    const Index p = P_L.rows();
    DenseMatrix sl(p, r);
    for (Index i = 0; i < r; ++i) {
        if (p + i >= r) {
            sl(p + i - r, i) = s[i];
        }
    }
    return sl;
}

GsvdReference GsvdReference::swapped() const
{
    GsvdReference out;
    out.r = r;
    out.q1 = q3;
    out.q2 = q2;
    out.q3 = q1;
    out.c.assign(s.rbegin(), s.rend());
    out.s.assign(c.rbegin(), c.rend());
    out.rank_cutoff = rank_cutoff;
    out.zero_cutoff = zero_cutoff;
    out.null_basis = null_basis;
    if (has_vectors()) {
        out.X1 = reversed_columns(X1);
        out.P_A = reversed_columns(P_L);
        out.P_L = reversed_columns(P_A);
    }
    return out;
}

GsvdReference dense_gsvd(const MatrixPair& pair, double zero_cutoff, std::uint64_t seed)
{
    const Index n = pair.n();
    if (n > dense_limit()) {
        throw DenseLimitError("dense_gsvd: n = " + std::to_string(n) + " exceeds the dense limit " +
                              std::to_string(dense_limit()) + "; run at desk scale");
    }
    const auto& a = pair.op();
    const auto& l = pair.complement();
    const Index m = a.rows();
    const Index p = l.rows();

    GsvdReference ref;
    ref.zero_cutoff = zero_cutoff;
    ref.rank_cutoff = static_cast<double>(n) * std::numeric_limits<double>::epsilon();

    // (1) R(M) and N(M) from the eigendecomposition of M.
    const auto eig = sym_eig(densify_M(pair));
    const double lmax = n > 0 ? eig.eigenvalues.front() : 0.0;
    Index r = 0;
    while (r < n && eig.eigenvalues[r] > ref.rank_cutoff * lmax) {
        ++r;
    }
    ref.r = r;
    DenseMatrix w(n, r);
    for (Index j = 0; j < r; ++j) {
        auto col = eig.eigenvectors.col(j);
        const double f = 1.0 / std::sqrt(eig.eigenvalues[j]);
        for (Index i = 0; i < n; ++i) {
            w(i, j) = f * col[i];
        }
    }
    ref.null_basis = DenseMatrix(n, n - r);
    for (Index j = r; j < n; ++j) {
        ref.null_basis.set_col(j - r, eig.eigenvectors.col(j));
    }

    // (2) Symmetric eigenproblem Wᵀ(AᵀA)W = (AW)ᵀ(AW).
    const DenseMatrix aw = multiply(a, w);
    const auto inner = sym_eig(multiply_transposed(aw, aw));
    DenseMatrix x1 = multiply(w, inner.eigenvectors);

    std::vector<double> c(r), s(r);
    std::vector<Vector> ax(r), lx(r);
    for (Index i = 0; i < r; ++i) {
        ax[i] = spmv(a, x1.col(i));
        lx[i] = spmv(l, x1.col(i));
        const double ci = norm2(ax[i]);
        const double si = norm2(lx[i]);
        const double h = std::hypot(ci, si);
        c[i] = ci / h;
        s[i] = si / h;
        if (s[i] <= zero_cutoff) {
            c[i] = 1.0;
            s[i] = 0.0;
        } else if (c[i] <= zero_cutoff) {
            c[i] = 0.0;
            s[i] = 1.0;
        }
    }
    std::vector<Index> order(r);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return c[i] > c[j]; });

    ref.X1 = DenseMatrix(n, r);
    ref.c.resize(r);
    ref.s.resize(r);
    for (Index k = 0; k < r; ++k) {
        ref.X1.set_col(k, x1.col(order[k]));
        ref.c[k] = c[order[k]];
        ref.s[k] = s[order[k]];
    }
    ref.q1 = static_cast<Index>(std::count(ref.s.begin(), ref.s.end(), 0.0));
    ref.q3 = static_cast<Index>(std::count(ref.c.begin(), ref.c.end(), 0.0));
    ref.q2 = r - ref.q1 - ref.q3;
    if (m < ref.q1 + ref.q2 || p + ref.q1 < r) {
        throw std::runtime_error("dense_gsvd: inconsistent block sizes (cutoff too loose?)");
    }

    // (3) Left bases.
    ref.P_A = DenseMatrix(m, m);
    std::vector<Index> used, free;
    for (Index k = 0; k < ref.q1 + ref.q2; ++k) {
        Vector col = ax[order[k]];
        scale(1.0 / norm2(col), col);
        ref.P_A.set_col(k, col);
        used.push_back(k);
    }
    for (Index k = ref.q1 + ref.q2; k < m; ++k) {
        free.push_back(k);
    }
    complete_basis(ref.P_A, used, free, seed);

    ref.P_L = DenseMatrix(p, p);
    used.clear();
    free.clear();
    // Component k lives in column p − r + k (k ≥ q₁, and p + q₁ ≥ r).
    for (Index k = ref.q1; k < r; ++k) {
        Vector col = lx[order[k]];
        scale(1.0 / norm2(col), col);
        ref.P_L.set_col(p + k - r, col);
        used.push_back(p + k - r);
    }
    for (Index j = 0; j + r < p + ref.q1; ++j) {
        free.push_back(j);
    }
    complete_basis(ref.P_L, used, free, seed + 1);
    return ref;
}

double GsvdIdentityDiagnostics::max() const { return std::max({ax, lx, adjoint, gen_eig}); }

GsvdIdentityDiagnostics verify_gsvd_identities(const GsvdReference& ref, const MatrixPair& pair)
{
    const auto& a = pair.op();
    const auto& l = pair.complement();
    GsvdIdentityDiagnostics d;
    for (Index i = 0; i < ref.r; ++i) {
        const Vector x = ref.x(i);
        const Vector pa = ref.p_a(i);
        const Vector pl = ref.p_l(i);
        const Vector axv = spmv(a, x);
        const Vector lxv = spmv(l, x);

        Vector r1 = axv;
        axpy(-ref.c[i], pa, r1);
        d.ax = std::max(d.ax, norm2(r1));

        Vector r2 = lxv;
        axpy(-ref.s[i], pl, r2);
        d.lx = std::max(d.lx, norm2(r2));

        Vector r3 = scaled(ref.s[i], spmv(a, pa, true));
        axpy(-ref.c[i], spmv(l, pl, true), r3);
        d.adjoint = std::max(d.adjoint, norm2(r3));

        Vector r4 = scaled(ref.s[i] * ref.s[i], spmv(a, axv, true));
        axpy(-ref.c[i] * ref.c[i], spmv(l, lxv, true), r4);
        d.gen_eig = std::max(d.gen_eig, norm2(r4));
    }
    return d;
}

std::vector<Index> distinct_value_starts(const GsvdReference& ref)
{
    std::vector<Index> starts;
    for (Index i = 0; i < ref.q1 + ref.q2; ++i) {
        if (starts.empty() || std::abs(ref.c[starts.back()] - ref.c[i]) > 1e-10) {
            starts.push_back(i);
        }
    }
    return starts;
}

Index predict_kt(const GsvdReference& ref, const MatrixPair& pair, std::span<const double> b)
{
    if (b.size() != pair.op_rows()) {
        throw DimensionError("predict_kt: b length mismatch");
    }
    const Index nonzero = ref.q1 + ref.q2;
    const double threshold = 1e-10 * norm2(b);
    Index count = 0;
    Index i = 0;
    while (i < nonzero) {
        Index j = i;
        double proj2 = 0.0;
        while (j < nonzero && std::abs(ref.c[j] - ref.c[i]) <= 1e-10) {
            const double t = dot(ref.P_A.col(j), b);
            proj2 += t * t;
            ++j;
        }
        if (std::sqrt(proj2) > threshold) {
            ++count;
        }
        i = j;
    }
    return count;
}

} // namespace gsvd
