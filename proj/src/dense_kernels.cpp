#include "gsvd/dense_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gsvd/pair_operators.hpp"

namespace gsvd {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const DenseMatrix& a)
{
    double s = 0.0;
    for (Index q = 1; q < a.cols(); ++q) {
        for (Index p = 0; p < q; ++p) {
            s += a(p, q) * a(p, q);
        }
    }
    return std::sqrt(2.0 * s);
}

// Flip each column so its largest-magnitude entry is positive. Ties go to
// the lowest row index.
void normalize_signs(DenseMatrix& v)
{
    for (Index j = 0; j < v.cols(); ++j) {
        auto c = v.col(j);
        Index imax = 0;
        for (Index i = 1; i < c.size(); ++i) {
            if (std::abs(c[i]) > std::abs(c[imax])) {
                imax = i;
            }
        }
        if (!c.empty() && c[imax] < 0.0) {
            scale(-1.0, c);
        }
    }
}

void rotate(DenseMatrix& a, DenseMatrix& v, Index p, Index q)
{
    const Index n = a.rows();
    const double apq = a(p, q);
    const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
    double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    if (theta < 0.0) {
        t = -t;
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    a(p, p) -= t * apq;
    a(q, q) += t * apq;
    a(p, q) = 0.0;
    a(q, p) = 0.0;

    auto colp = a.col(p);
    auto colq = a.col(q);
    for (Index k = 0; k < n; ++k) {
        if (k == p || k == q) {
            continue;
        }
        const double akp = colp[k];
        const double akq = colq[k];
        colp[k] = c * akp - s * akq;
        colq[k] = s * akp + c * akq;
    }
    for (Index k = 0; k < n; ++k) {
        if (k != p && k != q) {
            a(p, k) = colp[k];
            a(q, k) = colq[k];
        }
    }

    auto vp = v.col(p);
    auto vq = v.col(q);
    for (Index k = 0; k < n; ++k) {
        const double x = vp[k];
        const double y = vq[k];
        vp[k] = c * x - s * y;
        vq[k] = s * x + c * y;
    }
}

void check_symmetric(const DenseMatrix& s)
{
    if (s.rows() != s.cols()) {
        throw std::invalid_argument("sym_eig: matrix is not square");
    }
    const Index n = s.rows();
    const double smax = s.max_abs();
    for (Index j = 0; j < n; ++j) {
        for (Index i = 0; i < j; ++i) {
            if (std::abs(s(i, j) - s(j, i)) > 1e-12 * smax) {
                throw std::invalid_argument("sym_eig: matrix is not symmetric");
            }
        }
    }
}

DenseMatrix symmetrized(DenseMatrix a)
{
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < j; ++i) {
            const double avg = 0.5 * (a(i, j) + a(j, i));
            a(i, j) = avg;
            a(j, i) = avg;
        }
    }
    return a;
}

// Cyclic Jacobi on the symmetric `a`, accumulating rotations into `v`, until
// the off-diagonal norm is at most `target`. Entries at or below target/n are
// skipped: all of them together cannot exceed the target.
SymEigResult jacobi(DenseMatrix a, DenseMatrix v, double target)
{
    const Index n = a.rows();
    const double skip = n > 0 ? target / static_cast<double>(n) : 0.0;

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= target) {
            break;
        }
        for (Index p = 0; p + 1 < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= skip) {
                    continue;
                }
                // Rutishauser: drop entries that no longer perturb the diagonal.
                const double g = 100.0 * std::abs(apq);
                if (sweep > 3 && std::abs(a(p, p)) + g == std::abs(a(p, p)) &&
                    std::abs(a(q, q)) + g == std::abs(a(q, q))) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                rotate(a, v, p, q);
            }
        }
    }

    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return a(i, i) > a(j, j); });

    SymEigResult out;
    out.sweeps = sweep;
    out.eigenvalues.resize(n);
    out.eigenvectors = DenseMatrix(n, n);
    for (Index k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]);
        out.eigenvectors.set_col(k, v.col(order[k]));
    }
    normalize_signs(out.eigenvectors);
    return out;
}

} // namespace

SymEigResult sym_eig(const DenseMatrix& s)
{
    check_symmetric(s);
    return jacobi(symmetrized(s), DenseMatrix::identity(s.rows()), 1e-14 * s.frobenius());
}

SymEigResult sym_eig(const DenseMatrix& s, const DenseMatrix& start)
{
    check_symmetric(s);
    if (start.rows() != s.rows() || start.cols() != s.cols()) {
        throw DimensionError("sym_eig: start basis shape mismatch");
    }
    return jacobi(symmetrized(multiply_transposed(start, multiply(s, start))), start, 1e-14 * s.frobenius());
}

namespace {

SmallSvdResult svd_from_eig(const DenseMatrix& b, const SymEigResult& eig)
{
    const Index m = b.rows();
    const Index n = b.cols();
    SmallSvdResult out;
    out.singular_values.resize(n);
    for (Index j = 0; j < n; ++j) {
        out.singular_values[j] = std::sqrt(std::max(eig.eigenvalues[j], 0.0));
    }
    out.right = eig.eigenvectors;

    const double smax = n > 0 ? out.singular_values[0] : 0.0;
    const double cutoff = static_cast<double>(m) * kEps * smax;

    std::vector<Vector> left;
    left.reserve(n);
    std::vector<Index> deficient;
    for (Index j = 0; j < n; ++j) {
        if (out.singular_values[j] > cutoff) {
            Vector y = matvec(b, out.right.col(j));
            scale(1.0 / out.singular_values[j], y);
            left.push_back(std::move(y));
        } else {
            left.emplace_back();
            deficient.push_back(j);
        }
    }
    // Complete the columns belonging to (numerically) zero singular values.
    Index next_unit = 0;
    for (Index j : deficient) {
        std::vector<Vector> basis;
        for (const auto& y : left) {
            if (!y.empty()) {
                basis.push_back(y);
            }
        }
        while (next_unit < m) {
            Vector e(m, 0.0);
            e[next_unit++] = 1.0;
            if (orthonormalize_against(basis, e)) {
                left[j] = std::move(e);
                break;
            }
        }
    }
    out.left = DenseMatrix::from_columns(left, m);
    return out;
}

} // namespace

SmallSvdResult small_svd(const DenseMatrix& b)
{
    if (b.rows() < b.cols()) {
        throw std::invalid_argument("small_svd: requires nrows >= ncols");
    }
    return svd_from_eig(b, sym_eig(multiply_transposed(b, b)));
}

SmallSvdResult small_svd(const DenseMatrix& b, const DenseMatrix& right_start)
{
    const Index n = b.cols();
    if (b.rows() < n) {
        throw std::invalid_argument("small_svd: requires nrows >= ncols");
    }
    const Index j0 = right_start.rows();
    if (j0 != right_start.cols() || j0 > n) {
        throw DimensionError("small_svd: right_start must be square with at most ncols rows");
    }
    DenseMatrix q = DenseMatrix::identity(n);
    for (Index j = 0; j < j0; ++j) {
        for (Index i = 0; i < j0; ++i) {
            q(i, j) = right_start(i, j);
        }
    }
    // Rounding drift in a reused basis would bias the eigenvalues; restore
    // orthonormality first.
    std::vector<Vector> cols;
    cols.reserve(n);
    for (Index j = 0; j < n; ++j) {
        Vector c = q.col_vector(j);
        if (!orthonormalize_against(cols, c)) {
            throw std::invalid_argument("small_svd: right_start is not orthogonal");
        }
        cols.push_back(std::move(c));
    }
    q = DenseMatrix::from_columns(cols, n);
    // Gram matrix of BQ; B is usually bidiagonal, so form BQ sparsely.
    const DenseMatrix bq = multiply(SparseMatrix::from_dense(b), q);
    const DenseMatrix gram = symmetrized(multiply_transposed(bq, bq));
    return svd_from_eig(b, jacobi(gram, q, 1e-14 * gram.frobenius()));
}

double spectral_norm_estimate(const MatrixPair& pair, int iters, std::uint64_t seed)
{
    if (iters < 1) {
        throw std::invalid_argument("spectral_norm_estimate: iters must be >= 1");
    }
    const Index n = pair.n();
    if (n == 0) {
        return 0.0;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Vector x(n);
    for (double& xi : x) {
        xi = normal(rng);
    }
    scale(1.0 / norm2(x), x);

    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
        Vector y = apply_M(pair, x);
        lambda = std::max(lambda, dot(x, y));
        const double ny = norm2(y);
        if (ny == 0.0) {
            break;
        }
        scale(1.0 / ny, y);
        x = std::move(y);
    }
    return std::sqrt(lambda);
}

bool orthonormalize_against(std::span<const Vector> basis, Vector& candidate)
{
    const double original = norm2(candidate);
    if (original == 0.0) {
        return false;
    }
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<double> coeff(basis.size());
        for (Index j = 0; j < basis.size(); ++j) {
            coeff[j] = dot(basis[j], candidate);
        }
        for (Index j = 0; j < basis.size(); ++j) {
            axpy(-coeff[j], basis[j], candidate);
        }
    }
    const double remaining = norm2(candidate);
    if (remaining <= 1e-10 * original) {
        return false;
    }
    scale(1.0 / remaining, candidate);
    return true;
}

} // namespace gsvd
