#include "gsvd/testgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "gsvd/dense_kernels.hpp"
#include "gsvd/pair_operators.hpp"

namespace gsvd {

namespace {

SparseMatrix scaled_rows(std::span<const double> row_scale, const DenseMatrix& w, std::span<const double> d)
{
    // (diag(row_scale) Wᵀ D)(i, j) = row_scale_i · W(j, i) · d_j
    const Index n = w.rows();
    std::vector<Triplet> t;
    for (Index i = 0; i < row_scale.size(); ++i) {
        if (row_scale[i] == 0.0) {
            continue;
        }
        for (Index j = 0; j < n; ++j) {
            const double v = row_scale[i] * w(j, i) * d[j];
            if (v != 0.0) {
                t.push_back({i, j, v});
            }
        }
    }
    return SparseMatrix::from_triplets(n, n, t);
}

} // namespace

std::vector<double> linspace(double a, double b, Index count)
{
    std::vector<double> out(count);
    if (count == 1) {
        out[0] = a;
        return out;
    }
    for (Index i = 0; i < count; ++i) {
        out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return out;
}

DenseMatrix random_orthogonal(Index n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    DenseMatrix w(n, n);
    std::vector<Vector> cols;
    cols.reserve(n);
    while (cols.size() < n) {
        Vector v(n);
        for (double& x : v) {
            x = normal(rng);
        }
        if (orthonormalize_against(cols, v)) {
            w.set_col(cols.size(), v);
            cols.push_back(std::move(v));
        }
    }
    return w;
}

DesignedPair make_designed_pair(Index n, Index r, std::span<const double> c_spec, std::pair<double, double> d_range,
                                std::uint64_t seed)
{
    if (n == 0 || r == 0 || r > n) {
        throw std::invalid_argument("make_designed_pair: need 1 <= r <= n");
    }
    if (c_spec.size() != r) {
        throw std::invalid_argument("make_designed_pair: c_spec must have r entries");
    }
    for (Index i = 0; i < r; ++i) {
        if (!(c_spec[i] >= 0.0 && c_spec[i] <= 1.0)) {
            throw std::invalid_argument("make_designed_pair: c values must lie in [0, 1]");
        }
        if (i > 0 && c_spec[i] > c_spec[i - 1]) {
            throw std::invalid_argument("make_designed_pair: c values must be nonincreasing");
        }
    }
    const auto [lo, hi] = d_range;
    if (!(lo > 0.0) || hi < lo) {
        throw std::invalid_argument("make_designed_pair: need 0 < lo <= hi");
    }

    DesignedPair dp;
    dp.recipe = "designed";
    dp.seed = seed;
    dp.W = random_orthogonal(n, seed);
    dp.d = linspace(lo, hi, n);

    std::vector<double> c(c_spec.begin(), c_spec.end());
    std::vector<double> s(r);
    for (Index i = 0; i < r; ++i) {
        s[i] = std::sqrt(std::max(0.0, 1.0 - c[i] * c[i]));
    }
    dp.pair = MatrixPair(scaled_rows(c, dp.W, dp.d), scaled_rows(s, dp.W, dp.d));

    auto& t = dp.truth;
    t.r = r;
    t.c = c;
    t.s = s;
    t.rank_cutoff = static_cast<double>(n) * std::numeric_limits<double>::epsilon();
    t.q1 = static_cast<Index>(std::count(s.begin(), s.end(), 0.0));
    t.q3 = static_cast<Index>(std::count(c.begin(), c.end(), 0.0));
    t.q2 = r - t.q1 - t.q3;

    t.X1 = DenseMatrix(n, r);
    for (Index i = 0; i < r; ++i) {
        Vector x(n);
        for (Index j = 0; j < n; ++j) {
            x[j] = dp.W(j, i) / dp.d[j];
        }
        scale(1.0 / m_norm(dp.pair, x), x);
        t.X1.set_col(i, x);
    }
    t.P_A = DenseMatrix::identity(n);
    // Component i sits in column n − r + i of P_L and equals e_i.
    t.P_L = DenseMatrix(n, n);
    for (Index i = 0; i < r; ++i) {
        t.P_L(i, n - r + i) = 1.0;
    }
    for (Index j = 0; j < n - r; ++j) {
        t.P_L(r + j, j) = 1.0;
    }
    std::vector<Vector> null_cols;
    for (Index i = r; i < n; ++i) {
        Vector z(n);
        for (Index j = 0; j < n; ++j) {
            z[j] = dp.W(j, i) / dp.d[j];
        }
        if (!orthonormalize_against(null_cols, z)) {
            throw std::runtime_error("make_designed_pair: degenerate null space basis");
        }
        null_cols.push_back(std::move(z));
    }
    t.null_basis = DenseMatrix::from_columns(null_cols, n);
    return dp;
}

DesignedPair make_example1(Index n, std::uint64_t seed)
{
    if (n < 10) {
        throw std::invalid_argument("make_example1: n must be >= 10");
    }
    std::vector<double> c{1.0, 0.95, 0.90};
    const auto mid = linspace(0.88, 0.12, n - 6);
    c.insert(c.end(), mid.begin(), mid.end());
    c.insert(c.end(), {0.1, 0.05, 0.01});
    auto dp = make_designed_pair(n, n, c, {1.0, 100.0}, seed);
    dp.recipe = "example1";
    return dp;
}

DesignedPair make_example3(Index n, Index r, std::uint64_t seed)
{
    if (r >= n) {
        throw std::invalid_argument("make_example3: need r < n");
    }
    if (r < 5) {
        throw std::invalid_argument("make_example3: need r >= 5");
    }
    std::vector<double> c{0.99, 0.98};
    const auto mid = linspace(0.96, 0.06, r - 4);
    c.insert(c.end(), mid.begin(), mid.end());
    c.insert(c.end(), {0.04, 0.02});
    auto dp = make_designed_pair(n, r, c, {1.0, 10.0}, seed);
    dp.recipe = "example3";
    return dp;
}

DesignedPair make_example4(Index n, std::uint64_t seed)
{
    if (n < 10) {
        throw std::invalid_argument("make_example4: n must be >= 10");
    }
    std::vector<double> c{0.99, 0.97};
    const auto mid = linspace(0.95, 0.15, n - 4);
    c.insert(c.end(), mid.begin(), mid.end());
    c.insert(c.end(), {0.1, 0.05});
    auto dp = make_designed_pair(n, n, c, {1.0, 10.0}, seed);
    dp.recipe = "example4";
    return dp;
}

SparseMatrix make_bidiag_L(Index n, double diag, double offdiag)
{
    if (n < 2) {
        throw std::invalid_argument("make_bidiag_L: n must be >= 2");
    }
    std::vector<Triplet> t;
    for (Index i = 0; i + 1 < n; ++i) {
        if (diag != 0.0) {
            t.push_back({i, i, diag});
        }
        if (offdiag != 0.0) {
            t.push_back({i, i + 1, offdiag});
        }
    }
    return SparseMatrix::from_triplets(n - 1, n, t);
}

} // namespace gsvd
