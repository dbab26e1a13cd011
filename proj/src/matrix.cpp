#include "gsvd/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gsvd {

namespace {

void require_same_size(std::span<const double> x, std::span<const double> y, const char* what)
{
    if (x.size() != y.size()) {
        throw DimensionError(std::string(what) + ": length mismatch (" + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()) + ")");
    }
}

} // namespace

double dot(std::span<const double> x, std::span<const double> y)
{
    require_same_size(x, y, "dot");
    double s = 0.0;
    for (Index i = 0; i < x.size(); ++i) {
        s += x[i] * y[i];
    }
    return s;
}

double norm2(std::span<const double> x)
{
    // Scaled accumulation so tiny and huge vectors do not under/overflow.
    double scale_ = 0.0;
    double ssq = 1.0;
    for (double v : x) {
        if (v != 0.0) {
            const double a = std::abs(v);
            if (scale_ < a) {
                ssq = 1.0 + ssq * (scale_ / a) * (scale_ / a);
                scale_ = a;
            } else {
                ssq += (a / scale_) * (a / scale_);
            }
        }
    }
    return scale_ * std::sqrt(ssq);
}

double norm_inf(std::span<const double> x)
{
    double m = 0.0;
    for (double v : x) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y)
{
    require_same_size(x, y, "axpy");
    for (Index i = 0; i < x.size(); ++i) {
        y[i] += a * x[i];
    }
}

void scale(double a, std::span<double> x)
{
    for (double& v : x) {
        v *= a;
    }
}

Vector add(std::span<const double> x, std::span<const double> y)
{
    require_same_size(x, y, "add");
    Vector z(x.begin(), x.end());
    axpy(1.0, y, z);
    return z;
}

Vector subtract(std::span<const double> x, std::span<const double> y)
{
    require_same_size(x, y, "subtract");
    Vector z(x.begin(), x.end());
    axpy(-1.0, y, z);
    return z;
}

Vector scaled(double a, std::span<const double> x)
{
    Vector z(x.begin(), x.end());
    scale(a, z);
    return z;
}

// ---------------------------------------------------------------------------
// DenseMatrix

DenseMatrix::DenseMatrix(Index nrows, Index ncols, double fill)
    : nrows_(nrows), ncols_(ncols), data_(nrows * ncols, fill)
{
}

DenseMatrix DenseMatrix::identity(Index n)
{
    DenseMatrix a(n, n);
    for (Index i = 0; i < n; ++i) {
        a(i, i) = 1.0;
    }
    return a;
}

DenseMatrix DenseMatrix::from_columns(const std::vector<Vector>& cols, Index nrows)
{
    DenseMatrix a(nrows, cols.size());
    for (Index j = 0; j < cols.size(); ++j) {
        a.set_col(j, cols[j]);
    }
    return a;
}

Vector DenseMatrix::col_vector(Index j) const
{
    auto c = col(j);
    return Vector(c.begin(), c.end());
}

void DenseMatrix::set_col(Index j, std::span<const double> v)
{
    if (v.size() != nrows_) {
        throw DimensionError("set_col: length mismatch");
    }
    std::copy(v.begin(), v.end(), col(j).begin());
}

DenseMatrix DenseMatrix::transposed() const
{
    DenseMatrix t(ncols_, nrows_);
    for (Index j = 0; j < ncols_; ++j) {
        for (Index i = 0; i < nrows_; ++i) {
            t(j, i) = (*this)(i, j);
        }
    }
    return t;
}

DenseMatrix DenseMatrix::left_cols(Index ncols) const
{
    if (ncols > ncols_) {
        throw DimensionError("left_cols: too many columns requested");
    }
    DenseMatrix a(nrows_, ncols);
    std::copy(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(ncols * nrows_),
              a.data_.begin());
    return a;
}

double DenseMatrix::max_abs() const { return norm_inf(data_); }

double DenseMatrix::frobenius() const { return norm2(data_); }

Vector matvec(const DenseMatrix& a, std::span<const double> x)
{
    if (x.size() != a.cols()) {
        throw DimensionError("matvec: dimension mismatch");
    }
    Vector y(a.rows(), 0.0);
    for (Index j = 0; j < a.cols(); ++j) {
        axpy(x[j], a.col(j), y);
    }
    return y;
}

Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x)
{
    if (x.size() != a.rows()) {
        throw DimensionError("matvec_transposed: dimension mismatch");
    }
    Vector y(a.cols());
    for (Index j = 0; j < a.cols(); ++j) {
        y[j] = dot(a.col(j), x);
    }
    return y;
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionError("multiply: dimension mismatch");
    }
    DenseMatrix c(a.rows(), b.cols());
    for (Index j = 0; j < b.cols(); ++j) {
        auto cj = c.col(j);
        for (Index l = 0; l < a.cols(); ++l) {
            const double blj = b(l, j);
            if (blj != 0.0) {
                axpy(blj, a.col(l), cj);
            }
        }
    }
    return c;
}

DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows()) {
        throw DimensionError("multiply_transposed: dimension mismatch");
    }
    DenseMatrix c(a.cols(), b.cols());
    for (Index j = 0; j < b.cols(); ++j) {
        for (Index i = 0; i < a.cols(); ++i) {
            c(i, j) = dot(a.col(i), b.col(j));
        }
    }
    return c;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("subtract: shape mismatch");
    }
    DenseMatrix c = a;
    axpy(-1.0, b.data(), c.data());
    return c;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) { return subtract(a, b).max_abs(); }

// ---------------------------------------------------------------------------
// SparseMatrix

SparseMatrix::SparseMatrix(Index nrows, Index ncols)
    : nrows_(nrows), ncols_(ncols), row_ptr_(nrows + 1, 0)
{
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols, std::vector<Triplet> triplets)
{
    for (const auto& t : triplets) {
        if (t.row >= nrows || t.col >= ncols) {
            throw DimensionError("from_triplets: index (" + std::to_string(t.row) + ", " +
                                 std::to_string(t.col) + ") out of range");
        }
        if (!std::isfinite(t.value)) {
            throw std::invalid_argument("from_triplets: non-finite value");
        }
    }
    std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix a(nrows, ncols);
    a.col_idx_.reserve(triplets.size());
    a.values_.reserve(triplets.size());
    Index k = 0;
    while (k < triplets.size()) {
        const Index r = triplets[k].row;
        const Index c = triplets[k].col;
        double v = 0.0;
        while (k < triplets.size() && triplets[k].row == r && triplets[k].col == c) {
            v += triplets[k].value;
            ++k;
        }
        a.col_idx_.push_back(c);
        a.values_.push_back(v);
        ++a.row_ptr_[r + 1];
    }
    for (Index i = 0; i < nrows; ++i) {
        a.row_ptr_[i + 1] += a.row_ptr_[i];
    }
    return a;
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& a)
{
    std::vector<Triplet> t;
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            if (a(i, j) != 0.0) {
                t.push_back({i, j, a(i, j)});
            }
        }
    }
    return from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix SparseMatrix::identity(Index n)
{
    std::vector<Triplet> t;
    t.reserve(n);
    for (Index i = 0; i < n; ++i) {
        t.push_back({i, i, 1.0});
    }
    return from_triplets(n, n, std::move(t));
}

std::vector<Triplet> SparseMatrix::triplets() const
{
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (Index i = 0; i < nrows_; ++i) {
        for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            t.push_back({i, col_idx_[k], values_[k]});
        }
    }
    return t;
}

DenseMatrix SparseMatrix::to_dense() const
{
    DenseMatrix a(nrows_, ncols_);
    for (Index i = 0; i < nrows_; ++i) {
        for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
            a(i, col_idx_[k]) += values_[k];
        }
    }
    return a;
}

Vector spmv(const SparseMatrix& a, std::span<const double> x, bool transpose)
{
    const auto rp = a.row_ptr();
    const auto ci = a.col_idx();
    const auto val = a.values();
    if (!transpose) {
        if (x.size() != a.cols()) {
            throw DimensionError("spmv: x has length " + std::to_string(x.size()) + ", expected " +
                                 std::to_string(a.cols()));
        }
        Vector y(a.rows(), 0.0);
        for (Index i = 0; i < a.rows(); ++i) {
            double s = 0.0;
            for (Index k = rp[i]; k < rp[i + 1]; ++k) {
                s += val[k] * x[ci[k]];
            }
            y[i] = s;
        }
        return y;
    }
    if (x.size() != a.rows()) {
        throw DimensionError("spmv (transpose): x has length " + std::to_string(x.size()) +
                             ", expected " + std::to_string(a.rows()));
    }
    Vector y(a.cols(), 0.0);
    for (Index i = 0; i < a.rows(); ++i) {
        const double xi = x[i];
        for (Index k = rp[i]; k < rp[i + 1]; ++k) {
            y[ci[k]] += val[k] * xi;
        }
    }
    return y;
}

DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionError("multiply: dimension mismatch");
    }
    DenseMatrix c(a.rows(), b.cols());
    for (Index j = 0; j < b.cols(); ++j) {
        c.set_col(j, spmv(a, b.col(j)));
    }
    return c;
}

} // namespace gsvd
