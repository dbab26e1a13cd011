#ifndef GSVD_MATRIX_HPP
#define GSVD_MATRIX_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsvd {

using Index = std::size_t;
using Vector = std::vector<double>;

/// Raised when operand shapes do not conform.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

//
// Vector helpers. All reductions run in index order.
//
double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
Vector add(std::span<const double> x, std::span<const double> y);
Vector subtract(std::span<const double> x, std::span<const double> y);
Vector scaled(double a, std::span<const double> x);

///
/// Dense matrix with column-major storage.
///
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(Index nrows, Index ncols, double fill = 0.0);

    static DenseMatrix identity(Index n);
    static DenseMatrix from_columns(const std::vector<Vector>& cols, Index nrows);

    Index rows() const noexcept { return nrows_; }
    Index cols() const noexcept { return ncols_; }
    bool empty() const noexcept { return nrows_ == 0 || ncols_ == 0; }

    double& operator()(Index i, Index j) { return data_[j * nrows_ + i]; }
    double operator()(Index i, Index j) const { return data_[j * nrows_ + i]; }

    std::span<double> col(Index j) { return {data_.data() + j * nrows_, nrows_}; }
    std::span<const double> col(Index j) const { return {data_.data() + j * nrows_, nrows_}; }
    Vector col_vector(Index j) const;
    void set_col(Index j, std::span<const double> v);

    std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

    DenseMatrix transposed() const;
    /// Keep the first `ncols` columns.
    DenseMatrix left_cols(Index ncols) const;

    double max_abs() const;
    double frobenius() const;

private:
    Index nrows_ = 0;
    Index ncols_ = 0;
    std::vector<double> data_;
};

Vector matvec(const DenseMatrix& a, std::span<const double> x);
Vector matvec_transposed(const DenseMatrix& a, std::span<const double> x);
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);
/// aᵀ b
DenseMatrix multiply_transposed(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
/// max_ij |a_ij - b_ij|
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

struct Triplet {
    Index row;
    Index col;
    double value;
};

///
/// Compressed sparse row matrix. Immutable once assembled.
///
class SparseMatrix {
public:
    SparseMatrix() = default;
    /// Empty (all-zero) matrix of the given shape.
    SparseMatrix(Index nrows, Index ncols);

    /// Assemble from unordered triplets. Duplicates are summed; entries are
    /// sorted by (row, col).
    static SparseMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> triplets);
    /// Keep the nonzero entries of a dense matrix.
    static SparseMatrix from_dense(const DenseMatrix& a);
    static SparseMatrix identity(Index n);

    Index rows() const noexcept { return nrows_; }
    Index cols() const noexcept { return ncols_; }
    Index nnz() const noexcept { return values_.size(); }

    std::span<const Index> row_ptr() const noexcept { return row_ptr_; }
    std::span<const Index> col_idx() const noexcept { return col_idx_; }
    std::span<const double> values() const noexcept { return values_; }

    std::vector<Triplet> triplets() const;
    DenseMatrix to_dense() const;

private:
    Index nrows_ = 0;
    Index ncols_ = 0;
    std::vector<Index> row_ptr_{0};
    std::vector<Index> col_idx_;
    std::vector<double> values_;
};

/// y = A x, or y = Aᵀ x when `transpose` is set.
Vector spmv(const SparseMatrix& a, std::span<const double> x, bool transpose = false);
/// Sparse times dense: A B.
DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b);

} // namespace gsvd

#endif // GSVD_MATRIX_HPP
