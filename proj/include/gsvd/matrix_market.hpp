#ifndef GSVD_MATRIX_MARKET_HPP
#define GSVD_MATRIX_MARKET_HPP

#include <filesystem>
#include <stdexcept>
#include <string>

#include "gsvd/matrix.hpp"

namespace gsvd {

/// Malformed Matrix Market input. `line()` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

///
/// Read a real Matrix Market file (coordinate or array; general or
/// symmetric). Symmetric files are expanded to full storage and duplicate
/// coordinate entries are summed.
///
SparseMatrix read_matrix_market(const std::filesystem::path& path);

/// Same reader, dense result (used for array-format factor files).
DenseMatrix read_dense_matrix_market(const std::filesystem::path& path);

/// Coordinate format, `%%MatrixMarket matrix coordinate real general`,
/// 17 significant digits.
void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path);

/// Array format, `%%MatrixMarket matrix array real general`, column-major.
void write_matrix_market(const DenseMatrix& a, const std::filesystem::path& path);

} // namespace gsvd

#endif // GSVD_MATRIX_MARKET_HPP
