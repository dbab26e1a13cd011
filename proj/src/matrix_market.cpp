#include "gsvd/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

namespace gsvd {

ParseError::ParseError(const std::string& what, std::size_t line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank(const std::string& s)
{
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

struct Parsed {
    Index nrows = 0;
    Index ncols = 0;
    std::vector<Triplet> entries;
};

template <typename T>
T parse_number(const std::string& token, std::size_t line)
{
    T value{};
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw ParseError("invalid number '" + token + "'", line);
    }
    return value;
}

Parsed parse(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::string text;
    std::size_t line_no = 0;

    if (!std::getline(in, text)) {
        throw ParseError("empty file", 1);
    }
    ++line_no;
    std::istringstream header(text);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix") {
        throw ParseError("missing %%MatrixMarket matrix banner", line_no);
    }
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate" && format != "array") {
        throw ParseError("unsupported format '" + format + "'", line_no);
    }
    if (field != "real" && field != "double") {
        throw ParseError("unsupported field '" + field + "' (only real)", line_no);
    }
    if (symmetry != "general" && symmetry != "symmetric") {
        throw ParseError("unsupported symmetry '" + symmetry + "'", line_no);
    }
    const bool symmetric = symmetry == "symmetric";

    // Skip comments, read size line.
    while (std::getline(in, text)) {
        ++line_no;
        if (!text.empty() && text[0] == '%') {
            continue;
        }
        if (blank(text)) {
            continue;
        }
        break;
    }
    std::istringstream size_line(text);
    std::vector<std::string> tokens;
    for (std::string tok; size_line >> tok;) {
        tokens.push_back(tok);
    }

    Parsed out;
    const bool coordinate = format == "coordinate";
    if (tokens.size() != (coordinate ? 3u : 2u)) {
        throw ParseError("malformed size line", line_no);
    }
    out.nrows = parse_number<Index>(tokens[0], line_no);
    out.ncols = parse_number<Index>(tokens[1], line_no);
    if (symmetric && out.nrows != out.ncols) {
        throw ParseError("symmetric matrix must be square", line_no);
    }

    auto next_data_line = [&](std::vector<std::string>& toks) -> bool {
        while (std::getline(in, text)) {
            ++line_no;
            if (blank(text) || text[0] == '%') {
                continue;
            }
            toks.clear();
            std::istringstream ls(text);
            for (std::string tok; ls >> tok;) {
                toks.push_back(tok);
            }
            return true;
        }
        return false;
    };

    auto push = [&](Index i, Index j, double v) {
        if (!std::isfinite(v)) {
            throw ParseError("non-finite value", line_no);
        }
        out.entries.push_back({i, j, v});
        if (symmetric && i != j) {
            out.entries.push_back({j, i, v});
        }
    };

    if (coordinate) {
        const auto nnz = parse_number<Index>(tokens[2], line_no);
        out.entries.reserve(symmetric ? 2 * nnz : nnz);
        for (Index k = 0; k < nnz; ++k) {
            if (!next_data_line(tokens)) {
                throw ParseError("expected " + std::to_string(nnz) + " entries, got " + std::to_string(k),
                                 line_no);
            }
            if (tokens.size() != 3) {
                throw ParseError("expected 'row col value'", line_no);
            }
            const auto i = parse_number<Index>(tokens[0], line_no);
            const auto j = parse_number<Index>(tokens[1], line_no);
            if (i < 1 || i > out.nrows || j < 1 || j > out.ncols) {
                throw ParseError("index (" + tokens[0] + ", " + tokens[1] + ") out of range", line_no);
            }
            if (symmetric && j > i) {
                throw ParseError("symmetric file must store the lower triangle", line_no);
            }
            push(i - 1, j - 1, parse_number<double>(tokens[2], line_no));
        }
    } else {
        // Column-major; symmetric arrays list the lower triangle only.
        for (Index j = 0; j < out.ncols; ++j) {
            for (Index i = symmetric ? j : 0; i < out.nrows; ++i) {
                if (!next_data_line(tokens)) {
                    throw ParseError("array data ended early", line_no);
                }
                if (tokens.size() != 1) {
                    throw ParseError("expected a single value", line_no);
                }
                const double v = parse_number<double>(tokens[0], line_no);
                if (v != 0.0) {
                    push(i, j, v);
                }
            }
        }
    }
    if (next_data_line(tokens)) {
        throw ParseError("unexpected trailing data", line_no);
    }
    return out;
}

std::string format_value(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_for_write(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

} // namespace

SparseMatrix read_matrix_market(const std::filesystem::path& path)
{
    auto p = parse(path);
    return SparseMatrix::from_triplets(p.nrows, p.ncols, std::move(p.entries));
}

DenseMatrix read_dense_matrix_market(const std::filesystem::path& path)
{
    const auto p = parse(path);
    DenseMatrix a(p.nrows, p.ncols);
    for (const auto& t : p.entries) {
        a(t.row, t.col) += t.value;
    }
    return a;
}

void write_matrix_market(const SparseMatrix& a, const std::filesystem::path& path)
{
    auto out = open_for_write(path);
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    for (const auto& t : a.triplets()) {
        out << t.row + 1 << ' ' << t.col + 1 << ' ' << format_value(t.value) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

void write_matrix_market(const DenseMatrix& a, const std::filesystem::path& path)
{
    auto out = open_for_write(path);
    out << "%%MatrixMarket matrix array real general\n";
    out << a.rows() << ' ' << a.cols() << '\n';
    for (double v : a.data()) {
        out << format_value(v) << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

} // namespace gsvd
