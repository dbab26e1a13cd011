#ifndef GSVD_RUN_IO_HPP
#define GSVD_RUN_IO_HPP

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gsvd/gsvd_solver.hpp"
#include "gsvd/oracle.hpp"
#include "gsvd/pair.hpp"
#include "gsvd/testgen.hpp"

namespace gsvd {

namespace fs = std::filesystem;

inline constexpr const char* kHistorySchema = "gsvd-history v1";

/// FNV-1a 64-bit hash of the shapes and stored entries of A and L, as hex.
std::string pair_hash(const MatrixPair& pair);

/// Round-trip-exact text for a double ("inf", "-inf", "nan" for non-finite).
std::string format_double(double v);

/// One row per iteration per target. The first line is "# <schema>".
void write_history_csv(const ConvergenceHistory& history, Side side, const fs::path& path);
/// One row per iteration per Ritz value: k, index, theta.
void write_ritz_csv(const ConvergenceHistory& history, const fs::path& path);

/// x_<id>.mtx and p_<id>.mtx (plus pc_<id>.mtx when the complementary
/// vector exists) and a components.json manifest.
void write_components(const std::vector<GsvdTuple>& tuples, const fs::path& dir);

/// Reference factors as Matrix Market arrays plus reference.json.
void save_reference(const GsvdReference& ref, const fs::path& dir, const std::string& hash);

/// Loads reference.json (with factors when present) or, failing that, a
/// values-only truth.json. Sets `hash` to the recorded pair hash.
GsvdReference load_reference(const fs::path& dir, std::string* hash = nullptr);

/// Writes A.mtx, L.mtx and truth.json.
void write_designed_pair(const DesignedPair& dp, const fs::path& dir, const nlohmann::json& params);

nlohmann::json read_json(const fs::path& path);
void write_json(const nlohmann::json& j, const fs::path& path);

} // namespace gsvd

#endif // GSVD_RUN_IO_HPP
