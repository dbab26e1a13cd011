#include "gsvd/run_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "gsvd/matrix_market.hpp"

namespace gsvd {

namespace {

void hash_bytes(std::uint64_t& h, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ull;
    }
}

void hash_matrix(std::uint64_t& h, const SparseMatrix& a)
{
    hash_bytes(h, a.rows());
    hash_bytes(h, a.cols());
    for (const auto& t : a.triplets()) {
        hash_bytes(h, t.row);
        hash_bytes(h, t.col);
        hash_bytes(h, std::bit_cast<std::uint64_t>(t.value));
    }
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return out;
}

DenseMatrix column(std::span<const double> v)
{
    DenseMatrix m(v.size(), 1);
    m.set_col(0, v);
    return m;
}

nlohmann::json number_or_string(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

} // namespace

std::string pair_hash(const MatrixPair& pair)
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    hash_matrix(h, pair.a());
    hash_matrix(h, pair.l());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_double(double v)
{
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

void write_history_csv(const ConvergenceHistory& history, Side side, const fs::path& path)
{
    auto out = open_out(path);
    out << "# " << kHistorySchema << '\n';
    out << "k,target_id,side,theta,c,s,bound,err_value,err_sin_x,err_sin_p,rel_residual\n";
    for (const auto& it : history.iterations) {
        for (const auto& t : it.targets) {
            out << it.k << ',' << t.target_id << ',' << to_string(side) << ',' << format_double(t.theta) << ','
                << format_double(t.c) << ',' << format_double(t.s) << ',' << format_double(t.bound) << ','
                << format_double(t.err_value) << ',' << format_double(t.err_sin_x) << ','
                << format_double(t.err_sin_p) << ',' << format_double(t.rel_residual) << '\n';
        }
    }
}

void write_ritz_csv(const ConvergenceHistory& history, const fs::path& path)
{
    auto out = open_out(path);
    out << "k,index,theta\n";
    for (const auto& it : history.iterations) {
        for (Index i = 0; i < it.ritz.size(); ++i) {
            out << it.k << ',' << i << ',' << format_double(it.ritz[i]) << '\n';
        }
    }
}

void write_components(const std::vector<GsvdTuple>& tuples, const fs::path& dir)
{
    fs::create_directories(dir);
    nlohmann::json list = nlohmann::json::array();
    for (const auto& t : tuples) {
        nlohmann::json e;
        e["target_id"] = t.target_id;
        e["side"] = to_string(t.side);
        e["c"] = t.c;
        e["s"] = t.s;
        e["gamma"] = number_or_string(t.gamma);
        e["residual_bound"] = t.residual_bound;
        e["converged"] = t.converged;
        e["ritz_index"] = t.ritz_index;
        e["k"] = t.k;
        const std::string x_file = "x_" + t.target_id + ".mtx";
        const std::string p_file = "p_" + t.target_id + ".mtx";
        write_matrix_market(column(t.x), dir / x_file);
        write_matrix_market(column(t.p), dir / p_file);
        e["x"] = x_file;
        e["p"] = p_file;
        if (t.p_complement) {
            const std::string pc_file = "pc_" + t.target_id + ".mtx";
            write_matrix_market(column(*t.p_complement), dir / pc_file);
            e["p_complement"] = pc_file;
        }
        list.push_back(std::move(e));
    }
    write_json(nlohmann::json{{"components", list}}, dir / "components.json");
}

void save_reference(const GsvdReference& ref, const fs::path& dir, const std::string& hash)
{
    fs::create_directories(dir);
    nlohmann::json j;
    j["r"] = ref.r;
    j["q1"] = ref.q1;
    j["q2"] = ref.q2;
    j["q3"] = ref.q3;
    j["c"] = ref.c;
    j["s"] = ref.s;
    j["rank_cutoff"] = ref.rank_cutoff;
    j["zero_cutoff"] = ref.zero_cutoff;
    j["pair_hash"] = hash;
    if (ref.has_vectors()) {
        write_matrix_market(ref.X1, dir / "X1.mtx");
        write_matrix_market(ref.P_A, dir / "P_A.mtx");
        write_matrix_market(ref.P_L, dir / "P_L.mtx");
        write_matrix_market(ref.null_basis, dir / "null_basis.mtx");
        j["factors"] = {{"X1", "X1.mtx"}, {"P_A", "P_A.mtx"}, {"P_L", "P_L.mtx"}, {"null_basis", "null_basis.mtx"}};
    }
    write_json(j, dir / "reference.json");
}

GsvdReference load_reference(const fs::path& dir, std::string* hash)
{
    const bool full = fs::exists(dir / "reference.json");
    const fs::path manifest = full ? dir / "reference.json" : dir / "truth.json";
    if (!fs::exists(manifest)) {
        throw std::runtime_error("no reference.json or truth.json in " + dir.string());
    }
    const auto j = read_json(manifest);
    GsvdReference ref;
    ref.r = j.at("r").get<Index>();
    ref.q1 = j.at("q1").get<Index>();
    ref.q2 = j.at("q2").get<Index>();
    ref.q3 = j.at("q3").get<Index>();
    ref.c = j.at("c").get<std::vector<double>>();
    ref.s = j.at("s").get<std::vector<double>>();
    if (ref.c.size() != ref.r || ref.s.size() != ref.r || ref.q1 + ref.q2 + ref.q3 != ref.r) {
        throw std::runtime_error(manifest.string() + ": inconsistent block sizes");
    }
    if (j.contains("rank_cutoff")) {
        ref.rank_cutoff = j.at("rank_cutoff").get<double>();
    }
    if (j.contains("zero_cutoff")) {
        ref.zero_cutoff = j.at("zero_cutoff").get<double>();
    }
    if (hash != nullptr) {
        *hash = j.value("pair_hash", std::string{});
    }
    if (full && j.contains("factors")) {
        const auto& f = j.at("factors");
        ref.X1 = read_dense_matrix_market(dir / f.at("X1").get<std::string>());
        ref.P_A = read_dense_matrix_market(dir / f.at("P_A").get<std::string>());
        ref.P_L = read_dense_matrix_market(dir / f.at("P_L").get<std::string>());
        ref.null_basis = read_dense_matrix_market(dir / f.at("null_basis").get<std::string>());
    }
    return ref;
}

void write_designed_pair(const DesignedPair& dp, const fs::path& dir, const nlohmann::json& params)
{
    fs::create_directories(dir);
    write_matrix_market(dp.pair.a(), dir / "A.mtx");
    write_matrix_market(dp.pair.l(), dir / "L.mtx");
    const auto& t = dp.truth;
    nlohmann::json j;
    j["recipe"] = dp.recipe;
    j["params"] = params;
    j["seed"] = dp.seed;
    j["orthogonal_factor"] = "seeded random orthogonal (Gram-Schmidt of a Gaussian matrix)";
    j["n"] = dp.pair.n();
    j["r"] = t.r;
    j["q1"] = t.q1;
    j["q2"] = t.q2;
    j["q3"] = t.q3;
    j["c"] = t.c;
    j["s"] = t.s;
    j["d_range"] = {dp.d.front(), dp.d.back()};
    j["pair_hash"] = pair_hash(dp.pair);
    write_json(j, dir / "truth.json");
}

nlohmann::json read_json(const fs::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_json(const nlohmann::json& j, const fs::path& path)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace gsvd
