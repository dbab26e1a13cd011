#include "gsvd/cli.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "gsvd/dense_kernels.hpp"
#include "gsvd/gsvd_solver.hpp"
#include "gsvd/matrix_market.hpp"
#include "gsvd/oracle.hpp"
#include "gsvd/pair_operators.hpp"
#include "gsvd/run_io.hpp"
#include "gsvd/testgen.hpp"

namespace gsvd {

namespace {

using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct GenerateOptions {
    std::string recipe;
    Index n = 200;
    Index r = 0;
    std::vector<double> c;
    double d_lo = 1.0;
    double d_hi = 10.0;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
};

struct RunOptions {
    std::string a;
    std::string l;
    std::string side = "A";
    int largest = 1;
    int smallest = 0;
    double tol = 1e-10;
    int max_iters = 500;
    std::string reorth = "full";
    std::string pinv = "auto";
    double inner_tol = 1e-10;
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string reference;
    bool keep_going = false;
    bool track_residuals = false;
};

struct OracleOptions {
    std::string a;
    std::string l;
    std::string out;
    std::uint64_t seed = kDefaultSeed;
};

struct CompareOptions {
    std::string run;
    std::string reference;
    std::string out;
};

class CommandError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

MatrixPair read_pair(const std::string& a, const std::string& l)
{
    return MatrixPair(read_matrix_market(a), read_matrix_market(l));
}

json double_json(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return format_double(v);
}

double json_double(const json& j)
{
    if (j.is_number()) {
        return j.get<double>();
    }
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        if (s == "-inf") {
            return -std::numeric_limits<double>::infinity();
        }
    }
    return kNaN;
}

int cmd_generate(const GenerateOptions& o, std::ostream& out)
{
    DesignedPair dp;
    json params{{"n", o.n}, {"seed", o.seed}};
    if (o.recipe == "example1") {
        dp = make_example1(o.n, o.seed);
    } else if (o.recipe == "example3") {
        const Index r = o.r > 0 ? o.r : o.n * 9 / 10;
        params["r"] = r;
        dp = make_example3(o.n, r, o.seed);
    } else if (o.recipe == "example4") {
        dp = make_example4(o.n, o.seed);
    } else {
        const Index r = o.r > 0 ? o.r : o.n;
        if (o.c.size() != r) {
            throw CommandError("designed recipe needs --c with exactly r = " + std::to_string(r) + " values");
        }
        params["r"] = r;
        params["c"] = o.c;
        params["d_range"] = {o.d_lo, o.d_hi};
        dp = make_designed_pair(o.n, r, o.c, {o.d_lo, o.d_hi}, o.seed);
    }
    write_designed_pair(dp, o.out, params);
    out << "wrote " << o.recipe << " pair (n = " << dp.pair.n() << ", r = " << dp.truth.r << ") to " << o.out
        << '\n';
    return 0;
}

int cmd_run(const RunOptions& o, std::ostream& out)
{
    SolverConfig cfg;
    cfg.side = parse_side(o.side);
    cfg.n_largest = o.largest;
    cfg.n_smallest = o.smallest;
    cfg.tol = o.tol;
    cfg.max_iters = o.max_iters;
    cfg.stop_when_converged = !o.keep_going;
    cfg.track_residuals = o.track_residuals;
    cfg.ggkb.reorth = o.reorth == "none" ? Reorth::none : Reorth::full;
    cfg.ggkb.seed = o.seed;
    cfg.ggkb.pinv = PinvApplier::iterative(o.inner_tol);
    cfg.validate();

    const MatrixPair pair = read_pair(o.a, o.l);
    const std::string hash = pair_hash(pair);
    std::string pinv_mode = o.pinv;
    if (pinv_mode == "auto") {
        pinv_mode = pair.n() <= dense_limit() ? "direct" : "lsqr";
    }
    if (pinv_mode == "direct") {
        cfg.ggkb.pinv = PinvApplier::direct(pair);
    }

    std::optional<GsvdReference> ref;
    if (!o.reference.empty()) {
        std::string ref_hash;
        ref = load_reference(o.reference, &ref_hash);
        if (!ref_hash.empty() && ref_hash != hash) {
            throw CommandError("reference " + o.reference + " was built for a different pair");
        }
    }

    const auto res = run_solver(pair, std::nullopt, cfg, ref ? &*ref : nullptr);

    const fs::path dir = o.out;
    fs::create_directories(dir);
    write_history_csv(res.history, cfg.side, dir / "history.csv");
    write_ritz_csv(res.history, dir / "ritz.csv");
    write_components(res.tuples, dir / "components");

    const auto& st = res.state;
    const auto& stats = cfg.ggkb.pinv.stats();
    json summary;
    summary["config"] = {{"a", o.a},
                         {"l", o.l},
                         {"side", o.side},
                         {"largest", o.largest},
                         {"smallest", o.smallest},
                         {"tol", o.tol},
                         {"max_iters", o.max_iters},
                         {"reorth", o.reorth},
                         {"pinv", o.pinv},
                         {"pinv_resolved", pinv_mode},
                         {"inner_tol", o.inner_tol},
                         {"seed", o.seed},
                         {"out", o.out},
                         {"reference", o.reference},
                         {"keep_going", o.keep_going},
                         {"track_residuals", o.track_residuals}};
    summary["seed"] = o.seed;
    summary["pair_hash"] = hash;
    summary["nu"] = res.nu;
    summary["termination"] = {{"k", st.k()},
                              {"terminated", st.terminated},
                              {"breakdown_tol", cfg.ggkb.breakdown_tol},
                              {"breakdown_threshold", st.breakdown_threshold},
                              {"terminate_step", st.terminate_step ? json(*st.terminate_step) : json(nullptr)},
                              {"all_converged", res.all_converged},
                              {"max_iters_hit", res.max_iters_hit},
                              {"converged_at", res.converged_at ? json(*res.converged_at) : json(nullptr)}};
    summary["ghost"] = {{"detected", res.history.ghost_detected},
                        {"first_k", res.history.ghost_first_k ? json(*res.history.ghost_first_k) : json(nullptr)},
                        {"evaluated", ref.has_value()}};
    summary["pinv_stats"] = {{"solves", stats.solves.load()},
                             {"inner_iterations", stats.inner_iterations.load()},
                             {"unconverged", stats.unconverged.load()}};
    summary["history_schema"] = kHistorySchema;
    json comps = json::array();
    for (const auto& t : res.tuples) {
        comps.push_back({{"target_id", t.target_id},
                         {"c", t.c},
                         {"s", t.s},
                         {"gamma", double_json(t.gamma)},
                         {"residual_bound", t.residual_bound},
                         {"converged", t.converged}});
    }
    summary["components"] = comps;
    const int code = res.all_converged ? 0 : 2;
    summary["exit_code"] = code;
    write_json(summary, dir / "summary.json");

    for (const auto& t : res.tuples) {
        out << t.target_id << "  c = " << format_double(t.c) << "  s = " << format_double(t.s)
            << "  bound = " << format_double(t.residual_bound) << (t.converged ? "  converged" : "  not converged")
            << '\n';
    }
    out << "k = " << st.k() << (st.terminated ? " (terminated)" : "") << ", exit " << code << '\n';
    return code;
}

int cmd_oracle(const OracleOptions& o, std::ostream& out)
{
    const MatrixPair pair = read_pair(o.a, o.l);
    const auto ref = dense_gsvd(pair, 1e-10, o.seed);
    save_reference(ref, o.out, pair_hash(pair));
    const auto diag = verify_gsvd_identities(ref, pair);
    const double nu = spectral_norm_estimate(pair);
    write_json({{"ax", diag.ax}, {"lx", diag.lx}, {"adjoint", diag.adjoint}, {"gen_eig", diag.gen_eig}, {"nu", nu}},
               fs::path(o.out) / "identities.json");
    out << "r = " << ref.r << "  q = (" << ref.q1 << ", " << ref.q2 << ", " << ref.q3
        << ")  max identity residual = " << format_double(diag.max()) << '\n';
    return 0;
}

struct Component {
    std::string id;
    Side side = Side::A;
    double c = 0.0;
    double s = 0.0;
    double gamma = 0.0;
    bool converged = false;
    Vector x;
    Vector p;
    std::optional<Vector> pc;
};

Vector read_column(const fs::path& path) { return read_dense_matrix_market(path).col_vector(0); }

std::vector<Component> read_components(const fs::path& run_dir)
{
    const fs::path dir = run_dir / "components";
    const auto j = read_json(dir / "components.json");
    std::vector<Component> out;
    for (const auto& e : j.at("components")) {
        Component c;
        c.id = e.at("target_id").get<std::string>();
        c.side = parse_side(e.at("side").get<std::string>());
        c.c = e.at("c").get<double>();
        c.s = e.at("s").get<double>();
        c.gamma = json_double(e.at("gamma"));
        c.converged = e.at("converged").get<bool>();
        c.x = read_column(dir / e.at("x").get<std::string>());
        c.p = read_column(dir / e.at("p").get<std::string>());
        if (e.contains("p_complement")) {
            c.pc = read_column(dir / e.at("p_complement").get<std::string>());
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::string mirrored_id(const std::string& id)
{
    if (id.rfind("largest-", 0) == 0) {
        return "smallest-" + id.substr(8);
    }
    if (id.rfind("smallest-", 0) == 0) {
        return "largest-" + id.substr(9);
    }
    return id;
}

double safe_sin(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || norm2(x) == 0.0 || norm2(y) == 0.0) {
        return kNaN;
    }
    return sin_angle(x, y);
}

int cmd_compare(const CompareOptions& o, std::ostream& out)
{
    const fs::path run_dir = o.run;
    const fs::path ref_dir = o.reference;
    const fs::path out_dir = o.out.empty() ? run_dir : fs::path(o.out);
    const auto summary = read_json(run_dir / "summary.json");
    const std::string hash = summary.at("pair_hash").get<std::string>();
    const auto comps = read_components(run_dir);

    json rows = json::array();
    std::ofstream csv;
    fs::create_directories(out_dir);
    csv.open(out_dir / "compare.csv");
    if (!csv) {
        throw CommandError("cannot write " + (out_dir / "compare.csv").string());
    }
    csv << "target_id,side,c,ref_value,value_error,gamma_rel_error,sin_x,sin_p,converged\n";
    auto emit = [&](const Component& c, double ref_value, double gamma_err, double sx, double sp) {
        const double verr = std::abs(c.c - ref_value);
        csv << c.id << ',' << to_string(c.side) << ',' << format_double(c.c) << ',' << format_double(ref_value) << ','
            << format_double(verr) << ',' << format_double(gamma_err) << ',' << format_double(sx) << ','
            << format_double(sp) << ',' << (c.converged ? 1 : 0) << '\n';
        rows.push_back({{"target_id", c.id},
                        {"side", to_string(c.side)},
                        {"c", c.c},
                        {"ref_value", double_json(ref_value)},
                        {"value_error", double_json(verr)},
                        {"gamma_rel_error", double_json(gamma_err)},
                        {"sin_x", double_json(sx)},
                        {"sin_p", double_json(sp)},
                        {"converged", c.converged}});
    };

    if (fs::exists(ref_dir / "components" / "components.json")) {
        const auto other_summary = read_json(ref_dir / "summary.json");
        if (other_summary.at("pair_hash").get<std::string>() != hash) {
            throw CommandError("pair hash mismatch between " + o.run + " and " + o.reference);
        }
        const auto others = read_components(ref_dir);
        for (const auto& c : comps) {
            for (const auto& d : others) {
                const bool same = c.side == d.side;
                if (d.id != (same ? c.id : mirrored_id(c.id))) {
                    continue;
                }
                const double ref_value = same ? d.c : d.s;
                const double ref_gamma = same ? d.gamma : 1.0 / d.gamma;
                const double gerr = std::isfinite(c.gamma) && std::isfinite(ref_gamma) && ref_gamma != 0.0
                                        ? std::abs(c.gamma - ref_gamma) / std::abs(ref_gamma)
                                        : kNaN;
                double sp = kNaN;
                if (same) {
                    sp = safe_sin(c.p, d.p);
                } else if (d.pc) {
                    sp = safe_sin(c.p, *d.pc);
                }
                emit(c, ref_value, gerr, safe_sin(c.x, d.x), sp);
            }
        }
    } else {
        std::string ref_hash;
        const auto loaded = load_reference(ref_dir, &ref_hash);
        if (!ref_hash.empty() && ref_hash != hash) {
            throw CommandError("pair hash mismatch between " + o.run + " and " + o.reference);
        }
        const std::string side = summary.at("config").at("side").get<std::string>();
        const auto ref = parse_side(side) == Side::L ? loaded.swapped() : loaded;
        const auto starts = distinct_value_starts(ref);
        for (const auto& c : comps) {
            const bool largest = c.id.rfind("largest-", 0) == 0;
            const Index t = std::stoul(c.id.substr(c.id.find('-') + 1)) - 1;
            if (t >= starts.size()) {
                emit(c, kNaN, kNaN, kNaN, kNaN);
                continue;
            }
            const Index g = starts[largest ? t : starts.size() - 1 - t];
            const double rg = ref.gamma(g);
            const double gerr =
                std::isfinite(c.gamma) && std::isfinite(rg) && rg != 0.0 ? std::abs(c.gamma - rg) / rg : kNaN;
            double sx = kNaN;
            double sp = kNaN;
            if (ref.has_vectors()) {
                sx = safe_sin(c.x, ref.X1.col(g));
                sp = safe_sin(c.p, ref.P_A.col(g));
            }
            emit(c, ref.c[g], gerr, sx, sp);
        }
    }
    write_json({{"run", o.run}, {"reference", o.reference}, {"pair_hash", hash}, {"rows", rows}},
               out_dir / "compare.json");
    out << "compared " << rows.size() << " components; report in " << out_dir.string() << '\n';
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Extreme GSVD components of a matrix pair {A, L} by generalized Golub-Kahan bidiagonalization"};
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Write a constructed test pair (A.mtx, L.mtx, truth.json)");
    g->add_option("recipe", gen.recipe, "example1 | example3 | example4 | designed")
        ->required()
        ->check(CLI::IsMember({"example1", "example3", "example4", "designed"}));
    g->add_option("--n", gen.n, "Dimension")->check(CLI::PositiveNumber);
    g->add_option("--r", gen.r, "Rank of the stacked pair (example3, designed)");
    g->add_option("--c", gen.c, "Comma-separated c values (designed)")->delimiter(',');
    g->add_option("--d-lo", gen.d_lo, "Smallest entry of D (designed)");
    g->add_option("--d-hi", gen.d_hi, "Largest entry of D (designed)");
    g->add_option("--seed", gen.seed, "Seed of the orthogonal factor");
    g->add_option("--out", gen.out, "Output directory")->required();

    RunOptions run;
    auto* r = app.add_subcommand("run", "Compute extreme GSVD components");
    r->add_option("--a", run.a, "A (Matrix Market)")->required();
    r->add_option("--l", run.l, "L (Matrix Market)")->required();
    r->add_option("--side", run.side, "Operated side")->check(CLI::IsMember({"A", "L"}));
    r->add_option("--largest", run.largest, "Number of largest components")->check(CLI::NonNegativeNumber);
    r->add_option("--smallest", run.smallest, "Number of smallest components")->check(CLI::NonNegativeNumber);
    r->add_option("--tol", run.tol, "Tolerance on the residual bound")->check(CLI::PositiveNumber);
    r->add_option("--max-iters", run.max_iters, "Iteration limit")->check(CLI::PositiveNumber);
    r->add_option("--reorth", run.reorth, "Reorthogonalization")->check(CLI::IsMember({"none", "full"}));
    r->add_option("--pinv", run.pinv, "M† application (auto: direct up to the dense limit)")
        ->check(CLI::IsMember({"auto", "direct", "lsqr"}));
    r->add_option("--inner-tol", run.inner_tol, "LSQR tolerance")->check(CLI::PositiveNumber);
    r->add_option("--seed", run.seed, "Seed of the start vector and norm estimate");
    r->add_option("--out", run.out, "Output directory")->required();
    r->add_option("--reference", run.reference, "Reference or truth directory for diagnostics");
    r->add_flag("--keep-going", run.keep_going, "Iterate to max-iters even after convergence");
    r->add_flag("--track-residuals", run.track_residuals, "Record true relative residuals in the history");

    OracleOptions orc;
    auto* o = app.add_subcommand("oracle", "Dense reference GSVD (desk scale)");
    o->add_option("--a", orc.a, "A (Matrix Market)")->required();
    o->add_option("--l", orc.l, "L (Matrix Market)")->required();
    o->add_option("--seed", orc.seed, "Seed of the orthonormal completion");
    o->add_option("--out", orc.out, "Output directory")->required();

    CompareOptions cmp;
    auto* c = app.add_subcommand("compare", "Compare a run with a reference or another run");
    c->add_option("--run", cmp.run, "Run directory")->required();
    c->add_option("--reference", cmp.reference, "Reference, truth or run directory")->required();
    c->add_option("--out", cmp.out, "Report directory (default: the run directory)");

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (g->parsed()) {
            return cmd_generate(gen, out);
        }
        if (r->parsed()) {
            return cmd_run(run, out);
        }
        if (o->parsed()) {
            return cmd_oracle(orc, out);
        }
        return cmd_compare(cmp, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

} // namespace gsvd
