// Acceptance runs for the gGKB GSVD solver. One line per criterion:
//   [PASS|FAIL] <n> <title>: <details> (<seconds> s, limit <limit> s)
// Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "gsvd/dense_kernels.hpp"
#include "gsvd/ggkb.hpp"
#include "gsvd/gsvd_solver.hpp"
#include "gsvd/oracle.hpp"
#include "gsvd/pair_operators.hpp"
#include "gsvd/testgen.hpp"
#include "test_support.hpp"

using namespace gsvd;
using namespace gsvd::testing;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<Outcome()> run;
};

std::string fmt(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

/// Iteration from which the target's bound stays below tol (0 if never).
Index settled_at(const ConvergenceHistory& h, const std::string& id, double tol)
{
    Index last_above = 0;
    bool seen = false;
    for (const auto& it : h.iterations) {
        for (const auto& t : it.targets) {
            if (t.target_id == id) {
                seen = true;
                if (!(t.bound < tol)) {
                    last_above = it.k;
                }
            }
        }
    }
    return seen ? last_above + 1 : 0;
}

const GsvdTuple* find_tuple(const SolverResult& res, const std::string& id)
{
    for (const auto& t : res.tuples) {
        if (t.target_id == id) {
            return &t;
        }
    }
    return nullptr;
}

SolverConfig direct_config(const MatrixPair& pair, int largest, int smallest, Reorth reorth)
{
    SolverConfig cfg;
    cfg.n_largest = largest;
    cfg.n_smallest = smallest;
    cfg.tol = 1e-10;
    cfg.max_iters = 500;
    cfg.ggkb.reorth = reorth;
    cfg.ggkb.pinv = PinvApplier::direct(pair);
    return cfg;
}

Outcome example1_reproduction()
{
    const auto dp = make_example1(200);
    const auto cfg = direct_config(dp.pair, 3, 3, Reorth::full);
    const auto res = run_solver(dp.pair, std::nullopt, cfg, &dp.truth);

    const double top[] = {1.0, 0.95, 0.90};
    const double bottom[] = {0.01, 0.05, 0.1};
    double err = 0.0;
    bool found = true;
    Index top_done = 0;
    Index bottom_done = 0;
    for (int t = 0; t < 3; ++t) {
        const std::string lid = "largest-" + std::to_string(t + 1);
        const std::string sid = "smallest-" + std::to_string(t + 1);
        const auto* lt = find_tuple(res, lid);
        const auto* st = find_tuple(res, sid);
        if (lt == nullptr || st == nullptr) {
            found = false;
            continue;
        }
        err = std::max({err, std::abs(lt->c - top[t]), std::abs(st->c - bottom[t])});
        top_done = std::max(top_done, settled_at(res.history, lid, cfg.tol));
        bottom_done = std::max(bottom_done, settled_at(res.history, sid, cfg.tol));
    }
    Outcome o;
    o.pass = found && res.all_converged && err <= 1e-10 && top_done < bottom_done;
    o.detail = "k=" + std::to_string(res.state.k()) + " max|c-c_true|=" + fmt(err) +
               " top settled k=" + std::to_string(top_done) + " bottom settled k=" + std::to_string(bottom_done);
    return o;
}

Outcome ghost_phenomenon()
{
    const auto dp = make_example1(200);
    auto run = [&](Reorth reorth) {
        auto cfg = direct_config(dp.pair, 3, 3, reorth);
        cfg.max_iters = 300;
        cfg.stop_when_converged = false;
        return run_solver(dp.pair, std::nullopt, cfg, &dp.truth);
    };
    const auto none = run(Reorth::none);
    const auto full = run(Reorth::full);
    Outcome o;
    o.pass = none.state.k() >= 300 && none.history.ghost_detected && !full.history.ghost_detected;
    o.detail = "no-reorth k=" + std::to_string(none.state.k()) +
               " ghost=" + (none.history.ghost_detected ? "yes@k=" + std::to_string(*none.history.ghost_first_k) : "no") +
               "; full-reorth k=" + std::to_string(full.state.k()) +
               " ghost=" + (full.history.ghost_detected ? "yes" : "no");
    return o;
}

Outcome l_side_zero_avoidance()
{
    const auto dp = make_example1(200);
    auto cfg = direct_config(dp.pair, 0, 3, Reorth::full);
    cfg.side = Side::L;
    cfg.max_iters = 300;
    const auto res = run_solver(dp.pair, std::nullopt, cfg, &dp.truth);

    // s in ascending order: s₁ = 0, then s₂, s₃, s₄.
    std::vector<double> s = dp.truth.s;
    std::sort(s.begin(), s.end());
    double err = 0.0;
    bool found = true;
    for (int t = 0; t < 3; ++t) {
        const auto* tp = find_tuple(res, "smallest-" + std::to_string(t + 1));
        if (tp == nullptr) {
            found = false;
            continue;
        }
        err = std::max(err, std::abs(tp->c - s[static_cast<Index>(t) + 1]));
    }
    double min_ritz = std::numeric_limits<double>::infinity();
    Index first_small = 0;
    for (const auto& it : res.history.iterations) {
        for (double theta : it.ritz) {
            min_ritz = std::min(min_ritz, theta);
            if (theta <= 1e-6 && first_small == 0) {
                first_small = it.k;
            }
        }
    }
    Outcome o;
    o.pass = found && err <= 1e-8 && min_ritz > 1e-6;
    o.detail = "k=" + std::to_string(res.state.k()) + " max|c-s_{2,3,4}|=" + fmt(err) +
               " min Ritz=" + fmt(min_ritz) +
               (first_small ? " (first Ritz value <= 1e-6 at k=" + std::to_string(first_small) + ")" : "");
    return o;
}

Outcome residual_identities()
{
    const auto dp = make_example1(100);
    GgkbConfig g;
    g.reorth = Reorth::full;
    g.pinv = PinvApplier::direct(dp.pair);
    g.max_iters = 100;
    const double nu = spectral_norm_estimate(dp.pair);
    auto st = ggkb_init(dp.pair, random_start_vector(dp.pair.op_rows(), g.seed), g);

    double worst_first = 0.0;
    double worst_second = 0.0;
    double worst_excess = 0.0;
    double worst_violated_bound = 0.0;
    Index violations = 0;
    Index checked = 0;
    while (!st.terminated && st.k() < 100) {
        ggkb_step(st, dp.pair, g);
        const Index k = st.k();
        std::set<Index> which;
        for (Index t = 0; t < 3 && t < k; ++t) {
            which.insert(t);
            which.insert(k - 1 - t);
        }
        const std::vector<Index> w(which.begin(), which.end());
        for (const auto& tup : extract_ritz(st, dp.pair, w)) {
            const auto chk = residual_identity_check(tup, dp.pair, st);
            worst_first = std::max(worst_first, chk.first / nu);
            worst_second = std::max(worst_second, chk.second / (nu * nu));
            const double rel = chk.combined / nu;
            if (rel > tup.residual_bound * (1.0 + 1e-8)) {
                ++violations;
                worst_excess = std::max(worst_excess, rel - tup.residual_bound);
                worst_violated_bound = std::max(worst_violated_bound, tup.residual_bound);
            }
            ++checked;
        }
    }
    Outcome o;
    o.pass = st.k() == 100 && worst_first <= 1e-12 && worst_second <= 1e-10 && violations == 0;
    o.detail = "k=" + std::to_string(st.k()) + " first/nu=" + fmt(worst_first) + " second/nu^2=" + fmt(worst_second) +
               " bound violations=" + std::to_string(violations) + "/" + std::to_string(checked) +
               (violations ? " (max excess " + fmt(worst_excess) + ", all at bound <= " + fmt(worst_violated_bound) + ")" : "");
    return o;
}

Outcome termination_step()
{
    Index mismatches = 0;
    double worst_value = 0.0;
    double worst_sin = 0.0;
    std::string kts;
    for (int trial = 0; trial < 20; ++trial) {
        std::mt19937_64 rng(500 + trial);
        const Index n = 12 + rng() % 29;
        const Index r = trial % 2 == 0 ? n : n - 1 - rng() % 4;
        const Index groups = 3 + rng() % 4;

        auto grid = linspace(0.1, 0.9, 17);
        std::shuffle(grid.begin(), grid.end(), rng);
        std::vector<double> values(grid.begin(), grid.begin() + static_cast<long>(groups));
        std::sort(values.rbegin(), values.rend());
        if (trial % 3 == 0) {
            values.front() = 1.0;
        }
        if (trial % 4 == 1) {
            values.back() = 0.0;
        }
        std::vector<Index> mult(groups, 1);
        for (Index extra = groups; extra < r; ++extra) {
            ++mult[rng() % groups];
        }
        std::vector<double> c;
        for (Index g = 0; g < groups; ++g) {
            c.insert(c.end(), mult[g], values[g]);
        }
        const auto dp = make_designed_pair(n, r, c, {1.0, 10.0}, 900 + trial);
        const auto ref = dense_gsvd(dp.pair);

        // Keep a random nonempty subset of the positive groups.
        std::vector<Index> positive;
        for (Index g = 0; g < groups; ++g) {
            if (values[g] > 0.0) {
                positive.push_back(g);
            }
        }
        std::vector<bool> keep(groups, false);
        for (Index g : positive) {
            keep[g] = rng() % 2 == 0;
        }
        keep[positive[rng() % positive.size()]] = true;

        // b from the exact left vectors of the construction (P_A = I): kept
        // groups, plus directions with c = 0 which never count.
        const auto& truth = dp.truth;
        std::normal_distribution<double> normal;
        Vector b(dp.pair.op_rows(), 0.0);
        std::vector<double> kept_values;
        for (Index g = 0; g < groups; ++g) {
            if (values[g] > 0.0 && !keep[g]) {
                continue;
            }
            if (values[g] > 0.0) {
                kept_values.push_back(values[g]);
            }
            for (Index i = 0; i < truth.r; ++i) {
                if (truth.c[i] == values[g]) {
                    axpy(normal(rng), truth.P_A.col(i), b);
                }
            }
        }
        for (Index j = truth.r; j < truth.P_A.cols(); ++j) {
            axpy(normal(rng), truth.P_A.col(j), b);
        }

        const Index predicted = predict_kt(ref, dp.pair, b);
        GgkbConfig g;
        g.reorth = Reorth::full;
        g.pinv = PinvApplier::direct(dp.pair);
        g.max_iters = static_cast<int>(n) + 2;
        auto st = ggkb_init(dp.pair, b, g);
        while (!st.terminated && st.k() < static_cast<Index>(g.max_iters)) {
            ggkb_step(st, dp.pair, g);
        }
        const Index observed = st.terminate_step.value_or(st.k() + 1000);
        if (observed != predicted || predicted != kept_values.size()) {
            ++mismatches;
        }
        kts += (trial ? "," : "") + std::to_string(observed);
        if (!st.terminated || observed == 0) {
            continue;
        }

        std::vector<Index> all(st.k());
        std::iota(all.begin(), all.end(), Index{0});
        const auto tuples = extract_ritz(st, dp.pair, all);
        for (Index j = 0; j < tuples.size() && j < kept_values.size(); ++j) {
            const double v = kept_values[j];
            worst_value = std::max(worst_value, std::abs(tuples[j].c - v));
            std::vector<Vector> xs;
            std::vector<Vector> ps;
            for (Index i = 0; i < ref.r; ++i) {
                if (std::abs(ref.c[i] - v) <= 1e-10) {
                    xs.push_back(ref.x(i));
                    ps.push_back(ref.p_a(i));
                }
            }
            worst_sin = std::max({worst_sin, sin_to_span(tuples[j].x, orth(xs, n)),
                                  sin_to_span(tuples[j].p, orth(ps, dp.pair.op_rows()))});
        }
    }
    Outcome o;
    o.pass = mismatches == 0 && worst_value <= 1e-8 && worst_sin <= 1e-6;
    o.detail = "k_t mismatches=" + std::to_string(mismatches) + "/20 (k_t: " + kts + ") max value err=" +
               fmt(worst_value) + " max sin=" + fmt(worst_sin);
    return o;
}

Outcome nonregular_pair()
{
    const auto dp = make_example3(200, 180);
    const auto ref = dense_gsvd(dp.pair);
    Outcome o;
    if (ref.r != 180) {
        o.detail = "oracle rank r=" + std::to_string(ref.r);
        return o;
    }
    // One run per component, each stopping at its own convergence.
    auto run = [&](bool top) {
        auto cfg = direct_config(dp.pair, top ? 1 : 0, top ? 0 : 1, Reorth::full);
        cfg.track_residuals = true;
        return run_solver(dp.pair, std::nullopt, cfg, &ref);
    };
    double verr = 0.0;
    double serr = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    bool converged = true;
    std::string ks;
    for (const bool top : {true, false}) {
        const auto res = run(top);
        const Index i = top ? 0 : ref.r - 1;
        const auto* t = find_tuple(res, top ? "largest-1" : "smallest-1");
        converged = converged && res.all_converged && t != nullptr;
        ks += std::string(top ? "k_top=" : " k_bottom=") + std::to_string(res.state.k());
        if (t == nullptr) {
            continue;
        }
        verr = std::max(verr, std::abs(t->c - ref.c[i]));
        serr = std::max(serr, sin_to_span(t->x, orth({ref.x(i)}, ref.X1.rows())));
        for (const auto& it : res.history.iterations) {
            for (const auto& tr : it.targets) {
                const double ratio = tr.bound / tr.rel_residual;
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
    }
    o.pass = converged && verr <= 1e-8 && serr <= 1e-7 && lo >= 0.1 && hi <= 10.0;
    o.detail = ks + " value err=" + fmt(verr) + " sin err=" + fmt(serr) + " bound/residual in [" + fmt(lo) + ", " +
               fmt(hi) + "]";
    return o;
}

Outcome inner_tolerance_study()
{
    const auto dp = make_example4(300);
    auto run = [&](double inner_tol) {
        SolverConfig cfg;
        cfg.n_largest = 1;
        cfg.n_smallest = 0;
        cfg.tol = 1e-10;
        cfg.max_iters = 60;
        cfg.stop_when_converged = false;
        cfg.ggkb.reorth = Reorth::full;
        cfg.ggkb.pinv = PinvApplier::iterative(inner_tol);
        return run_solver(dp.pair, std::nullopt, cfg, &dp.truth);
    };
    auto plateau = [](const SolverResult& res) {
        std::vector<double> tail;
        const auto& its = res.history.iterations;
        for (Index i = its.size() >= 10 ? its.size() - 10 : 0; i < its.size(); ++i) {
            tail.push_back(its[i].targets.front().err_value);
        }
        std::sort(tail.begin(), tail.end());
        return tail[tail.size() / 2];
    };
    const auto tight = run(1e-10);
    const auto loose = run(1e-8);
    const double p_tight = plateau(tight);
    const double p_loose = plateau(loose);
    Outcome o;
    o.pass = tight.all_converged && loose.all_converged && p_loose >= p_tight && p_tight <= 1e-7;
    o.detail = "plateau(1e-10)=" + fmt(p_tight) + " plateau(1e-8)=" + fmt(p_loose) +
               " converged=" + (tight.all_converged ? "yes" : "no") + "/" + (loose.all_converged ? "yes" : "no");
    return o;
}

Outcome oracle_properties()
{
    double worst_ident = 0.0;
    double worst_struct = 0.0;
    double worst_coset = 0.0;
    double worst_recon = 0.0;
    Index failures = 0;
    Index nonregular = 0;
    Index with_q1 = 0;
    Index with_q3 = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::mt19937_64 rng(800 + trial);
        const Index n = 8 + rng() % 43;
        const Index m = n / 2 + rng() % (n / 2 + 6);
        const Index p = n / 2 + rng() % (n / 2 + 6);
        DenseMatrix a = random_dense(m, n, 7000 + trial, 0.6);
        DenseMatrix l = random_dense(p, n, 8000 + trial, 0.6);
        if (trial % 2 == 1) {
            std::vector<Vector> zs;
            for (Index j = 0; j < 1 + rng() % 3; ++j) {
                zs.push_back(random_vector(n, 9000 + 10 * trial + j));
            }
            const auto z = orth(zs, n);
            a = annihilate(a, z);
            l = annihilate(l, z);
        }
        if (trial % 5 == 0) {
            l = annihilate(l, orth({random_vector(n, 9500 + trial)}, n));
        }
        if (trial % 7 == 0) {
            a = annihilate(a, orth({random_vector(n, 9700 + trial)}, n));
        }
        const MatrixPair pair(SparseMatrix::from_dense(a), SparseMatrix::from_dense(l));
        const auto ref = dense_gsvd(pair);
        const DenseMatrix mm = [&] {
            auto x = gram(a);
            const auto y = gram(l);
            for (Index j = 0; j < n; ++j) {
                for (Index i = 0; i < n; ++i) {
                    x(i, j) += y(i, j);
                }
            }
            return x;
        }();
        const double nu = std::sqrt(sym_eig(mm).eigenvalues.front());
        nonregular += ref.r < n;
        with_q1 += ref.q1 > 0;
        with_q3 += ref.q3 > 0;

        const double ident = verify_gsvd_identities(ref, pair).max() / nu;

        // Block structure.
        DenseMatrix stacked(m + p, n);
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < m; ++i) {
                stacked(i, j) = a(i, j);
            }
            for (Index i = 0; i < p; ++i) {
                stacked(m + i, j) = l(i, j);
            }
        }
        double st = 0.0;
        bool shape_ok = ref.q1 + ref.q2 + ref.q3 == ref.r && ref.r == dense_rank(stacked) &&
                        ref.X1.rows() == n && ref.X1.cols() == ref.r && ref.P_A.rows() == m && ref.P_L.rows() == p;
        for (Index i = 0; i < ref.r; ++i) {
            st = std::max(st, std::abs(ref.c[i] * ref.c[i] + ref.s[i] * ref.s[i] - 1.0));
            shape_ok = shape_ok && (i == 0 || ref.c[i] <= ref.c[i - 1]);
            if (i < ref.q1) {
                shape_ok = shape_ok && ref.c[i] == 1.0 && ref.s[i] == 0.0;
            } else if (i < ref.q1 + ref.q2) {
                shape_ok = shape_ok && ref.c[i] > 0.0 && ref.c[i] < 1.0;
            } else {
                shape_ok = shape_ok && ref.c[i] == 0.0 && ref.s[i] == 1.0;
            }
        }
        const auto sa = ref.sigma_a();
        const auto sl = ref.sigma_l();
        auto ss = naive_product(sa.transposed(), sa);
        const auto tt = naive_product(sl.transposed(), sl);
        for (Index j = 0; j < ref.r; ++j) {
            for (Index i = 0; i < ref.r; ++i) {
                ss(i, j) += tt(i, j);
            }
        }
        st = std::max(st, max_abs_diff(ss, DenseMatrix::identity(ref.r)));
        const double orth_x = max_abs_diff(naive_product(ref.X1.transposed(), naive_product(mm, ref.X1)),
                                           DenseMatrix::identity(ref.r));
        const double orth_p = std::max(max_abs_diff(gram(ref.P_A), DenseMatrix::identity(m)),
                                       max_abs_diff(gram(ref.P_L), DenseMatrix::identity(p)));

        // Coset property.
        double coset = 0.0;
        if (ref.r < n) {
            Vector z = naive_matvec(ref.null_basis, random_vector(n - ref.r, 9900 + trial));
            scale(1.0 / norm2(z), z);
            for (Index i = 0; i < ref.r; ++i) {
                const Vector x = ref.x(i);
                const Vector xz = add(x, z);
                coset = std::max({coset, norm2(subtract(naive_matvec(a, xz), naive_matvec(a, x))),
                                  norm2(subtract(naive_matvec(l, xz), naive_matvec(l, x)))});
            }
            coset /= nu;
        }

        // A M† Aᵀ = P_A Σ_A Σ_Aᵀ P_Aᵀ.
        const auto lhs = naive_product(a, naive_product(dense_pinv(mm), a.transposed()));
        const auto rhs = naive_product(ref.P_A, naive_product(naive_product(sa, sa.transposed()), ref.P_A.transposed()));
        const double recon = max_abs_diff(lhs, rhs);

        const bool ok = ident <= 1e-9 && shape_ok && st <= 1e-12 && orth_x <= 1e-9 && orth_p <= 1e-10 &&
                        coset <= 1e-10 && recon <= 1e-9;
        failures += !ok;
        worst_ident = std::max(worst_ident, ident);
        worst_struct = std::max({worst_struct, st, orth_x, orth_p});
        worst_coset = std::max(worst_coset, coset);
        worst_recon = std::max(worst_recon, recon);
    }
    Outcome o;
    o.pass = failures == 0;
    o.detail = "failures=" + std::to_string(failures) + "/50 (nonregular " + std::to_string(nonregular) + ", q1>0 " +
               std::to_string(with_q1) + ", q3>0 " + std::to_string(with_q3) + ") identities/nu=" + fmt(worst_ident) +
               " structure=" + fmt(worst_struct) + " coset/nu=" + fmt(worst_coset) + " AM+A'=" + fmt(worst_recon);
    return o;
}

Outcome krylov_invariants()
{
    double worst_orth = 0.0;
    double worst_span = 0.0;
    bool reached = true;
    std::string steps;
    const Index shapes[][3] = {{24, 30, 30}, {35, 28, 30}, {30, 30, 30}};
    for (int trial = 0; trial < 3; ++trial) {
        const auto [m, p, n] = std::tuple{shapes[trial][0], shapes[trial][1], shapes[trial][2]};
        DenseMatrix a = random_dense(m, n, 300 + trial);
        DenseMatrix l = random_dense(p, n, 400 + trial);
        if (trial == 2) {
            const auto z = orth({random_vector(n, 500), random_vector(n, 501)}, n);
            a = annihilate(a, z);
            l = annihilate(l, z);
        }
        const MatrixPair pair(SparseMatrix::from_dense(a), SparseMatrix::from_dense(l));
        const Index r = trial == 2 ? n - 2 : n;
        const Index kmax = std::min(m, r);

        GgkbConfig g;
        g.reorth = Reorth::full;
        g.pinv = PinvApplier::direct(pair);
        g.max_iters = static_cast<int>(kmax) + 1;
        const Vector b = random_vector(m, 600 + trial);
        auto st = ggkb_init(pair, b, g);
        while (!st.terminated && st.k() < kmax) {
            ggkb_step(st, pair, g);
            const auto d = verify_recurrences(st, pair, g);
            worst_orth = std::max({worst_orth, d.u_orthogonality, d.v_orthogonality});
        }
        reached = reached && (st.k() == kmax || st.terminated);
        steps += (trial ? "," : "") + std::to_string(st.k());

        // K_k(M†AᵀA, M†Aᵀb) generated explicitly.
        DenseMatrix mm = gram(a);
        const auto ll = gram(l);
        for (Index j = 0; j < n; ++j) {
            for (Index i = 0; i < n; ++i) {
                mm(i, j) += ll(i, j);
            }
        }
        const auto mp = dense_pinv(mm);
        std::vector<Vector> krylov{naive_matvec(mp, naive_matvec(a.transposed(), b))};
        for (Index k = 1; k <= 5; ++k) {
            if (k > 1) {
                krylov.push_back(naive_matvec(mp, naive_matvec(a.transposed(), naive_matvec(a, krylov.back()))));
            }
            const std::vector<Vector> vs(st.bases.V.begin(), st.bases.V.begin() + static_cast<long>(k));
            worst_span = std::max(worst_span, max_abs_diff(projector(orth(vs, n)), projector(orth(krylov, n))));
        }
    }
    Outcome o;
    o.pass = reached && worst_orth <= 1e-8 && worst_span <= 1e-8;
    o.detail = "steps=" + steps + " max orthogonality defect=" + fmt(worst_orth) +
               " max projector diff (k<=5)=" + fmt(worst_span);
    return o;
}

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "Example-1 reproduction", 30, example1_reproduction},
        {2, "ghost phenomenon", 60, ghost_phenomenon},
        {3, "L-side zero avoidance", 30, l_side_zero_avoidance},
        {4, "residual identity suite", 20, residual_identities},
        {5, "termination step", 10, termination_step},
        {6, "nonregular pair", 60, nonregular_pair},
        {7, "inner-tolerance study", 120, inner_tolerance_study},
        {8, "oracle property suite", 30, oracle_properties},
        {9, "Krylov/orthogonality invariants", 10, krylov_invariants},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        only.insert(std::stoi(argv[i]));
    }

    int failed = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.contains(c.id)) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.limit_seconds;
        const bool pass = o.pass && in_time;
        failed += !pass;
        std::ostringstream line;
        line << (pass ? "[PASS] " : "[FAIL] ") << c.id << ' ' << c.title << ": " << o.detail << " (" << fmt(secs)
             << " s, limit " << c.limit_seconds << " s" << (in_time ? "" : ", over time limit") << ')';
        std::cout << line.str() << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
