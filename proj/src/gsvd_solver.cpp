#include "gsvd/gsvd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "gsvd/dense_kernels.hpp"
#include "gsvd/pair_operators.hpp"

namespace gsvd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kComplementCutoff = 1e-8;
constexpr double kGhostRadius = 1e-8;

struct Target {
    std::string id;
    Index ritz_index;
    bool largest;
    Index rank; ///< t in "largest-(t+1)" / "smallest-(t+1)"
};

std::vector<Target> targets_at(Index k, int n_largest, int n_smallest)
{
    std::vector<Target> out;
    const Index nl = static_cast<Index>(n_largest);
    const Index ns = static_cast<Index>(n_smallest);
    if (k >= nl + ns) {
        for (Index t = 0; t < nl; ++t) {
            out.push_back({"largest-" + std::to_string(t + 1), t, true, t});
        }
        for (Index t = 0; t < ns; ++t) {
            out.push_back({"smallest-" + std::to_string(t + 1), k - 1 - t, false, t});
        }
        return out;
    }
    // Fewer Ritz values than targets: every position is used once, the top
    // ones as "largest" targets first.
    const Index top = std::min(nl, k);
    for (Index t = 0; t < top; ++t) {
        out.push_back({"largest-" + std::to_string(t + 1), t, true, t});
    }
    for (Index t = 0; t < k - top; ++t) {
        out.push_back({"smallest-" + std::to_string(t + 1), k - 1 - t, false, t});
    }
    return out;
}

// Distinct reachable reference values (c > 0 on the operated side), with the
// first reference index of each group.
struct Reachable {
    std::vector<double> values;
    std::vector<Index> first;
};

Reachable reachable_values(const GsvdReference& ref)
{
    Reachable out;
    out.first = distinct_value_starts(ref);
    for (Index i : out.first) {
        out.values.push_back(ref.c[i]);
    }
    return out;
}

bool has_duplicate_near(const std::vector<double>& ritz, const std::vector<double>& values)
{
    std::vector<int> hits(values.size(), 0);
    for (double theta : ritz) {
        for (Index j = 0; j < values.size(); ++j) {
            if (std::abs(theta - values[j]) <= kGhostRadius) {
                if (++hits[j] >= 2) {
                    return true;
                }
                break;
            }
        }
    }
    return false;
}

std::vector<GsvdTuple> extract_from_svd(const GgkbState& state, const MatrixPair& pair, const SmallSvdResult& svd,
                                        std::span<const Index> which)
{
    const Index k = state.k();
    const auto& B = state.bases;
    const double ab = state.factor.alphas[k] * state.factor.betas[k];
    const Side side = pair.role_swap() ? Side::L : Side::A;
    std::vector<GsvdTuple> out;
    out.reserve(which.size());
    for (Index i : which) {
        if (i >= k) {
            throw std::out_of_range("extract_ritz: index " + std::to_string(i) + " >= k = " + std::to_string(k));
        }
        GsvdTuple t;
        const double theta = svd.singular_values[i];
        t.c = std::min(theta, 1.0);
        t.s = std::sqrt(std::max(0.0, 1.0 - theta * theta));
        t.gamma = t.s == 0.0 ? kInf : t.c / t.s;
        t.p.assign(B.U[0].size(), 0.0);
        for (Index j = 0; j <= k; ++j) {
            axpy(svd.left(j, i), B.U[j], t.p);
        }
        t.x.assign(pair.n(), 0.0);
        for (Index j = 0; j < k; ++j) {
            axpy(svd.right(j, i), B.V[j], t.x);
        }
        if (t.s > kComplementCutoff) {
            t.p_complement = scaled(1.0 / t.s, spmv(pair.complement(), t.x));
        }
        t.h_last = svd.right(k - 1, i);
        t.residual_bound = ab * std::abs(t.h_last);
        t.side = side;
        t.ritz_index = i;
        t.k = k;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

const char* to_string(Side side) noexcept { return side == Side::A ? "A" : "L"; }

Side parse_side(const std::string& text)
{
    if (text == "A" || text == "a") {
        return Side::A;
    }
    if (text == "L" || text == "l") {
        return Side::L;
    }
    throw std::invalid_argument("side must be A or L, got '" + text + "'");
}

void SolverConfig::validate() const
{
    if (n_largest < 0 || n_smallest < 0 || n_largest + n_smallest < 1) {
        throw std::invalid_argument("SolverConfig: need n_largest + n_smallest >= 1");
    }
    if (!(tol > 0.0)) {
        throw std::invalid_argument("SolverConfig: tol must be positive");
    }
    if (max_iters < 1) {
        throw std::invalid_argument("SolverConfig: max_iters must be >= 1");
    }
    if (norm_iters < 1) {
        throw std::invalid_argument("SolverConfig: norm_iters must be >= 1");
    }
    ggkb.validate();
}

std::vector<GsvdTuple> extract_ritz(const GgkbState& state, const MatrixPair& pair, std::span<const Index> which)
{
    if (state.k() == 0) {
        throw std::out_of_range("extract_ritz: no Ritz values at k = 0");
    }
    const auto svd = small_svd(assemble_Bk(state.factor));
    return extract_from_svd(state, pair, svd, which);
}

ResidualCheck residual_identity_check(const GsvdTuple& tuple, const MatrixPair& pair, const GgkbState& state)
{
    if (tuple.k != state.k()) {
        throw std::logic_error("residual_identity_check: tuple was not extracted from this state");
    }
    const MatrixPair op = pair.with_side(tuple.side == Side::L);
    const auto& a = op.op();
    const auto& l = op.complement();
    const Index k = state.k();

    const Vector ax = spmv(a, tuple.x);
    Vector r1 = ax;
    axpy(-tuple.c, tuple.p, r1);

    Vector g = scaled(tuple.s * tuple.s, spmv(a, ax, true));
    axpy(-tuple.c * tuple.c, spmv(l, spmv(l, tuple.x), true), g);

    Vector r2 = g;
    const double coeff = state.factor.alphas[k] * state.factor.betas[k] * tuple.h_last;
    axpy(-coeff, state.bases.MV[k], r2);

    ResidualCheck out;
    out.first = norm2(r1);
    out.second = norm2(r2);
    out.combined = std::hypot(out.first, norm2(g));
    return out;
}

SolverResult run_solver(const MatrixPair& pair, std::optional<Vector> b, const SolverConfig& cfg,
                        const GsvdReference* reference)
{
    cfg.validate();
    const MatrixPair op = pair.with_side(cfg.side == Side::L);

    std::optional<GsvdReference> ref;
    if (reference != nullptr) {
        ref = cfg.side == Side::L ? reference->swapped() : *reference;
    }
    const bool ref_vectors = ref && ref->has_vectors();
    Reachable reach;
    if (ref) {
        reach = reachable_values(*ref);
    }

    SolverResult res;
    res.side = cfg.side;
    res.nu = spectral_norm_estimate(op, cfg.norm_iters, cfg.ggkb.seed);
    res.b = b ? std::move(*b) : random_start_vector(op.op_rows(), cfg.ggkb.seed);
    if (res.b.size() != op.op_rows()) {
        throw DimensionError("run_solver: b has length " + std::to_string(res.b.size()) + ", expected " +
                             std::to_string(op.op_rows()));
    }

    GgkbConfig gcfg = cfg.ggkb;
    gcfg.max_iters = cfg.max_iters;
    gcfg.scale = res.nu;
    res.state = ggkb_init(op, res.b, gcfg);
    auto& st = res.state;

    const Index total = static_cast<Index>(cfg.n_largest + cfg.n_smallest);
    bool all_conv = false;
    std::vector<Target> targets;
    std::vector<double> bounds;
    SmallSvdResult svd;

    for (;;) {
        const Index k = st.k();
        if (k >= 1) {
            // Warm start from the previous right vectors: B_{k−1} is the
            // leading block of B_k.
            svd = k == 1 ? small_svd(assemble_Bk(st.factor)) : small_svd(assemble_Bk(st.factor), svd.right);
            const double ab = st.factor.alphas[k] * st.factor.betas[k];
            targets = targets_at(k, cfg.n_largest, cfg.n_smallest);
            bounds.assign(targets.size(), 0.0);
            for (Index t = 0; t < targets.size(); ++t) {
                bounds[t] = ab * std::abs(svd.right(k - 1, targets[t].ritz_index));
            }
            all_conv = (k >= total || st.terminated) &&
                       std::all_of(bounds.begin(), bounds.end(), [&](double v) { return v < cfg.tol; });
            if (all_conv && !res.converged_at) {
                res.converged_at = k;
            }

            IterationRecord rec;
            rec.k = k;
            rec.ritz = svd.singular_values;
            std::vector<GsvdTuple> tuples;
            if (ref_vectors || cfg.track_residuals) {
                std::vector<Index> which;
                for (const auto& t : targets) {
                    which.push_back(t.ritz_index);
                }
                tuples = extract_from_svd(st, op, svd, which);
            }
            for (Index t = 0; t < targets.size(); ++t) {
                const auto& tg = targets[t];
                TargetRecord tr;
                tr.target_id = tg.id;
                tr.ritz_index = tg.ritz_index;
                tr.theta = svd.singular_values[tg.ritz_index];
                tr.c = std::min(tr.theta, 1.0);
                tr.s = std::sqrt(std::max(0.0, 1.0 - tr.theta * tr.theta));
                tr.bound = bounds[t];
                tr.err_value = kNaN;
                tr.err_sin_x = kNaN;
                tr.err_sin_p = kNaN;
                tr.rel_residual = kNaN;
                if (ref && tg.rank < reach.values.size()) {
                    const Index g = tg.largest ? tg.rank : reach.values.size() - 1 - tg.rank;
                    tr.err_value = std::abs(tr.theta - reach.values[g]);
                    if (ref_vectors) {
                        const Index ri = reach.first[g];
                        tr.err_sin_x = sin_angle(tuples[t].x, ref->X1.col(ri));
                        tr.err_sin_p = sin_angle(tuples[t].p, ref->P_A.col(ri));
                    }
                }
                if (cfg.track_residuals) {
                    tr.rel_residual = residual_identity_check(tuples[t], op, st).combined / res.nu;
                }
                rec.targets.push_back(std::move(tr));
            }
            if (ref && !res.history.ghost_detected && has_duplicate_near(rec.ritz, reach.values)) {
                res.history.ghost_detected = true;
                res.history.ghost_first_k = k;
            }
            res.history.iterations.push_back(std::move(rec));

            if (all_conv && cfg.stop_when_converged) {
                break;
            }
        }
        if (st.terminated || k >= static_cast<Index>(cfg.max_iters)) {
            break;
        }
        ggkb_step(st, op, gcfg);
    }

    res.all_converged = all_conv;
    res.max_iters_hit = !st.terminated && !all_conv;
    if (st.k() == 0) {
        return res;
    }

    std::vector<Index> which;
    for (const auto& t : targets) {
        which.push_back(t.ritz_index);
    }
    res.tuples = extract_from_svd(st, op, svd, which);
    for (Index t = 0; t < targets.size(); ++t) {
        res.tuples[t].target_id = targets[t].id;
        res.tuples[t].converged = st.terminated || bounds[t] < cfg.tol;
    }
    return res;
}

double sin_angle(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) {
        throw DimensionError("sin_angle: length mismatch");
    }
    const double nx = norm2(x);
    const double ny = norm2(y);
    if (nx == 0.0 || ny == 0.0) {
        throw std::invalid_argument("sin_angle: zero vector");
    }
    // ‖x̂ − (x̂ᵀŷ)ŷ‖ equals √(1 − cos²) without the cancellation near 0.
    Vector xh = scaled(1.0 / nx, x);
    const Vector yh = scaled(1.0 / ny, y);
    axpy(-dot(xh, yh), yh, xh);
    return std::clamp(norm2(xh), 0.0, 1.0);
}

double chebyshev_value(Index j, double t)
{
    if (t < 1.0) {
        throw std::domain_error("chebyshev_value: t must be >= 1");
    }
    const double base = t + std::sqrt(t * t - 1.0);
    const double p = std::pow(base, static_cast<double>(j));
    return 0.5 * (p + 1.0 / p);
}

CbBoundReport chebyshev_bound(const GsvdReference& reference, std::span<const double> b, Index k, Index i,
                              std::span<const double> ritz)
{
    const auto& ref = reference;
    if (!ref.has_vectors()) {
        throw std::invalid_argument("chebyshev_bound: reference has no left vectors");
    }
    if (i >= ref.q1 + ref.q2) {
        throw std::out_of_range("chebyshev_bound: component index beyond the nonzero block");
    }
    if (k < i + 1) {
        throw std::invalid_argument("chebyshev_bound: need k > i");
    }
    if (ritz.size() < i) {
        throw std::invalid_argument("chebyshev_bound: not enough Ritz values for kappa");
    }
    if (b.size() != ref.P_A.rows()) {
        throw DimensionError("chebyshev_bound: b length mismatch");
    }
    const Index r = ref.r;
    const double cr2 = ref.c[r - 1] * ref.c[r - 1];
    const double ci2 = ref.c[i] * ref.c[i];

    CbBoundReport rep;
    double denom2 = 0.0;
    double ti = 0.0;
    for (Index j = 0; j < std::min(r, ref.P_A.cols()); ++j) {
        const double t = ref.c[j] * dot(ref.P_A.col(j), b);
        denom2 += t * t;
        if (j == i) {
            ti = t;
        }
    }
    const double denom = std::sqrt(denom2);
    rep.angle = denom == 0.0 ? std::numbers::pi / 2 : std::acos(std::clamp(std::abs(ti) / denom, 0.0, 1.0));

    for (Index j = 0; j < i; ++j) {
        const double th2 = ritz[j] * ritz[j];
        rep.kappa *= (th2 - cr2) / (th2 - ci2);
    }

    const double gap_den = i + 1 < r ? ref.c[i + 1] * ref.c[i + 1] - cr2 : 0.0;
    if (gap_den <= 0.0) {
        rep.gap_ratio = kInf;
        rep.chebyshev = kInf;
        rep.bound = kInf;
        return rep;
    }
    rep.gap_ratio = (ci2 - ref.c[i + 1] * ref.c[i + 1]) / gap_den;
    rep.chebyshev = chebyshev_value(k - i - 1, 1.0 + 2.0 * rep.gap_ratio);

    const double tan_angle = std::tan(rep.angle);
    if (rep.angle == 0.0) {
        rep.bound = 0.0;
    } else if (rep.angle >= std::numbers::pi / 2) {
        rep.bound = kInf;
    } else {
        rep.bound = (ref.c[0] * ref.c[0] - cr2) * (rep.kappa * tan_angle / rep.chebyshev);
    }
    return rep;
}

} // namespace gsvd
