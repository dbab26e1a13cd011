#include <doctest.h>

#include <cmath>

#include "gsvd/ggkb.hpp"
#include "gsvd/oracle.hpp"
#include "gsvd/testgen.hpp"
#include "test_support.hpp"

using namespace gsvd;
using namespace gsvd::testing;

namespace {

MatrixPair small_pair()
{
    const DenseMatrix a = [] {
        DenseMatrix m(4, 3);
        const double v[4][3] = {{1, 2, 0}, {0, 1, 1}, {1, 0, 1}, {2, 1, 0}};
        for (Index i = 0; i < 4; ++i) {
            for (Index j = 0; j < 3; ++j) {
                m(i, j) = v[i][j];
            }
        }
        return m;
    }();
    const auto l = SparseMatrix::from_triplets(2, 3, {{0, 0, 1.0}, {0, 1, -1.0}, {1, 1, 1.0}, {1, 2, -1.0}});
    return MatrixPair(SparseMatrix::from_dense(a), l);
}

GgkbConfig direct_cfg(const MatrixPair& pair, Reorth reorth = Reorth::full)
{
    GgkbConfig cfg;
    cfg.reorth = reorth;
    cfg.pinv = PinvApplier::direct(pair);
    return cfg;
}

GgkbState run_steps(const MatrixPair& pair, const Vector& b, const GgkbConfig& cfg, int steps)
{
    auto st = ggkb_init(pair, b, cfg);
    for (int i = 0; i < steps && !st.terminated; ++i) {
        ggkb_step(st, pair, cfg);
    }
    return st;
}

} // namespace

TEST_CASE("A = I with b = e1 terminates after one step")
{
    const MatrixPair pair(SparseMatrix::identity(3), SparseMatrix(1, 3));
    const auto cfg = direct_cfg(pair);
    const auto st = run_steps(pair, Vector{1.0, 0.0, 0.0}, cfg, 5);
    CHECK(st.factor.betas[0] == doctest::Approx(1.0));
    CHECK(st.factor.alphas[0] == doctest::Approx(1.0));
    REQUIRE(st.terminate_step.has_value());
    CHECK(*st.terminate_step == 1);
    CHECK(st.terminated);
}

TEST_CASE("b orthogonal to the range of A terminates at step zero")
{
    const auto a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1.0}});
    const auto l = SparseMatrix::from_triplets(2, 2, {{1, 1, 1.0}});
    const MatrixPair pair(a, l);
    const auto st = ggkb_init(pair, Vector{0.0, 3.0}, direct_cfg(pair));
    CHECK(st.terminated);
    REQUIRE(st.terminate_step.has_value());
    CHECK(*st.terminate_step == 0);
    CHECK(st.factor.betas[0] == doctest::Approx(3.0));
}

TEST_CASE("ggkb_init rejects a zero or mis-sized start vector")
{
    const auto pair = small_pair();
    const auto cfg = direct_cfg(pair);
    CHECK_THROWS(ggkb_init(pair, Vector(4, 0.0), cfg));
    CHECK_THROWS(ggkb_init(pair, Vector(3, 1.0), cfg));
}

TEST_CASE("first coefficients on a 4x3 pair")
{
    const auto pair = small_pair();
    const auto st = run_steps(pair, Vector(4, 1.0), direct_cfg(pair), 1);
    CHECK(std::abs(st.factor.betas[0] - 2.0) <= 1e-14);
    CHECK(std::abs(st.factor.alphas[0] - 0.9924527223072329) <= 1e-13);
    CHECK(std::abs(st.factor.betas[1] - 0.07909550088923821) <= 1e-13);
}

TEST_CASE("4x3 pair terminates at the number of distinct nonzero values")
{
    const auto pair = small_pair();
    const auto st = run_steps(pair, Vector(4, 1.0), direct_cfg(pair), 10);
    REQUIRE(st.terminate_step.has_value());
    CHECK(*st.terminate_step == 3);
    const auto ref = dense_gsvd(pair);
    CHECK(predict_kt(ref, pair, Vector(4, 1.0)) == 3);
}

TEST_CASE("first coefficients match a dense evaluation")
{
    const auto dp = make_example1(50);
    const auto b = random_start_vector(50, 3);
    const auto st = run_steps(dp.pair, b, direct_cfg(dp.pair), 1);

    const auto a = dp.pair.a().to_dense();
    const auto mplus = dense_pinv(densify_M(dp.pair));
    const double beta1 = norm2(b);
    const auto u1 = scaled(1.0 / beta1, b);
    const auto s = naive_matvec(mplus, naive_matvec(a.transposed(), u1));
    const double alpha1 = std::sqrt(dot(s, naive_matvec(densify_M(dp.pair), s)));
    CHECK(std::abs(st.factor.betas[0] - beta1) <= 1e-13 * beta1);
    CHECK(std::abs(st.factor.alphas[0] - alpha1) <= 1e-13 * alpha1);
}

TEST_CASE("V stays M-orthonormal with full reorthogonalization")
{
    const auto dp = make_example1(100);
    const auto cfg = direct_cfg(dp.pair);
    const auto st = run_steps(dp.pair, random_start_vector(100, 1), cfg, 20);
    DenseMatrix gram_v(20, 20);
    for (Index i = 0; i < 20; ++i) {
        for (Index j = 0; j < 20; ++j) {
            gram_v(i, j) = m_inner(dp.pair, st.bases.V[i], st.bases.V[j]);
        }
    }
    CHECK(max_abs_diff(gram_v, DenseMatrix::identity(20)) <= 1e-10);
}

TEST_CASE("assemble_Bk")
{
    BidiagonalFactor f;
    f.alphas = {1.0, 2.0, 3.0};
    f.betas = {9.0, 4.0, 5.0};
    f.k = 2;
    const auto b = assemble_Bk(f);
    CHECK(b.rows() == 3);
    CHECK(b.cols() == 2);
    CHECK(b(0, 0) == 1.0);
    CHECK(b(1, 0) == 4.0);
    CHECK(b(1, 1) == 2.0);
    CHECK(b(2, 1) == 5.0);
    CHECK(b(0, 1) == 0.0);
    CHECK(b(2, 0) == 0.0);

    f.k = 0;
    CHECK_THROWS(assemble_Bk(f));
}

TEST_CASE("verify_recurrences on a terminated trivial run")
{
    const MatrixPair pair(SparseMatrix::identity(3), SparseMatrix(1, 3));
    const auto cfg = direct_cfg(pair);
    const auto st = run_steps(pair, Vector{1.0, 0.0, 0.0}, cfg, 3);
    const auto d = verify_recurrences(st, pair, cfg);
    CHECK(d.av_residual <= 1e-14);
    CHECK(d.adjoint_residual <= 1e-14);
    CHECK(d.u_orthogonality <= 1e-14);
    CHECK(d.v_orthogonality <= 1e-14);
}

TEST_CASE("verify_recurrences with and without reorthogonalization")
{
    const auto dp = make_example1(200);
    const double nu = spectral_norm_estimate(dp.pair);
    const auto b = random_start_vector(200, 7);

    const auto full = direct_cfg(dp.pair, Reorth::full);
    const auto st_full = run_steps(dp.pair, b, full, 30);
    const auto df = verify_recurrences(st_full, dp.pair, full);
    CHECK(df.av_residual <= 1e-10 * nu);
    CHECK(df.adjoint_residual <= 1e-10 * nu);
    CHECK(df.u_orthogonality <= 1e-10);
    CHECK(df.v_orthogonality <= 1e-10);

    // Without reorthogonalization the bases lose orthogonality once Ritz
    // values converge, while the three-term recurrences still hold.
    const auto none = direct_cfg(dp.pair, Reorth::none);
    const auto st_none = run_steps(dp.pair, b, none, 80);
    const auto dn = verify_recurrences(st_none, dp.pair, none);
    CHECK(dn.av_residual <= 1e-10 * nu);
    CHECK(dn.adjoint_residual <= 1e-10 * nu);
    CHECK(dn.v_orthogonality > 1e-4);
}

TEST_CASE("v vectors lie in R(M)")
{
    const auto a = random_dense(9, 12, 3);
    const auto l = random_dense(2, 12, 4);
    const MatrixPair pair(SparseMatrix::from_dense(a), SparseMatrix::from_dense(l));
    const auto cfg = direct_cfg(pair);
    const auto st = run_steps(pair, random_start_vector(9, 1), cfg, 20);
    const auto e = sym_eig(densify_M(pair));
    for (const auto& v : st.bases.V) {
        for (Index t = 11; t < 12; ++t) {
            CHECK(std::abs(dot(e.eigenvectors.col(t), v)) <= 1e-10 * std::max(1.0, norm2(v)));
        }
    }
    // At most min(m, r) = 9 steps before termination.
    REQUIRE(st.terminate_step.has_value());
    CHECK(*st.terminate_step <= 9);
}

TEST_CASE("the L side runs the same process on L")
{
    const auto pair = small_pair();
    const auto sw = pair.swapped();
    const auto b = Vector{1.0, 2.0};
    const auto st = run_steps(sw, b, direct_cfg(sw), 5);
    REQUIRE(st.terminate_step.has_value());
    CHECK(*st.terminate_step <= 2);
    CHECK(st.factor.betas[0] == doctest::Approx(std::sqrt(5.0)));
}

TEST_CASE("breakdown threshold scales with the pair norm")
{
    const auto pair = small_pair();
    GgkbConfig cfg = direct_cfg(pair);
    cfg.scale = 10.0;
    auto st = ggkb_init(pair, Vector(4, 1.0), cfg);
    CHECK(st.breakdown_threshold == doctest::Approx(1e-11));
    cfg.scale = 0.0;
    st = ggkb_init(pair, Vector(4, 1.0), cfg);
    CHECK(st.breakdown_threshold == doctest::Approx(1e-12 * 3.255314341894153).epsilon(1e-6));
}
