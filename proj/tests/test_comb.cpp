#include <gtest/gtest.h>

#include "hyperflow/hyperflow.hpp"

using namespace hyperflow;

namespace {

const QuadOptions kQuad{1e-13, 32, 1 << 18};

struct Setup {
    PeriodData pd;
    OmegaDifferential om;
};

Setup setup(const BranchConfig& c) {
    PeriodData pd = normalized_basis(c, gap_basis(c), kQuad);
    return {pd, build_omega(pd)};
}

}  // namespace

TEST(PolynomialRoots, CubicWithKnownRoots) {
    auto p = poly_from_roots({1.0, cplx(2, 1), cplx(-3, 0.5)});
    CVec c(3);
    for (int i = 0; i < 3; ++i) c[i] = p[i];
    auto z = polynomial_roots(c);
    ASSERT_EQ(z.roots.size(), 3u);
    EXPECT_LT(std::abs(z.roots[0] - cplx(-3, 0.5)), 1e-13);
    EXPECT_LT(std::abs(z.roots[1] - 1.0), 1e-13);
    EXPECT_LT(std::abs(z.roots[2] - cplx(2, 1)), 1e-13);
    EXPECT_LT(z.max_residual, 1e-12);
}

TEST(OmegaZeros, OnePerGapWithSmallResidual) {
    for (auto c : {make_real_config({2}, {1}), make_real_config({3, 5}, {1, 4}), make_real_config({2, 4.5, 7}, {1, 3, 6})}) {
        auto s = setup(c);
        OmegaZeros z = omega_zeros(s.pd, s.om);
        ASSERT_EQ(int(z.roots.size()), c.genus);
        EXPECT_LT(z.max_residual, 1e-12);
        for (int j = 0; j < c.genus; ++j) {
            EXPECT_GT(z.roots[j].real(), c.u[j].real());
            EXPECT_LT(z.roots[j].real(), c.x[j].real());
        }
    }
}

TEST(OmegaZeros, GenusOneRootIsSignChange) {
    auto s = setup(make_real_config({2}, {1}));
    double xi = omega_zeros(s.pd, s.om).roots[0].real();
    EXPECT_NEAR(xi, -s.om.c[0].real(), 1e-15);
}

TEST(OmegaZeros, PerturbationMovesRootsProportionally) {
    auto s = setup(make_real_config({3, 5}, {1, 4}));
    auto z0 = polynomial_roots(s.om.c);
    CVec c = s.om.c;
    c[0] += 1e-10;
    auto z1 = polynomial_roots(c);
    CVec p(3);
    p << s.om.c[0], s.om.c[1], 1.0;
    for (int j = 0; j < 2; ++j) {
        cplx dp = poly_derivative_eval(p, z0.roots[j]);
        double predicted = 1e-10 / std::abs(dp);
        EXPECT_NEAR(std::abs(z1.roots[j] - z0.roots[j]), predicted, 0.01 * predicted);
    }
}

TEST(OmegaZeros, RequiresZeroAlpha) {
    BranchConfig c = make_real_config({2}, {1});
    PeriodData pd = normalized_basis(c, gap_basis(c), kQuad);
    CVec a(1);
    a[0] = 0.5;
    EXPECT_THROW(omega_zeros(pd, build_omega(pd, a)), Error);
}

TEST(CombMap, ThetaVanishesAtOriginAndReMonotoneOnBands) {
    BranchConfig c = make_real_config({3, 5}, {1, 4});
    auto s = setup(c);
    std::vector<double> xi;
    for (auto r : omega_zeros(s.pd, s.om).roots) xi.push_back(r.real());
    CombMap theta(c, xi, kQuad);
    EXPECT_EQ(theta(0.0), cplx(0.0));
    // bands: [0, u1], [x1, u2], [x2, inf)
    for (auto [a, b] : {std::pair{0.0, 1.0}, {3.0, 4.0}, {5.0, 9.0}}) {
        double prev = theta(a).real();
        for (int k = 1; k <= 20; ++k) {
            double t = a + (b - a) * k / 20.0;
            cplx v = theta(t);
            EXPECT_GT(v.real(), prev - 1e-12) << t;
            prev = v.real();
        }
    }
    // inside a gap the real part is frozen
    EXPECT_NEAR(theta(1.5).real(), theta(2.5).real(), 1e-10);
    EXPECT_THROW(theta(-1.0), Error);
}

TEST(CombMap, BaseMarksProportionalToBPeriods) {
    std::vector<double> ratios;
    for (auto c : {make_real_config({2}, {1}), make_real_config({2.7}, {0.6}), make_real_config({3, 5}, {1, 4})}) {
        auto s = setup(c);
        CombRegion R = comb_map(s.pd, s.om, kQuad);
        for (double r : R.ratio) ratios.push_back(r);
    }
    for (double r : ratios) EXPECT_NEAR(r, ratios.front(), 1e-9);
    // measured constant
    EXPECT_NEAR(ratios.front(), -0.5, 1e-9);
}

TEST(CombMap, RejectsUnorderedConfig) {
    BranchConfig c = make_real_config({3, 1}, {2, 4});
    auto s = setup(c);
    EXPECT_THROW(comb_map(s.pd, s.om, kQuad), Error);
}

TEST(CombInvariance, TrivialPathHasNoDrift) {
    BranchConfig c = make_real_config({2}, {1});
    Trajectory tr = integrate_flow(make_state(c), {as_cvec(c.x), as_cvec(c.x)});
    std::vector<Sample> two{tr.samples[0], tr.samples[0]};
    auto r = comb_invariance_check(two, gap_basis(c), 1e-6, kQuad);
    EXPECT_LT(r.max_q_drift, 1e-10);
    EXPECT_LT(r.max_h_variation, 1e-10);
}

TEST(CombInvariance, FrozenUControlMovesBaseMarks) {
    BranchConfig c = make_real_config({2}, {1});
    std::vector<Sample> frozen(2);
    frozen[0].x = as_cvec(c.x);
    frozen[0].u = as_cvec(c.u);
    frozen[1] = frozen[0];
    frozen[1].x[0] = 2.2;
    auto r = comb_invariance_check(frozen, gap_basis(c), 1e-6, kQuad);
    EXPECT_GT(r.max_q_drift, 1e-3);
    EXPECT_FALSE(r.q_invariant);
}
