#include <gtest/gtest.h>

#include <cmath>

#include "hyperflow/hyperflow.hpp"

using namespace hyperflow;

namespace {

std::vector<cplx> circle(cplx center, double r, cplx start_dir = 1.0, int n = 64) {
    std::vector<cplx> p;
    double th0 = std::arg(start_dir);
    for (int k = 1; k <= n; ++k) p.push_back(center + std::polar(r, th0 + 2 * M_PI * k / n));
    return p;
}

}  // namespace

TEST(ValidateConfig, OrderedGenusOneIsClean) {
    EXPECT_TRUE(validate_config(make_real_config({2}, {1}), true).empty());
}

TEST(ValidateConfig, DuplicatePointReported) {
    auto v = validate_config(make_real_config({1}, {1}));
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("duplicate branch point 1"), std::string::npos) << v[0];
    EXPECT_THROW(require_valid(make_real_config({1}, {1})), Error);
}

TEST(ValidateConfig, PermutedInterleavingViolatesOrdering) {
    BranchConfig c = make_real_config({3, 1}, {2, 4});
    EXPECT_TRUE(validate_config(c).empty());
    auto v = validate_config(c, true);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_NE(v[0].find("ordering violated"), std::string::npos);
    try {
        require_valid(c, true);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), "OrderingViolation");
        EXPECT_EQ(exit_code(e.kind()), 3);
    }
}

TEST(ValidateConfig, ZeroAsBranchPointIsDuplicate) {
    auto v = validate_config(make_real_config({2}, {0}));
    EXPECT_FALSE(v.empty());
}

TEST(ValidateConfig, MismatchedLengthsRejected) {
    EXPECT_THROW(make_config({2.0, 3.0}, {1.0}), Error);
}

TEST(RealProjection, StripsRoundoffOnly) {
    BranchConfig c = make_config({cplx(2, 1e-17)}, {cplx(1, -1e-18)});
    BranchConfig r = real_projection(c);
    EXPECT_TRUE(r.real);
    EXPECT_EQ(r.x[0].imag(), 0.0);
    EXPECT_THROW(real_projection(make_config({cplx(2, 1e-3)}, {1.0})), Error);
}

TEST(SqrtDown, SquaresBackAndPositiveOnReals) {
    for (cplx z : {cplx(3, 0), cplx(-2, 0.5), cplx(-2, -0.5), cplx(0.1, -4), cplx(-1, 0)}) {
        EXPECT_NEAR(std::abs(sqrt_down(z) * sqrt_down(z) - z), 0.0, 1e-14);
    }
    EXPECT_DOUBLE_EQ(sqrt_down(4.0).real(), 2.0);
    EXPECT_NEAR(sqrt_down(4.0).imag(), 0.0, 1e-15);
    // the cut is on the downward ray, so the negative axis is continuous
    EXPECT_NEAR(std::abs(sqrt_down(cplx(-4, 1e-12)) - sqrt_down(cplx(-4, -1e-12))), 0.0, 1e-11);
}

TEST(MuAlongPath, ConstantPathRightOfBranchPoints) {
    BranchConfig c = make_real_config({2}, {1});
    auto s = start_branch(c, 4.0);
    cplx mu = mu_along_path(c, {4.0}, s);
    EXPECT_NEAR(mu.real(), std::sqrt(24.0), 1e-14);
    EXPECT_NEAR(mu.imag(), 0.0, 1e-14);
}

TEST(MuAlongPath, LoopAroundOnePointFlipsSign) {
    BranchConfig c = make_real_config({2}, {1});
    auto s = start_branch(c, 1.3);
    cplx mu = mu_along_path(c, circle(1.0, 0.3), s);
    EXPECT_NEAR(std::abs(mu + s.mu), 0.0, 1e-12 * std::abs(s.mu));
}

TEST(MuAlongPath, LoopAroundTwoPointsReturns) {
    BranchConfig c = make_real_config({2}, {1});
    auto s = start_branch(c, 2.4);
    cplx mu = mu_along_path(c, circle(1.5, 0.9), s);
    EXPECT_NEAR(std::abs(mu - s.mu), 0.0, 1e-12 * std::abs(s.mu));
    // and agrees with the reference branch at the same point
    EXPECT_NEAR(std::abs(mu - mu_reference(c, 2.4)), 0.0, 1e-12);
}

TEST(MuAlongPath, LoopAroundThreePointsFlipsSign) {
    BranchConfig c = make_real_config({2}, {1});
    auto s = start_branch(c, 3.0);
    cplx mu = mu_along_path(c, circle(1.0, 2.0), s);
    EXPECT_NEAR(std::abs(mu + s.mu), 0.0, 1e-12 * std::abs(s.mu));
}

TEST(MuAlongPath, RejectsPathThroughBranchPoint) {
    BranchConfig c = make_real_config({2}, {1});
    EXPECT_THROW(mu_along_path(c, {0.5, 1.5}, start_branch(c, 0.5)), Error);
}

TEST(MuReference, MatchesContinuationInUpperHalfPlane) {
    BranchConfig c = make_config({cplx(2, 0.3), cplx(4, -0.2)}, {cplx(1, 0.1), cplx(3, 0)});
    auto s = start_branch(c, cplx(6, 0.5));
    std::vector<cplx> path{cplx(6, 2), cplx(-1, 2), cplx(-1, 0.8)};
    EXPECT_NEAR(std::abs(mu_along_path(c, path, s) - mu_reference(c, path.back())), 0.0, 1e-12);
}

TEST(PhiAtRamification, ValueAtZeroGenusOne) {
    BranchConfig c = make_real_config({2}, {1});
    cplx p = phi_at_ramification(c, 0);
    EXPECT_NEAR(p.real(), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(p.imag(), 0.0, 1e-15);
}

TEST(PhiAtRamification, ScalesAsInversePowerOfGenus) {
    BranchConfig c = make_config({cplx(2, 0.3), cplx(4, -0.2)}, {cplx(1, 0.1), cplx(3, 0)});
    const double s = 2.5;
    const cplx cs(1.5, 0.7);
    std::vector<cplx> xs, us, xc, uc;
    for (auto z : c.x) xs.push_back(s * z), xc.push_back(cs * z);
    for (auto z : c.u) us.push_back(s * z), uc.push_back(cs * z);
    BranchConfig cs_real = make_config(xs, us), cs_cplx = make_config(xc, uc);
    for (int j = 0; j < c.finite_count(); ++j) {
        cplx p = phi_at_ramification(c, j);
        EXPECT_NEAR(std::abs(phi_at_ramification(cs_real, j) - p * std::pow(s, -2.0)), 0.0, 1e-14);
        // complex scaling is fixed only up to the branch of the square root
        cplx q = phi_at_ramification(cs_cplx, j);
        EXPECT_NEAR(std::abs(q * q - p * p * std::pow(cs, -4.0)), 0.0, 1e-14);
    }
}

TEST(VAt, KroneckerAtUPoints) {
    BranchConfig c = make_config({cplx(3, 0.2), cplx(5, 0), cplx(7, -0.1)}, {cplx(1, 0), cplx(4, 0.3), cplx(6, 0)});
    for (int m = 0; m < 3; ++m)
        for (int i = 0; i < 3; ++i) EXPECT_EQ(v_at(c, m, c.u_index(i)), m == i ? cplx(1.0) : cplx(0.0));
}

TEST(VAt, GenusTwoBruteForce) {
    BranchConfig c = make_real_config({3, 5}, {1, 4});
    // phi(P_x1) = 2 / sqrt(3 * (3-5) * (3-1) * (3-4)), phi(P_u1) = 2 / sqrt(1 * (1-3) * (1-5) * (1-4))
    cplx phx = 2.0 / std::sqrt(cplx(3.0 * -2.0 * 2.0 * -1.0));
    cplx phu = 2.0 / std::sqrt(cplx(1.0 * -2.0 * -4.0 * -3.0));
    cplx expect = phx * (3.0 - 4.0) / (phu * (1.0 - 4.0));
    EXPECT_NEAR(std::abs(v_at(c, 0, c.x_index(0)) - expect), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(expect - cplx(0, std::sqrt(2.0) / 3.0)), 0.0, 1e-15);
}

TEST(Poly, FromRootsAndEval) {
    auto p = poly_from_roots({1.0, cplx(2, 1)});
    EXPECT_NEAR(std::abs(poly_eval(p, cplx(2, 1))), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(poly_eval(p, 0.0) - cplx(2, 1)), 0.0, 1e-15);
}
