// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if
// any criterion fails.

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "hyperflow/hyperflow.hpp"
#include "oracles.hpp"

using namespace hyperflow;

namespace {

const QuadOptions kQuad{1e-13, 32, 1 << 18};

struct Outcome {
    bool ok = true;
    std::string detail;
    double time_limit = 0.0;   // seconds, 0 means none
};

int failures = 0;

void criterion(int id, const std::string& title, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.ok = false;
        o.detail = std::string("exception: ") + e.what();
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool timely = o.time_limit <= 0 || dt < o.time_limit;
    bool pass = o.ok && timely;
    if (!pass) ++failures;
    char tbuf[64];
    if (o.time_limit > 0)
        std::snprintf(tbuf, sizeof tbuf, "%.2f s (< %g s)", dt, o.time_limit);
    else
        std::snprintf(tbuf, sizeof tbuf, "%.2f s", dt);
    std::printf("%s  C%-2d %s: %s; %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str(), tbuf);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char b[128];
    std::snprintf(b, sizeof b, f, a);
    return b;
}

std::string fmt(const char* f, double a, double b) {
    char s[160];
    std::snprintf(s, sizeof s, f, a, b);
    return s;
}

CVec vec(std::initializer_list<cplx> v) {
    CVec r(v.size());
    int i = 0;
    for (auto z : v) r[i++] = z;
    return r;
}

BranchConfig g1() { return make_real_config({2}, {1}); }
BranchConfig g2() { return make_real_config({3, 5}, {1, 4}); }

// genus-2 two-leg axis path shared by C6, C10, C12
std::vector<CVec> g2_path() { return {vec({3, 5}), vec({3.25, 5}), vec({3.25, 5.3})}; }

Trajectory g2_implicit, g2_rational;

}  // namespace

int main() {
    std::printf("hyperflow %s acceptance\n", version);

    criterion(1, "elliptic-integral oracle (g=1, x=2, u=1)", [] {
        PeriodData pd = normalized_basis(g1(), gap_basis(g1()), kQuad);
        double k = oracle::ellipk(std::sqrt(1.0 / 2.0));
        double expect = 4.0 / std::sqrt(2.0) * k;
        double rel = std::abs(std::abs(pd.a_raw(0, 0)) - expect) / expect;
        return Outcome{rel < 1e-9, fmt("|a-period| %.15g vs AGM %.15g", std::abs(pd.a_raw(0, 0)), expect) +
                                       fmt(", rel err %.2e (< 1e-9)", rel),
                       1.0};
    });

    criterion(2, "Riemann matrix symmetric, real curves purely imaginary", [] {
        double sym = 0, re = 0, mineig = 1e300;
        for (auto c : {g1(), g2()})
            for (auto kind : {"gap", "band"}) {
                PeriodData pd = normalized_basis(c, make_basis(c, kind), kQuad);
                sym = std::max(sym, (pd.B - pd.B.transpose()).cwiseAbs().maxCoeff());
                re = std::max(re, pd.B.real().cwiseAbs().maxCoeff());
                Eigen::MatrixXd S = pd.B.imag();
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (S + S.transpose()));
                mineig = std::min(mineig, es.eigenvalues().minCoeff());
            }
        bool ok = sym < 1e-9 && re < 1e-7 && mineig > 0;
        return Outcome{ok, fmt("|B-B^T| %.2e (< 1e-9), |Re B| %.2e (< 1e-7)", sym, re) +
                               fmt(", min eig Im B %.4g (> 0)", mineig),
                       5.0};
    });

    criterion(3, "Rauch variation of B by central differences (g=2, h=1e-5)", [] {
        BranchConfig c = g2();
        CanonicalBasis basis = gap_basis(c);
        PeriodData pd = normalized_basis(c, basis, kQuad);
        const double h = 1e-5;
        double worst = 0.0;
        for (int k = 0; k < c.finite_count(); ++k) {
            // lambda = 0 is pinned; moving it equals moving every other point the other way
            auto B_at = [&](double s) {
                BranchConfig d = c;
                if (k == 0) {
                    for (auto& z : d.x) z -= s;
                    for (auto& z : d.u) z -= s;
                } else if (c.is_x(k)) {
                    d.x[k - 1] += s;
                } else {
                    d.u[k - 1 - c.genus] += s;
                }
                return normalized_basis(d, basis, kQuad).B;
            };
            CMat dB = oracle::central(B_at, h);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    cplx expect = cplx(0, M_PI) * pd.omega_at(i, k) * pd.omega_at(j, k);
                    worst = std::max(worst, std::abs(dB(i, j) - expect) / std::abs(expect));
                }
        }
        return Outcome{worst < 1e-4, fmt("max rel err %.2e over all i, j and 5 branch points (< 1e-4)", worst), 30.0};
    });

    criterion(4, "residue identities and W lemmas", [] {
        PeriodData p1 = normalized_basis(g1(), gap_basis(g1()), kQuad);
        PeriodData p2 = normalized_basis(g2(), gap_basis(g2()), kQuad);
        auto r1 = verify_identities(p1, build_omega(p1), kQuad);
        auto r2 = verify_identities(p2, build_omega(p2), kQuad);
        double om = std::max(r1.mismatch("omega_squares"), r2.mismatch("omega_squares"));
        double Om = std::max(r1.mismatch("omega_Omega"), r2.mismatch("omega_Omega"));
        double Ou = std::max(r1.mismatch("Omega_at_u"), r2.mismatch("Omega_at_u"));
        double t1 = r2.mismatch("T1"), t3 = r2.mismatch("T3");
        bool ok = om < 1e-12 && Om < 1e-9 && Ou < 1e-9 && t1 < 1e-8 && t3 < 1e-8;
        return Outcome{ok, fmt("sum omega^2 %.1e (< 1e-12), sum omega*Omega %.1e", om, Om) +
                               fmt(" and Omega(P_u) relation %.1e (< 1e-9), T1 %.1e", Ou, t1) +
                               fmt(" T3 %.1e at g=2 (< 1e-8)", t3),
                       30.0};
    });

    criterion(5, "isoperiodicity drift, g=1, x 2.0 -> 2.2", [] {
        BranchConfig c = g1();
        auto path = straight_path(c, vec({2.2}));
        Trajectory a = integrate_flow(make_state(c), path);
        Trajectory b = integrate_flow(make_state(c, "gap", FlowMode::Rational), path);
        bool ok = a.complete && b.complete && a.max_drift < 1e-7 && b.max_drift < 1e-5;
        return Outcome{ok, fmt("implicit+correct %.2e (< 1e-7), rational %.2e (< 1e-5)", a.max_drift, b.max_drift), 30.0};
    });

    criterion(6, "implicit vs rational mode", [] {
        BranchConfig c = g1();
        auto path = straight_path(c, vec({2.2}));
        Trajectory a = integrate_flow(make_state(c), path);
        Trajectory b = integrate_flow(make_state(c, "gap", FlowMode::Rational), path);
        double d1 = 0;
        for (size_t i = 0; i < a.samples.size(); ++i) d1 = std::max(d1, std::abs(a.samples[i].u[0] - b.samples[i].u[0]));
        g2_implicit = integrate_flow(make_state(g2()), g2_path());
        g2_rational = integrate_flow(make_state(g2(), "gap", FlowMode::Rational), g2_path());
        double d2 = 0;
        for (size_t i = 0; i < g2_implicit.samples.size(); ++i)
            d2 = std::max(d2, (g2_implicit.samples[i].u - g2_rational.samples[i].u).cwiseAbs().maxCoeff());
        bool ok = a.samples.size() == b.samples.size() && g2_implicit.samples.size() == g2_rational.samples.size() &&
                  d1 < 1e-6 && d2 < 1e-5;
        return Outcome{ok, fmt("g=1 max |du| %.2e (< 1e-6), g=2 two-leg %.2e (< 1e-5)", d1, d2), 120.0};
    });

    criterion(7, "second differences of the implicit flow vs second-order equations", [] {
        // g = 1: samples every 1e-3 along x in [2, 2.2]
        BranchConfig c = g1();
        FlowOptions opt;
        opt.samples_per_leg = 200;
        Trajectory tr = integrate_flow(make_state(c), straight_path(c, vec({2.2})), opt);
        const double h = 0.2 / 200;
        double w1 = 0;
        for (size_t i = 1; i + 1 < tr.samples.size(); i += 10) {
            auto& s = tr.samples[i];
            cplx fd = (tr.samples[i + 1].u[0] - 2.0 * s.u[0] + tr.samples[i - 1].u[0]) / (h * h);
            cplx du = (tr.samples[i + 1].u[0] - tr.samples[i - 1].u[0]) / (2 * h);
            cplx rhs = rhs_genus1(s.x[0], s.u[0], du);
            w1 = std::max(w1, std::abs(fd - rhs) / std::abs(rhs));
        }
        // g = 2: stencil around x0 built from short implicit flows
        BranchConfig c2 = g2();
        DeformationState st = make_state(c2);
        const CVec x0 = as_cvec(c2.x), u0 = as_cvec(c2.u);
        const double h2 = 2e-3;
        FlowOptions o2;
        o2.samples_per_leg = 1;
        auto u_at = [&](double d1, double d2) {
            CVec xe = x0;
            xe[0] += d1;
            xe[1] += d2;
            if (d1 == 0 && d2 == 0) return u0;
            return CVec(integrate_flow(st, {x0, xe}, o2).back().u);
        };
        CVec upp = u_at(h2, h2), upm = u_at(h2, -h2), ump = u_at(-h2, h2), umm = u_at(-h2, -h2);
        CVec u10 = u_at(h2, 0), um0 = u_at(-h2, 0), u01 = u_at(0, h2), u0m = u_at(0, -h2);
        Tensor3 H = rhs_genus2(x0, u0, st.du);
        double w2m = 0, w2d = 0;
        for (int m = 0; m < 2; ++m) {
            cplx mixed = (upp[m] - upm[m] - ump[m] + umm[m]) / (4 * h2 * h2);
            cplx d11 = (u10[m] - 2.0 * u0[m] + um0[m]) / (h2 * h2);
            cplx d22 = (u01[m] - 2.0 * u0[m] + u0m[m]) / (h2 * h2);
            w2m = std::max(w2m, std::abs(mixed - H[m](0, 1)) / std::abs(H[m](0, 1)));
            w2d = std::max(w2d, std::abs(d11 - H[m](0, 0)) / std::abs(H[m](0, 0)));
            w2d = std::max(w2d, std::abs(d22 - H[m](1, 1)) / std::abs(H[m](1, 1)));
        }
        bool ok = w1 < 1e-4 && w2m < 1e-3 && w2d < 1e-3;
        return Outcome{ok, fmt("g=1 rel %.2e (< 1e-4), g=2 mixed rel %.2e", w1, w2m) +
                               fmt(" diagonal rel %.2e (< 1e-3)", w2d),
                       120.0};
    });

    criterion(8, "implicit-function Jacobian and Newton correction", [] {
        BranchConfig c = make_config({cplx(3, 0), cplx(5, 0)}, {cplx(1, 0), cplx(4, 0)});
        CanonicalBasis basis = gap_basis(c);
        PointData P = evaluate_point(c, basis, CVec::Zero(2), kQuad);
        CMat J = jacobian(P.pd, P.om);
        double worst = 0;
        for (int j = 0; j < 2; ++j) {
            auto beta_at = [&](double s) {
                CVec u = as_cvec(c.u);
                u[j] += s;
                return oracle::beta_of(as_cvec(c.x), u, P.pd.basis, CVec::Zero(2), kQuad);
            };
            CVec fd = oracle::central(beta_at, 1e-6);
            for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(fd[k] - J(j, k)) / std::abs(J(j, k)));
        }
        // perturb u so that the starting residual is 1e-6
        CVec dir = vec({1.0, -0.7});
        CVec r0 = (J.transpose() * dir);
        CVec u = as_cvec(c.u) + dir * (1e-6 / r0.cwiseAbs().maxCoeff());
        auto nr = newton_correct(as_cvec(c.x), u, P.pd.basis, CVec::Zero(2), P.om.beta, 5, 1e-14, kQuad);
        double start = nr.residuals.front(), end = nr.residuals.back();
        bool ok = worst < 1e-4 && end < 1e-10 && nr.iterations <= 3 && start > 5e-7;
        return Outcome{ok, fmt("Jacobian rel err %.2e (< 1e-4), Newton %.1e", worst, start) +
                               fmt(" -> %.1e in %g iterations (< 1e-10, <= 3)", end, nr.iterations),
                       0.0};
    });

    criterion(9, "2w1 preservation and cnoidal periodicity (e2=0, e3=1, 5% in x)", [] {
        FlowOptions opt;
        opt.quad = kQuad;
        CnoidalReport r = cnoidal_period_report(0.0, 1.0, 2.1, opt);
        bool ok = r.samples.size() > 2 && r.max_rel_drift < 1e-7 && r.max_periodicity_defect < 1e-6;
        return Outcome{ok, fmt("2w1 rel drift %.2e (< 1e-7), wave defect %.2e (< 1e-6 max|v|)", r.max_rel_drift,
                               r.max_periodicity_defect),
                       60.0};
    });

    criterion(10, "wavevector U along the genus-2 trajectory", [] {
        if (g2_implicit.samples.empty()) g2_implicit = integrate_flow(make_state(g2()), g2_path());
        CanonicalBasis basis = gap_basis(g2());
        auto rep = kdv_wavevector_report(g2_implicit, basis, kQuad);
        std::vector<Sample> frozen = g2_implicit.samples;
        for (auto& s : frozen) s.u = as_cvec(g2().u);
        auto ctl = kdv_wavevector_report(frozen, basis, kQuad);
        bool ok = g2_implicit.complete && rep.max_drift < 1e-7 && ctl.max_drift > 1e-3;
        return Outcome{ok, fmt("drift %.2e (< 1e-7), frozen-u control %.2e (> 1e-3)", rep.max_drift, ctl.max_drift), 0.0};
    });

    criterion(11, "comb base marks invariant along the genus-1 reference flow", [] {
        BranchConfig c = g1();
        Trajectory tr = integrate_flow(make_state(c), straight_path(c, vec({2.2})));
        auto r = comb_invariance_check(tr.samples, gap_basis(c), 1e-6, kQuad);
        bool ok = r.max_q_drift < 1e-6 && r.max_h_variation > 1e-4 && r.max_ratio_spread < 1e-6;
        return Outcome{ok, fmt("q drift %.2e (< 1e-6), h variation %.3g (> 1e-4)", r.max_q_drift, r.max_h_variation) +
                               fmt(", q/beta = %.12g spread %.1e (< 1e-6)", r.regions.front().ratio[0],
                                   r.max_ratio_spread),
                       60.0};
    });

    criterion(12, "reality of u for real genus-2 data on real paths", [] {
        if (g2_implicit.samples.empty()) g2_implicit = integrate_flow(make_state(g2()), g2_path());
        if (g2_rational.samples.empty())
            g2_rational = integrate_flow(make_state(g2(), "gap", FlowMode::Rational), g2_path());
        // a longer path moving both points down
        BranchConfig c = make_real_config({2, 5}, {1, 3.5});
        Trajectory t3 = integrate_flow(make_state(c), {vec({2, 5}), vec({2.3, 5}), vec({2.3, 4.6})});
        double im = 0;
        for (auto* t : {&g2_implicit, &g2_rational, &t3})
            for (auto& s : t->samples) im = std::max(im, s.u.imag().cwiseAbs().maxCoeff());
        return Outcome{im < 1e-9, fmt("max |Im u| %.2e over three trajectories (< 1e-9)", im), 0.0};
    });

    std::printf("%s: %d of 12 criteria failed\n", failures ? "FAILED" : "ALL PASSED", failures);
    return failures ? 1 : 0;
}
