#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "hyperflow/curve.hpp"
#include "hyperflow/errors.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/periods.hpp"

namespace hyperflow {

// Cubic 4 lambda^3 - g2 lambda - g3 with roots e1 < e2 < e3 (sum zero),
// real half-period w1 and the imaginary one w2.
struct WeierstrassData {
    double e1 = 0, e2 = 0, e3 = 0;
    double g2 = 0, g3 = 0;
    cplx w1, w2;
};

inline WeierstrassData weierstrass_invariants(double e2, double e3) {
    WeierstrassData wd;
    wd.e2 = e2;
    wd.e3 = e3;
    wd.e1 = -e2 - e3;
    wd.g2 = 4.0 * (e2 * e2 + e3 * e3 + e2 * e3);
    wd.g3 = 4.0 * wd.e1 * e2 * e3;
    return wd;
}

// Shift lambda -> lambda - e1 sends {e1, e2, e3} to {0, u, x}.
inline BranchConfig weierstrass_to_config(double e2, double e3) {
    double e1 = -e2 - e3;
    if (!(e1 < e2 && e2 < e3)) throw degenerate_config("need distinct e1 < e2 < e3");
    return make_real_config({e2 + 2 * e3}, {2 * e2 + e3});
}

struct EPair {
    double e2, e3;
};

inline EPair config_to_weierstrass(double x, double u) { return {(2 * u - x) / 3.0, (2 * x - u) / 3.0}; }

// Half-periods of the shifted curve, read off from the band marking where
// the a-cycle surrounds [0, u]: w^2 = 4 lambda (lambda - u)(lambda - x) so
// d lambda / w = phi / 2.
inline WeierstrassData weierstrass_data(double e2, double e3, const QuadOptions& quad = {}) {
    WeierstrassData wd = weierstrass_invariants(e2, e3);
    BranchConfig c = weierstrass_to_config(e2, e3);
    PeriodData pd = normalized_basis(c, band_basis(c), quad);
    wd.w1 = 0.25 * pd.a_raw(0, 0);
    wd.w2 = 0.25 * pd.b_raw(0, 0);
    if (wd.w1.real() < 0) wd.w1 = -wd.w1;
    if (wd.w2.imag() < 0) wd.w2 = -wd.w2;
    return wd;
}

struct WpValue {
    cplx value;
    cplx derivative;
    double ode_residual = 0.0;   // |p'^2 - (4 p^3 - g2 p - g3)|
    double tail = 0.0;           // size of the first omitted series term
    int terms = 0;
};

// Weierstrass p from its q-expansion with q = exp(i pi w2 / w1),
// after reducing z into the fundamental strip |Im(z / 2w2)| <= 1/2.
inline WpValue wp_function(const WeierstrassData& wd, cplx z, double eps = 1e-17) {
    const cplx w1 = wd.w1, w2 = wd.w2;
    const cplx tau = w2 / w1;
    if (!(tau.imag() > 0)) throw input_error("half-periods must have Im(w2/w1) > 0");
    // z = a 2w1 + b 2w2 with real a, b
    double b = (z / (2.0 * w1)).imag() / tau.imag();
    z -= std::round(b) * 2.0 * w2;
    const cplx qq = std::exp(cplx(0, 2 * M_PI) * tau);   // q^2
    const cplx v = M_PI * z / (2.0 * w1);
    const cplx s = std::sin(v);
    if (std::abs(s) < 1e-12) throw lattice_point("z lies on the period lattice");
    const cplx k = M_PI / (2.0 * w1);
    cplx e2sum = 0.0, fsum = 0.0, dsum = 0.0, qn = 1.0;
    WpValue r;
    for (int n = 1; n < 10000; ++n) {
        qn *= qq;
        cplx c = qn / (1.0 - qn);
        cplx tf = double(n) * c * std::cos(2.0 * double(n) * v);
        cplx td = double(n) * double(n) * c * std::sin(2.0 * double(n) * v);
        e2sum += double(n) * c;
        fsum += tf;
        dsum += td;
        r.terms = n;
        r.tail = std::max(std::abs(tf), std::abs(td));
        if (r.tail < eps * std::max(1.0, std::abs(fsum)) && std::abs(double(n) * c) < eps) break;
    }
    const cplx E2 = 1.0 - 24.0 * e2sum;
    const cplx cot = std::cos(v) / s;
    r.value = k * k * (-E2 / 3.0 + 1.0 / (s * s) - 8.0 * fsum);
    r.derivative = k * k * k * (-2.0 * cot / (s * s) + 16.0 * dsum);
    cplx p = r.value;
    r.ode_residual = std::abs(r.derivative * r.derivative - (4.0 * p * p * p - wd.g2 * p - wd.g3));
    return r;
}

struct LameTwoGap {
    BranchConfig cfg;
    double e2_recovered = 0, e3_recovered = 0;
    bool ordered = false;     // 0 < u_1 < x_1 < u_2 < x_2 after relabeling
};

inline LameTwoGap lame_two_gap_config(double e2, double e3) {
    double e1 = -e2 - e3;
    if (!(e1 < e2 && e2 < e3)) throw degenerate_config("need distinct e1 < e2 < e3");
    double x1 = 3 * e2 + 6 * e3, x2 = 6 * e2 + 3 * e3;
    double r = std::sqrt(12.0 * (e2 * e2 + e3 * e3 + e2 * e3));
    double u1 = r + 3 * (e2 + e3), u2 = -r + 3 * (e2 + e3);
    LameTwoGap L;
    L.cfg = make_real_config({x1, x2}, {u1, u2});
    require_valid(L.cfg);
    L.e3_recovered = (2 * x1 - x2) / 9.0;
    L.e2_recovered = (2 * x2 - x1) / 9.0;
    std::vector<double> p{0.0, x1, x2, u1, u2};
    std::sort(p.begin(), p.end());
    L.ordered = p.front() == 0.0;
    return L;
}

struct NeumannData {
    BranchConfig cfg;
    std::vector<double> A;   // A_j = -z_{2j-1}, A_{n+1} = 0
};

// z = (z_1, ..., z_{2n+1}) strictly decreasing with z_{2n+1} = 0;
// x_j = z_{2j-1}, u_j = z_{2j}.
inline NeumannData neumann_config(const std::vector<double>& z) {
    if (z.size() < 3 || z.size() % 2 == 0) throw input_error("need 2n+1 spectral points");
    if (z.back() != 0.0) throw ordering_violation("the last spectral point must be 0");
    for (size_t i = 0; i + 1 < z.size(); ++i)
        if (!(z[i] > z[i + 1])) throw ordering_violation("spectral points must be strictly decreasing");
    const size_t n = (z.size() - 1) / 2;
    std::vector<double> x, u;
    NeumannData d;
    for (size_t j = 0; j < n; ++j) {
        x.push_back(z[2 * j]);
        u.push_back(z[2 * j + 1]);
        d.A.push_back(-z[2 * j]);
    }
    d.A.push_back(0.0);
    d.cfg = make_real_config(x, u);
    return d;
}

struct CnoidalSample {
    double x = 0, u = 0;
    cplx two_w1;
    double rel_drift = 0;          // |2w1 - 2w1(start)| / |2w1(start)|
    double periodicity_defect = 0;  // max_X |v(X + 2w1) - v(X)| / max |v|
    double max_imag = 0;            // max |Im v| on the grid
};

struct CnoidalReport {
    std::vector<CnoidalSample> samples;
    double max_rel_drift = 0;
    double max_periodicity_defect = 0;
    double c = 0.0;
    int grid = 512;
};

// v(X) = 2 p(X - X0) - c/6 on 512 points over two periods, X0 = w2 so the
// samples stay on the real oval away from the poles.
inline CnoidalSample cnoidal_sample(double x, double u, int grid = 512, double c = 0.0, const QuadOptions& quad = {}) {
    auto e = config_to_weierstrass(x, u);
    WeierstrassData wd = weierstrass_data(e.e2, e.e3, quad);
    CnoidalSample s;
    s.x = x;
    s.u = u;
    s.two_w1 = 2.0 * wd.w1;
    double L = 2.0 * std::abs(s.two_w1);
    double vmax = 0.0, defect = 0.0;
    for (int i = 0; i < grid; ++i) {
        cplx X = L * i / grid;
        cplx v0 = 2.0 * wp_function(wd, X - wd.w2).value - c / 6.0;
        cplx v1 = 2.0 * wp_function(wd, X + s.two_w1 - wd.w2).value - c / 6.0;
        vmax = std::max(vmax, std::abs(v0));
        defect = std::max(defect, std::abs(v1 - v0));
        s.max_imag = std::max(s.max_imag, std::abs(v0.imag()));
    }
    s.periodicity_defect = defect / vmax;
    return s;
}

inline CnoidalReport cnoidal_period_report(double e2, double e3, double x_end, const FlowOptions& opt = {}) {
    BranchConfig c = weierstrass_to_config(e2, e3);
    DeformationState st = make_state(c, "band", CVec::Zero(1), FlowMode::PeriodImplicit, opt.quad);
    CVec xe(1);
    xe[0] = x_end;
    Trajectory tr = integrate_flow(st, straight_path(c, xe), opt);
    CnoidalReport rep;
    for (auto& smp : tr.samples) {
        CnoidalSample s = cnoidal_sample(smp.x[0].real(), smp.u[0].real(), rep.grid, rep.c, opt.quad);
        if (!rep.samples.empty()) s.rel_drift = std::abs(s.two_w1 - rep.samples[0].two_w1) / std::abs(rep.samples[0].two_w1);
        rep.max_rel_drift = std::max(rep.max_rel_drift, s.rel_drift);
        rep.max_periodicity_defect = std::max(rep.max_periodicity_defect, s.periodicity_defect);
        rep.samples.push_back(s);
    }
    return rep;
}

struct WavevectorReport {
    std::vector<CVec> U;
    double max_drift = 0;
    double max_imag = 0;
};

inline WavevectorReport kdv_wavevector_report(const std::vector<Sample>& samples, const CanonicalBasis& basis,
                                              const QuadOptions& quad = {}) {
    WavevectorReport r;
    for (auto& s : samples) {
        PeriodData pd = normalized_basis(with_xu(s.x, s.u), basis, quad);
        CVec U = wavevector_U(pd);
        if (!r.U.empty()) r.max_drift = std::max(r.max_drift, (U - r.U.front()).cwiseAbs().maxCoeff());
        r.max_imag = std::max(r.max_imag, U.imag().cwiseAbs().maxCoeff());
        r.U.push_back(U);
    }
    return r;
}

inline WavevectorReport kdv_wavevector_report(const Trajectory& tr, const CanonicalBasis& basis, const QuadOptions& quad = {}) {
    return kdv_wavevector_report(tr.samples, basis, quad);
}

}  // namespace hyperflow
