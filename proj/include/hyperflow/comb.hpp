#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hyperflow/curve.hpp"
#include "hyperflow/errors.hpp"
#include "hyperflow/flow.hpp"
#include "hyperflow/periods.hpp"
#include "hyperflow/quadrature.hpp"

namespace hyperflow {

struct OmegaZeros {
    std::vector<cplx> roots;
    double max_residual = 0.0;
};

// Roots of lambda^g + c_{g-1} lambda^{g-1} + ... + c_0: companion-matrix
// eigenvalues polished by Newton.
inline OmegaZeros polynomial_roots(const CVec& c) {
    const int g = int(c.size());
    CVec p(g + 1);
    p.head(g) = c;
    p[g] = 1.0;
    OmegaZeros z;
    if (g == 0) return z;
    CMat M = CMat::Zero(g, g);
    for (int i = 1; i < g; ++i) M(i, i - 1) = 1.0;
    for (int i = 0; i < g; ++i) M(i, g - 1) = -c[i];
    Eigen::ComplexEigenSolver<CMat> es(M, false);
    for (int i = 0; i < g; ++i) {
        cplx r = es.eigenvalues()[i];
        for (int it = 0; it < 30; ++it) {
            cplx d = poly_derivative_eval(p, r);
            if (d == 0.0) break;
            cplx step = poly_eval(p, r) / d;
            r -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(r))) break;
        }
        z.roots.push_back(r);
        z.max_residual = std::max(z.max_residual, std::abs(poly_eval(p, r)));
    }
    std::sort(z.roots.begin(), z.roots.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
    return z;
}

// Zeros xi_j of the Omega_0 polynomial. For ordered real configurations
// each gap (u_j, x_j) must contain exactly one of them.
inline OmegaZeros omega_zeros(const PeriodData& pd, const OmegaDifferential& om) {
    if (om.alpha.cwiseAbs().maxCoeff() != 0.0) throw input_error("omega_zeros needs alpha = 0");
    OmegaZeros z = polynomial_roots(om.c);
    BranchConfig c = pd.cfg;
    bool ordered = false;
    try {
        c = real_projection(c);
        ordered = validate_config(c, true).empty();
    } catch (const Error&) {
    }
    if (ordered) {
        double scale = max_modulus(c);
        for (int j = 0; j < c.genus; ++j) {
            double a = c.u[j].real(), b = c.x[j].real();
            int count = 0;
            for (cplx r : z.roots)
                if (std::abs(r.imag()) <= 1e-8 * scale && r.real() > a && r.real() < b) ++count;
            if (count != 1)
                throw root_localization_failed("expected one zero in (" + c.label(c.u_index(j)) + ", " +
                                               c.label(c.x_index(j)) + "), found " + std::to_string(count));
        }
        // exact real roots for real data
        for (auto& r : z.roots) r = r.real();
    }
    return z;
}

struct CombRegion {
    std::vector<double> q;        // Re Theta(u_j)
    std::vector<double> h;        // Im Theta(xi_j)
    std::vector<double> xi;
    std::vector<double> ratio;    // q_j / beta_j
    double max_error_estimate = 0.0;
    int max_nodes = 0;
};

namespace detail {

// Theta integrand without the inverse-square-root endpoint factors of
// [a, b] (indices ia, ib of consecutive sorted branch points).
struct CombIntegrand {
    const BranchConfig& c;
    const std::vector<double>& xi;

    // prod(t - xi) / Y(t) * sqrt((t - a)(b - t)) for t in (a, b), with
    // Y the boundary value from the upper half plane.
    cplx smooth(double t, int ia, int ib) const {
        cplx num = 1.0, den = 1.0;
        for (double s : xi) num *= t - s;
        for (int i = 0; i < c.finite_count(); ++i) {
            if (i == ia || i == ib) continue;
            den *= sqrt_down(cplx(t) - c.point(i));
        }
        // sqrt_down(t - a) sqrt_down(t - b) = i sqrt((t - a)(b - t))
        return num / (den * cplx(0.0, 1.0));
    }

    // prod(t - xi) / Y(t) * sqrt(t - a) for t > a = largest branch point.
    cplx smooth_tail(double t, int ia) const {
        cplx num = 1.0, den = 1.0;
        for (double s : xi) num *= t - s;
        for (int i = 0; i < c.finite_count(); ++i)
            if (i != ia) den *= sqrt_down(cplx(t) - c.point(i));
        return num / den;
    }
};

}  // namespace detail

// Theta(t) = (1/2) int_0^t prod(s - xi) / Y(s) ds along the real axis for
// t >= 0, ordered real configurations only.
class CombMap {
public:
    CombMap(const BranchConfig& c, std::vector<double> xi, const QuadOptions& opt = {})
        : c_(c), xi_(std::move(xi)), opt_(opt), order_(sorted_indices(c)) {
        for (int i : order_) e_.push_back(c.point(i).real());
        cum_.push_back(0.0);
        for (size_t k = 0; k + 1 < e_.size(); ++k) cum_.push_back(cum_.back() + full(int(k)));
    }

    cplx operator()(double t) {
        if (t < 0) throw input_error("Theta is evaluated for t >= 0");
        size_t k = 0;
        while (k + 1 < e_.size() && e_[k + 1] <= t) ++k;
        if (t == e_[k]) return cum_[k];
        if (k + 1 == e_.size()) return cum_[k] + tail(t);
        return cum_[k] + partial(int(k), t);
    }

    double max_error() const { return max_err_; }
    int max_nodes() const { return max_nodes_; }

private:
    detail::CombIntegrand f() const { return {c_, xi_}; }

    void track(const QuadReport& r) {
        max_err_ = std::max(max_err_, r.error_estimate);
        max_nodes_ = std::max(max_nodes_, r.nodes);
    }

    // t = a + (b - a)(1 - cos phi) / 2 turns the endpoint singularities into
    // a smooth integrand in phi.
    cplx full(int k) {
        double a = e_[k], b = e_[k + 1];
        auto F = f();
        auto res = chebyshev_angle_adaptive(
            [&](double ph) { return F.smooth(a + 0.5 * (b - a) * (1 - std::cos(ph)), order_[k], order_[k + 1]); }, opt_);
        track(res.second);
        return 0.5 * res.first;
    }

    cplx partial(int k, double t) {
        double a = e_[k], b = e_[k + 1];
        double ps = std::acos(std::clamp(1.0 - 2.0 * (t - a) / (b - a), -1.0, 1.0));
        auto F = f();
        auto res = gauss_legendre_adaptive(
            [&](double ph) { return F.smooth(a + 0.5 * (b - a) * (1 - std::cos(ph)), order_[k], order_[k + 1]); }, 0.0,
            ps, opt_);
        track(res.second);
        return 0.5 * res.first;
    }

    // s = sqrt(t - a) past the last branch point
    cplx tail(double t) {
        double a = e_.back();
        auto F = f();
        auto res = gauss_legendre_adaptive([&](double s) { return 2.0 * F.smooth_tail(a + s * s, order_.back()); }, 0.0,
                                           std::sqrt(t - a), opt_);
        track(res.second);
        return 0.5 * res.first;
    }

    BranchConfig c_;
    std::vector<double> xi_;
    QuadOptions opt_;
    std::vector<int> order_;
    std::vector<double> e_;
    std::vector<cplx> cum_;
    double max_err_ = 0.0;
    int max_nodes_ = 0;
};

inline CombRegion comb_map(const PeriodData& pd, const OmegaDifferential& om, const QuadOptions& opt = {}) {
    const BranchConfig c = real_projection(pd.cfg);
    require_valid(c, true);
    OmegaZeros z = omega_zeros(pd, om);
    CombRegion R;
    for (auto r : z.roots) R.xi.push_back(r.real());
    CombMap theta(c, R.xi, opt);
    for (int j = 0; j < c.genus; ++j) {
        R.q.push_back(theta(c.u[j].real()).real());
        R.h.push_back(theta(R.xi[j]).imag());
        R.ratio.push_back(R.q[j] / om.beta[j].real());
    }
    R.max_error_estimate = theta.max_error();
    R.max_nodes = theta.max_nodes();
    return R;
}

struct CombInvariance {
    std::vector<CombRegion> regions;
    double max_q_drift = 0.0;
    double max_h_variation = 0.0;
    double max_ratio_spread = 0.0;   // relative spread of q_j / beta_j over samples and j
    bool q_invariant = false;
    bool h_varies = false;
};

inline CombInvariance comb_invariance_check(const std::vector<Sample>& samples, const CanonicalBasis& basis,
                                            double tol = 1e-6, const QuadOptions& quad = {}) {
    CombInvariance r;
    double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
    for (auto& s : samples) {
        PeriodData pd = normalized_basis(with_xu(s.x, s.u), basis, quad);
        OmegaDifferential om = build_omega(pd);
        CombRegion R = comb_map(pd, om, quad);
        for (double v : R.ratio) rmin = std::min(rmin, v), rmax = std::max(rmax, v);
        if (!r.regions.empty()) {
            const CombRegion& R0 = r.regions.front();
            for (size_t j = 0; j < R.q.size(); ++j) {
                r.max_q_drift = std::max(r.max_q_drift, std::abs(R.q[j] - R0.q[j]));
                r.max_h_variation = std::max(r.max_h_variation, std::abs(R.h[j] - R0.h[j]));
            }
        }
        r.regions.push_back(std::move(R));
    }
    if (!r.regions.empty()) r.max_ratio_spread = (rmax - rmin) / std::max(std::abs(rmax), std::abs(rmin));
    r.q_invariant = r.max_q_drift < tol;
    r.h_varies = r.max_h_variation > 10 * tol;
    return r;
}

}  // namespace hyperflow
