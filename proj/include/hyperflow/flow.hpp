#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Dense>

#include "hyperflow/curve.hpp"
#include "hyperflow/errors.hpp"
#include "hyperflow/periods.hpp"

namespace hyperflow {

// T[m](k, n) = d^2 u_m / dx_k dx_n
using Tensor3 = std::vector<CMat>;

// Periods and Omega at one configuration, with a fixed cycle marking.
struct PointData {
    PeriodData pd;
    OmegaDifferential om;
};

inline PointData evaluate_point(const BranchConfig& cfg, const CanonicalBasis& basis, const CVec& alpha,
                                const QuadOptions& quad = {}) {
    PointData p{normalized_basis(cfg, basis, quad), {}};
    p.om = build_omega(p.pd, alpha);
    return p;
}

inline BranchConfig with_xu(const CVec& x, const CVec& u) {
    return make_config(std::vector<cplx>(x.data(), x.data() + x.size()), std::vector<cplx>(u.data(), u.data() + u.size()));
}

inline CVec as_cvec(const std::vector<cplx>& v) { return Eigen::Map<const CVec>(v.data(), Eigen::Index(v.size())); }

// Refuse to evaluate on (or numerically near) the diagonals where two of
// {0, x_j, u_j} meet.
inline void check_singular_locus(const CVec& x, const CVec& u, double rel = 1e-8) {
    std::vector<cplx> p{0.0};
    std::vector<std::string> name{"0"};
    for (int j = 0; j < x.size(); ++j) p.push_back(x[j]), name.push_back("x" + std::to_string(j + 1));
    for (int j = 0; j < u.size(); ++j) p.push_back(u[j]), name.push_back("u" + std::to_string(j + 1));
    double scale = 1.0;
    for (auto z : p) scale = std::max(scale, std::abs(z));
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (std::abs(p[i] - p[j]) < rel * scale)
                throw singular_locus("branch points " + name[i] + " and " + name[j] + " collide");
}

// D(m, j) = du_m/dx_j = -v_m(P_{x_j}) Omega(P_{x_j}) / Omega(P_{u_m}).
inline CMat first_derivatives(const PeriodData& pd, const OmegaDifferential& om) {
    const BranchConfig& c = pd.cfg;
    const int g = c.genus;
    double scale = om.values_at.cwiseAbs().maxCoeff();
    CMat D(g, g);
    for (int m = 0; m < g; ++m) {
        cplx Om = om.values_at[c.u_index(m)];
        if (std::abs(Om) <= 1e-12 * scale) throw vanishing_omega_at_u("Omega vanishes at " + c.label(c.u_index(m)));
        for (int j = 0; j < g; ++j) D(m, j) = -v_at(c, m, c.x_index(j)) * om.values_at[c.x_index(j)] / Om;
    }
    return D;
}

// J(j, k) = d beta_k / d u_j = pi i Omega(P_{u_j}) omega_k(P_{u_j}).
inline CMat jacobian(const PeriodData& pd, const OmegaDifferential& om) {
    const int g = pd.genus();
    CMat J(g, g);
    for (int j = 0; j < g; ++j) {
        int i = pd.cfg.u_index(j);
        for (int k = 0; k < g; ++k) J(j, k) = cplx(0, M_PI) * om.values_at[i] * pd.omega_at(k, i);
    }
    return J;
}

inline cplx rhs_genus1(cplx x, cplx u, cplx du) {
    CVec xs(1), us(1);
    xs[0] = x, us[0] = u;
    check_singular_locus(xs, us);
    return 0.5 * (1.0 / x + 1.0 / (u - x)) - 0.5 * du * (2.0 / x + 1.0 / (u - x)) +
           0.5 * du * du * (2.0 / u + 1.0 / (x - u)) - 0.5 * du * du * du * (1.0 / u + 1.0 / (x - u));
}

// Closed genus-2 forms written for m = 1 and mapped to the other index
// combinations by swapping labels.
inline Tensor3 rhs_genus2(const CVec& x, const CVec& u, const CMat& D) {
    if (x.size() != 2 || u.size() != 2) throw input_error("rhs_genus2 needs genus 2 data");
    check_singular_locus(x, u);
    auto mixed = [](cplx x1, cplx x2, cplx u1, cplx u2, cplx a11, cplx a12, cplx a21, cplx a22) {
        return 0.5 * a11 * (1.0 / (x1 - x2) + 1.0 / (x2 - u1)) + 0.5 * a12 * (1.0 / (x2 - x1) + 1.0 / (x1 - u1)) +
               0.5 * a11 * a12 * (2.0 / u1 + 1.0 / (u2 - u1)) +
               0.25 * a11 * a22 * (1.0 / (u1 - u2) - 1.0 / (x1 - u2)) +
               0.25 * a12 * a21 * (1.0 / (u1 - u2) - 1.0 / (x2 - u2)) -
               0.5 * a11 * a11 * a12 * (1.0 / u1 + 1.0 / (x1 - u1)) -
               0.5 * a11 * a12 * a12 * (1.0 / u1 + 1.0 / (x2 - u1));
    };
    auto diag = [](cplx x1, cplx x2, cplx u1, cplx u2, cplx a11, cplx a12, cplx a21, cplx) {
        return 0.5 * (1.0 / x1 - 1.0 / (x1 - u1)) +
               0.5 * a11 * (-2.0 / x1 - 1.0 / (x1 - x2) + 1.0 / (x1 - u2) + 1.0 / (x1 - u1)) -
               0.5 * a12 * (1.0 / x1 + 1.0 / (x2 - x1)) +
               0.5 * a11 * a11 * (2.0 / u1 + 1.0 / (u1 - x2) - 1.0 / (u1 - u2) + 1.0 / (x1 - u1)) +
               0.5 * a11 * a21 * (1.0 / (u1 - u2) - 1.0 / (x1 - u2)) -
               0.5 * a11 * a11 * a11 * (1.0 / u1 + 1.0 / (x1 - u1)) -
               0.5 * a11 * a11 * a12 * (1.0 / u1 + 1.0 / (x2 - u1));
    };
    Tensor3 H(2, CMat::Zero(2, 2));
    for (int m = 0; m < 2; ++m) {
        int o = 1 - m;
        for (int k = 0; k < 2; ++k) {
            int n = 1 - k;
            H[m](k, k) = diag(x[k], x[n], u[m], u[o], D(m, k), D(m, n), D(o, k), D(o, n));
        }
        H[m](0, 1) = H[m](1, 0) = mixed(x[0], x[1], u[m], u[o], D(m, 0), D(m, 1), D(o, 0), D(o, 1));
    }
    return H;
}

// Second derivatives for arbitrary genus, mixed (n != k) and diagonal
// (n == k) cases.
inline Tensor3 rhs_genus_g(const CVec& x, const CVec& u, const CMat& D) {
    const int g = int(x.size());
    if (u.size() != g || D.rows() != g || D.cols() != g) throw input_error("rhs_genus_g: inconsistent sizes");
    check_singular_locus(x, u);
    std::vector<cplx> S(g);
    for (int m = 0; m < g; ++m) S[m] = D.row(m).sum() - 1.0;

    // prod_{s != j} u_s / (u_s - u_j)
    auto lag0 = [&](int j) {
        cplx p = 1.0;
        for (int s = 0; s < g; ++s)
            if (s != j) p *= u[s] / (u[s] - u[j]);
        return p;
    };
    auto E5 = [&](int m) {
        cplx p = 1.0, s = 1.0 / u[m];
        for (int i = 0; i < g; ++i)
            if (i != m) p *= (u[i] - u[m]) / u[i];
        for (int j = 0; j < g; ++j)
            if (j != m) s -= lag0(j) / (u[m] - u[j]);
        return p * s;
    };
    auto E8 = [&](int m) {
        cplx t = 0.0;
        for (int j = 0; j < g; ++j) {
            cplx p = 1.0;
            for (int i = 0; i < g; ++i)
                if (i != m) p *= (u[m] - u[i]) / (x[j] - u[i]);
            t += p / (x[j] - u[m]) * D(m, j);
        }
        cplx num = 1.0;
        for (int s = 0; s < g; ++s)
            if (s != m) num *= u[m] - u[s];
        for (int j = 0; j < g; ++j) {
            cplx inner = 0.0;
            for (int i = 0; i < g; ++i) {
                if (i == m) continue;
                cplx den = 1.0;
                for (int s = 0; s < g; ++s)
                    if (s != i) den *= u[i] - u[s];
                inner += (x[j] - u[m]) / ((x[j] - u[i]) * (u[m] - u[i])) * num / den;
            }
            t += inner * D(m, j);
        }
        return t;
    };

    Tensor3 H(g, CMat::Zero(g, g));
    for (int m = 0; m < g; ++m) {
        const cplx e5 = E5(m), e8 = E8(m);
        for (int k = 0; k < g; ++k)
            for (int n = 0; n < g; ++n) {
                cplx t = 0.0;
                if (n != k) {
                    t += 0.5 * D(m, k) * (1.0 / (x[k] - x[n]) + 1.0 / (x[n] - u[m]));
                    t += 0.5 * D(m, n) * (1.0 / (x[n] - x[k]) + 1.0 / (x[k] - u[m]));
                    cplx br = 1.0 / u[m];
                    for (int i = 0; i < g; ++i)
                        if (i != k && i != n) br += 1.0 / (u[m] - x[i]);
                    for (int i = 0; i < g; ++i)
                        if (i != m) br -= 2.0 / (u[m] - u[i]);
                    t += 0.5 * D(m, k) * D(m, n) * br;
                    cplx s1 = 0.0, s2 = 0.0;
                    for (int j = 0; j < g; ++j) {
                        if (j == m) continue;
                        s1 += (1.0 / (u[m] - u[j]) - 1.0 / (x[k] - u[j])) * D(j, n);
                        s2 += (1.0 / (u[m] - u[j]) - 1.0 / (x[n] - u[j])) * D(j, k);
                    }
                    t += 0.25 * D(m, k) * s1 + 0.25 * D(m, n) * s2;
                    t -= 0.5 * D(m, k) * D(m, n) * (S[m] * e5 + e8);
                } else {
                    cplx dk = D(m, k);
                    cplx b1 = -1.0 / x[k] + 1.0 / (x[k] - u[m]);
                    for (int j = 0; j < g; ++j)
                        if (j != k) b1 -= 1.0 / (x[k] - x[j]);
                    for (int j = 0; j < g; ++j)
                        if (j != m) b1 += 2.0 / (x[k] - u[j]);
                    t += 0.5 * dk * b1;

                    cplx b2 = 1.0 / u[m] + 1.0 / (x[k] - u[m]);
                    for (int j = 0; j < g; ++j)
                        if (j != k) b2 += 1.0 / (u[m] - x[j]);
                    for (int j = 0; j < g; ++j)
                        if (j != m) b2 -= 2.0 / (u[m] - u[j]);
                    t += 0.5 * dk * dk * b2;

                    cplx s1 = 0.0;
                    for (int j = 0; j < g; ++j)
                        if (j != m) s1 += (1.0 / (u[m] - u[j]) - 1.0 / (x[k] - u[j])) * D(j, k);
                    t += 0.5 * dk * s1;

                    cplx p = 1.0, q = 1.0 / x[k];
                    for (int i = 0; i < g; ++i)
                        if (i != m) p *= (u[i] - x[k]) / u[i];
                    for (int j = 0; j < g; ++j) q -= lag0(j) / (x[k] - u[j]);
                    t -= 0.5 * S[m] * p * q;

                    t -= 0.5 * dk * dk * S[m] * e5;

                    for (int j = 0; j < g; ++j) {
                        if (j == k) continue;
                        cplx r = 1.0;
                        for (int i = 0; i < g; ++i)
                            if (i != m) r *= (x[k] - u[i]) / (x[j] - u[i]);
                        t -= 0.5 / (x[j] - x[k]) * r * D(m, j);
                    }
                    for (int j = 0; j < g; ++j) {
                        cplx inner = 0.0;
                        for (int i = 0; i < g; ++i) {
                            cplx r = 1.0;
                            for (int s = 0; s < g; ++s)
                                if (s != i) r *= (x[k] - u[s]) / (u[i] - u[s]);
                            inner += (x[j] - u[m]) / ((x[j] - u[i]) * (x[k] - u[m])) * r;
                        }
                        t -= 0.5 * inner * D(m, j);
                    }
                    t -= 0.5 * dk * dk * e8;
                }
                H[m](k, n) = t;
            }
    }
    return H;
}

// Rational right-hand side used by the flow: the closed forms for g = 1, 2
// and the general formulas above that.
inline Tensor3 rational_rhs(const CVec& x, const CVec& u, const CMat& D) {
    if (x.size() == 1) {
        Tensor3 H(1, CMat(1, 1));
        H[0](0, 0) = rhs_genus1(x[0], u[0], D(0, 0));
        return H;
    }
    if (x.size() == 2) return rhs_genus2(x, u, D);
    return rhs_genus_g(x, u, D);
}

struct NewtonResult {
    CVec u;
    int iterations = 0;
    std::vector<double> residuals;   // max |beta - target| before each iteration and at exit
};

inline NewtonResult newton_correct(const CVec& x, const CVec& u0, const CanonicalBasis& basis, const CVec& alpha,
                                   const CVec& beta_target, int max_iter = 5, double tol = 1e-12,
                                   const QuadOptions& quad = {}) {
    NewtonResult r;
    r.u = u0;
    const double scale = std::max(1.0, beta_target.cwiseAbs().maxCoeff());
    for (int it = 0;; ++it) {
        auto P = evaluate_point(with_xu(x, r.u), basis, alpha, quad);
        CVec res = P.om.beta - beta_target;
        double nr = res.cwiseAbs().maxCoeff();
        r.residuals.push_back(nr);
        if (nr <= tol * scale || it == max_iter) break;
        if (it >= 2 && nr > 0.5 * r.residuals[it - 1] && nr > 1e3 * tol * scale)
            throw no_progress("Newton correction stalled at residual " + std::to_string(nr));
        CMat J = jacobian(P.pd, P.om);
        Eigen::PartialPivLU<CMat> lu(J.transpose());
        if (!(lu.rcond() > 1e-14)) throw singular_jacobian("implicit-function Jacobian is singular");
        r.u += lu.solve(CVec(-res));
        r.iterations = it + 1;
    }
    return r;
}

enum class FlowMode { PeriodImplicit, Rational };

inline std::string to_string(FlowMode m) { return m == FlowMode::Rational ? "rational" : "implicit"; }

inline FlowMode parse_mode(const std::string& s) {
    if (s == "implicit") return FlowMode::PeriodImplicit;
    if (s == "rational") return FlowMode::Rational;
    throw input_error("unknown mode '" + s + "' (expected implicit or rational)");
}

struct DeformationState {
    BranchConfig cfg;
    CanonicalBasis basis;
    CVec alpha;
    CVec beta_target;
    FlowMode mode = FlowMode::PeriodImplicit;
    CMat du;   // carried du_m/dx_j in rational mode; filled at the start if empty
};

inline DeformationState make_state(const BranchConfig& cfg, const std::string& basis_kind, const CVec& alpha,
                                   FlowMode mode, const QuadOptions& quad = {}) {
    DeformationState s;
    s.cfg = cfg;
    auto P = evaluate_point(cfg, make_basis(cfg, basis_kind), alpha, quad);
    s.basis = P.pd.basis;
    s.alpha = alpha;
    s.beta_target = P.om.beta;
    s.mode = mode;
    s.du = first_derivatives(P.pd, P.om);
    return s;
}

inline DeformationState make_state(const BranchConfig& cfg, const std::string& basis_kind = "gap",
                                   FlowMode mode = FlowMode::PeriodImplicit) {
    return make_state(cfg, basis_kind, CVec::Zero(cfg.genus), mode);
}

struct FlowOptions {
    double atol = 1e-12;
    double rtol = 1e-9;
    bool correct = true;
    int max_newton = 5;
    double newton_tol = 1e-13;
    double drift_limit = -1.0;    // > 0 turns on verify-as-you-go
    int samples_per_leg = 10;
    int max_halvings = 40;
    double singular_rel = 1e-6;   // collision distance relative to max |branch point|
    double min_step_rel = 1e-12;  // steps below this fraction of a leg mean the flow has hit a fold
    int max_steps = 200000;
    bool track_periods = true;    // recompute beta at samples in rational mode
    QuadOptions quad{1e-12, 32, 1 << 18};
};

struct Sample {
    int step = 0;
    CVec x, u;
    CMat du;
    CVec beta_drift;
    double du_mismatch = 0.0;     // rational mode: |carried du - first_derivatives|
    int accepted = 0, rejected = 0;
    double last_step = 0.0;
};

struct Trajectory {
    FlowMode mode = FlowMode::PeriodImplicit;
    std::vector<CVec> path;
    std::vector<Sample> samples;
    double max_drift = 0.0;
    bool complete = false;
    std::string stop_reason;

    const Sample& back() const { return samples.back(); }
};

namespace detail {

using RState = std::vector<double>;

inline RState pack(const CVec& u, const CMat* du) {
    const int g = int(u.size());
    RState s(2 * (g + (du ? g * g : 0)));
    for (int i = 0; i < g; ++i) s[2 * i] = u[i].real(), s[2 * i + 1] = u[i].imag();
    if (du)
        for (int m = 0; m < g; ++m)
            for (int j = 0; j < g; ++j) {
                int k = g + m * g + j;
                s[2 * k] = (*du)(m, j).real(), s[2 * k + 1] = (*du)(m, j).imag();
            }
    return s;
}

inline void unpack(const RState& s, int g, CVec& u, CMat* du) {
    u.resize(g);
    for (int i = 0; i < g; ++i) u[i] = cplx(s[2 * i], s[2 * i + 1]);
    if (du) {
        du->resize(g, g);
        for (int m = 0; m < g; ++m)
            for (int j = 0; j < g; ++j) {
                int k = g + m * g + j;
                (*du)(m, j) = cplx(s[2 * k], s[2 * k + 1]);
            }
    }
}

}  // namespace detail

inline void integrate_flow_into(Trajectory& tr, const DeformationState& st, const std::vector<CVec>& path,
                                const FlowOptions& opt = {}) {
    namespace odeint = boost::numeric::odeint;
    using detail::RState;
    const int g = st.cfg.genus;
    const bool rational = st.mode == FlowMode::Rational;
    tr = Trajectory{};
    tr.mode = st.mode;
    tr.path = path;
    if (path.empty()) throw input_error("path must contain at least the starting point");
    CVec x = as_cvec(st.cfg.x);
    if ((path.front() - x).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, x.cwiseAbs().maxCoeff()))
        throw input_error("path must start at the configuration's x");
    CVec u = as_cvec(st.cfg.u);
    CMat du = st.du;
    int accepted = 0, rejected = 0, step_no = 0;
    double last_dt = 0.0;

    auto record = [&](const CVec& xs, const CVec& us, const CMat& carried) {
        Sample s;
        s.step = step_no;
        s.x = xs;
        s.u = us;
        s.accepted = accepted;
        s.rejected = rejected;
        s.last_step = last_dt;
        s.du = carried;
        s.beta_drift = CVec::Zero(g);
        if (!rational || opt.track_periods) {
            auto P = evaluate_point(with_xu(xs, us), st.basis, st.alpha, opt.quad);
            s.beta_drift = P.om.beta - st.beta_target;
            CMat d = first_derivatives(P.pd, P.om);
            if (rational) s.du_mismatch = (d - carried).cwiseAbs().maxCoeff();
            else s.du = d;
        }
        double drift = s.beta_drift.cwiseAbs().maxCoeff();
        tr.max_drift = std::max(tr.max_drift, drift);
        tr.samples.push_back(s);
        if (opt.drift_limit > 0 && drift > opt.drift_limit)
            throw drift_exceeded("beta drift " + std::to_string(drift) + " exceeds " + std::to_string(opt.drift_limit));
    };

    if (du.size() == 0) {
        auto P = evaluate_point(st.cfg, st.basis, st.alpha, opt.quad);
        du = first_derivatives(P.pd, P.om);
    }
    if (rational && (du.rows() != g || du.cols() != g)) throw input_error("rational mode needs the du matrix");
    record(x, u, du);

    for (size_t seg = 1; seg < path.size(); ++seg) {
        for (int k = 0; k < g; ++k) {
            cplx delta = path[seg][k] - x[k];
            double L = std::abs(delta);
            if (L == 0.0) continue;
            const cplx dir = delta / L;
            const cplx x0k = x[k];

            auto system = [&](const RState& s, RState& ds, double t) {
                CVec xs = x;
                xs[k] = x0k + t * dir;
                CVec us;
                CMat dus;
                detail::unpack(s, g, us, rational ? &dus : nullptr);
                check_singular_locus(xs, us, opt.singular_rel);
                if (rational) {
                    Tensor3 H = rational_rhs(xs, us, dus);
                    CVec du_dt = dir * dus.col(k);
                    CMat ddu(g, g);
                    for (int m = 0; m < g; ++m)
                        for (int j = 0; j < g; ++j) ddu(m, j) = dir * H[m](j, k);
                    ds = detail::pack(du_dt, &ddu);
                } else {
                    auto P = evaluate_point(with_xu(xs, us), st.basis, st.alpha, opt.quad);
                    CMat D = first_derivatives(P.pd, P.om);
                    ds = detail::pack(CVec(dir * D.col(k)), nullptr);
                }
            };

            auto stepper = odeint::make_controlled(opt.atol, opt.rtol, odeint::runge_kutta_dopri5<RState>());
            RState s = detail::pack(u, rational ? &du : nullptr);
            double t = 0.0, dt = std::min(1e-3, 0.1 / std::max(1, opt.samples_per_leg)) * L;
            int halvings = 0;
            const int ns = std::max(1, opt.samples_per_leg);
            for (int si = 1; si <= ns; ++si) {
                const double t_next = (si == ns) ? L : L * si / ns;
                while (t < t_next) {
                    if (accepted + rejected > opt.max_steps) throw no_convergence("flow exceeded the step budget");
                    double h = std::min(dt, t_next - t);
                    if (h < opt.min_step_rel * L && t_next - t > opt.min_step_rel * L) {
                        CVec xs = x, us;
                        xs[k] = x0k + t * dir;
                        detail::unpack(s, g, us, nullptr);
                        std::ostringstream os;
                        os << "step size collapsed near x_" << k + 1 << " = " << xs[k] << ", u = " << us.transpose();
                        tr.stop_reason = os.str();
                        throw singular_locus(os.str());
                    }
                    RState backup = s;
                    double t_before = t;
                    odeint::controlled_step_result res;
                    try {
                        res = stepper.try_step(system, s, t, h);
                    } catch (const Error& e) {
                        if (e.kind() != ErrorKind::Singularity) throw;
                        s = backup;
                        t = t_before;
                        stepper.reset();
                        dt = 0.5 * h;
                        if (++halvings > opt.max_halvings) {
                            CVec xs = x;
                            xs[k] = x0k + t * dir;
                            std::ostringstream os;
                            os << e.detail() << " (flow stopped near x_" << k + 1 << " = " << xs[k] << ")";
                            tr.stop_reason = os.str();
                            throw Error(e.kind(), e.code(), os.str());
                        }
                        ++rejected;
                        continue;
                    }
                    if (res == odeint::fail) {
                        ++rejected;
                        dt = h;
                        continue;
                    }
                    halvings = 0;
                    ++accepted;
                    ++step_no;
                    last_dt = t - t_before;
                    dt = h;
                    if (t_next - t < 1e-14 * L) t = t_next;
                    if (!rational && opt.correct) {
                        CVec us;
                        detail::unpack(s, g, us, nullptr);
                        CVec xs = x;
                        xs[k] = x0k + t * dir;
                        auto nr = newton_correct(xs, us, st.basis, st.alpha, st.beta_target, opt.max_newton,
                                                 opt.newton_tol, opt.quad);
                        s = detail::pack(nr.u, nullptr);
                        stepper.reset();
                    }
                }
                CVec xs = x;
                xs[k] = x0k + t_next * dir;
                detail::unpack(s, g, u, rational ? &du : nullptr);
                record(xs, u, du);
            }
            x[k] = path[seg][k];
            tr.samples.back().x[k] = x[k];
        }
    }
    tr.complete = true;
}

inline Trajectory integrate_flow(const DeformationState& st, const std::vector<CVec>& path, const FlowOptions& opt = {}) {
    Trajectory tr;
    integrate_flow_into(tr, st, path, opt);
    return tr;
}

// Straight path x -> x_end as a two-point polyline.
inline std::vector<CVec> straight_path(const BranchConfig& cfg, const CVec& x_end) {
    return {as_cvec(cfg.x), x_end};
}

struct HillReport {
    bool is_hill = false;
    bool ambiguous = false;
    std::vector<long> n;
    std::vector<double> residuals;
};

// n_j = T beta_j / (2 pi i), rounded to the nearest integer with halves
// away from zero.
inline HillReport hill_check(const PeriodData& pd, const OmegaDifferential& om, cplx T, double tol = 1e-8) {
    HillReport r;
    bool real = true;
    double scale = std::max(1.0, max_modulus(pd.cfg));
    for (int i = 0; i < pd.cfg.finite_count(); ++i)
        if (std::abs(pd.cfg.point(i).imag()) > 1e-12 * scale) real = false;
    r.is_hill = real;
    for (int j = 0; j < pd.genus(); ++j) {
        cplx nj = T * om.beta[j] / two_pi_i;
        long k = std::lround(nj.real());
        double res = std::abs(nj - double(k));
        r.n.push_back(k);
        r.residuals.push_back(res);
        if (res >= tol) r.is_hill = false;
        if (res > tol && res < 0.25) r.ambiguous = true;
    }
    return r;
}

}  // namespace hyperflow
