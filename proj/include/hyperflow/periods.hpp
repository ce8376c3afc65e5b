#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hyperflow/curve.hpp"
#include "hyperflow/errors.hpp"
#include "hyperflow/poly.hpp"
#include "hyperflow/quadrature.hpp"

namespace hyperflow {

inline const cplx two_pi_i{0.0, 2.0 * M_PI};

// A closed cycle on the curve given by the finite branch points its
// lambda-projection encircles. The first and last entries are the foci of
// the elliptic contour that realizes it.
struct CycleSpec {
    std::vector<int> encircled;
    int orientation = 1;
};

struct CanonicalBasis {
    std::string kind;
    std::vector<CycleSpec> a;
    std::vector<CycleSpec> b;
};

// Cycles built from the branch points e_0 < e_1 < ... < e_2g (sorted by
// real part). a_j encircles {e_{2j-1}, e_{2j}} and b_j encircles
// {e_0, ..., e_{2j-1}}. For 0 < u_1 < x_1 < ... this is a_j around
// {u_j, x_j} and b_j around {0, u_1, x_1, ..., u_j}.
inline CanonicalBasis gap_basis(const BranchConfig& c) {
    auto e = sorted_indices(c);
    CanonicalBasis B;
    B.kind = "gap";
    for (int j = 1; j <= c.genus; ++j) {
        B.a.push_back({{e[2 * j - 1], e[2 * j]}, 1});
        B.b.push_back({std::vector<int>(e.begin(), e.begin() + 2 * j), 1});
    }
    return B;
}

// Involution-adapted marking for real curves: a_j encircles
// {e_{2j-2}, e_{2j-1}}, an interval where mu is real, and b_j encircles
// {e_{2j-1}, ..., e_2g}. Periods of the holomorphic basis over a-cycles
// are real, so U is real and B purely imaginary.
inline CanonicalBasis band_basis(const BranchConfig& c) {
    auto e = sorted_indices(c);
    CanonicalBasis B;
    B.kind = "band";
    for (int j = 1; j <= c.genus; ++j) {
        B.a.push_back({{e[2 * j - 2], e[2 * j - 1]}, 1});
        B.b.push_back({std::vector<int>(e.begin() + 2 * j - 1, e.end()), 1});
    }
    return B;
}

inline CanonicalBasis make_basis(const BranchConfig& c, const std::string& kind) {
    if (kind == "gap") return gap_basis(c);
    if (kind == "band") return band_basis(c);
    throw input_error("unknown basis kind '" + kind + "' (expected gap or band)");
}

// Intersection numbers mod 2 of the cycles a_1..a_g, b_1..b_g, read off
// from the parity of the overlap of encircled sets.
inline Eigen::MatrixXi pairing_mod2(const CanonicalBasis& B) {
    std::vector<const CycleSpec*> all;
    for (auto& c : B.a) all.push_back(&c);
    for (auto& c : B.b) all.push_back(&c);
    const int n = int(all.size());
    Eigen::MatrixXi P = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            std::set<int> s(all[i]->encircled.begin(), all[i]->encircled.end());
            int common = 0;
            for (int k : all[j]->encircled) common += int(s.count(k));
            P(i, j) = common % 2;
        }
    return P;
}

inline void check_canonical(const CanonicalBasis& B, const BranchConfig& c) {
    const int g = c.genus;
    if (int(B.a.size()) != g || int(B.b.size()) != g) throw input_error("basis must have genus a- and b-cycles");
    auto check_cycle = [&](const CycleSpec& s) {
        std::set<int> u(s.encircled.begin(), s.encircled.end());
        if (s.encircled.size() < 2 || s.encircled.size() % 2 || u.size() != s.encircled.size())
            throw input_error("a cycle must encircle an even number of distinct branch points");
        for (int i : s.encircled)
            if (i < 0 || i >= c.finite_count()) throw input_error("cycle refers to an unknown branch point");
        if (s.orientation != 1 && s.orientation != -1) throw input_error("orientation must be +1 or -1");
    };
    for (auto& s : B.a) check_cycle(s);
    for (auto& s : B.b) check_cycle(s);
    Eigen::MatrixXi P = pairing_mod2(B);
    Eigen::MatrixXi J = Eigen::MatrixXi::Zero(2 * g, 2 * g);
    J.topRightCorner(g, g).setIdentity();
    J.bottomLeftCorner(g, g).setIdentity();
    if (P != J) throw input_error("basis is not canonical: intersection pairing mod 2 differs from the standard form");
}

// Elliptic contour with foci at the first and last encircled points, in
// the Joukowski variable lambda = c + h (w + 1/w) / 2, |w| = r. Along it
// mu is an explicit single-valued function of w, anchored to the
// reference branch at the point w = i r.
class Contour {
public:
    Contour(const BranchConfig& cfg, const CycleSpec& cyc) : n_(cfg.finite_count()) {
        cplx a = cfg.point(cyc.encircled.front()), b = cfg.point(cyc.encircled.back());
        c_ = 0.5 * (a + b);
        h_ = 0.5 * (b - a);
        inside_.assign(n_, 0);
        for (int i : cyc.encircled) inside_[i] = 1;
        m_ = int(cyc.encircled.size()) / 2;
        rho_in_ = 1.0;
        rho_out_ = std::numeric_limits<double>::infinity();
        for (int i = 0; i < n_; ++i) {
            cplx s = (cfg.point(i) - c_) / h_;
            cplx w = s + std::sqrt(s - 1.0) * std::sqrt(s + 1.0);
            if (std::abs(w) < 1.0) w = 1.0 / w;
            w_.push_back(w);
            if (inside_[i]) rho_in_ = std::max(rho_in_, std::abs(w));
            else rho_out_ = std::min(rho_out_, std::abs(w));
        }
        if (!(rho_out_ > rho_in_ * (1.0 + 1e-9)))
            throw path_too_close("no ellipse separates the encircled branch points from the others");
        r_ = std::sqrt(rho_in_ * rho_out_);
        if (!std::isfinite(r_)) r_ = 2.0 * rho_in_;
        cplx wt(0.0, r_);
        anchor_ = mu_reference(cfg, lambda(wt)) / shape(wt);
    }

    double radius() const { return r_; }
    double rho_in() const { return rho_in_; }
    double rho_out() const { return rho_out_; }
    cplx lambda(cplx w) const { return c_ + 0.5 * h_ * (w + 1.0 / w); }
    cplx dlambda_dtheta(cplx w) const { return cplx(0.0, 0.5) * h_ * (w - 1.0 / w); }
    cplx mu(cplx w) const { return anchor_ * shape(w); }
    cplx at(double theta) const { return r_ * std::polar(1.0, theta); }

private:
    cplx shape(cplx w) const {
        cplx f = std::pow(0.5 * h_ * w, m_);
        for (int i = 0; i < n_; ++i) {
            if (inside_[i])
                f *= std::sqrt(1.0 - w_[i] / w) * std::sqrt(1.0 - 1.0 / (w_[i] * w));
            else
                f *= std::sqrt(1.0 - 1.0 / (w_[i] * w)) * std::sqrt(1.0 - w / w_[i]);
        }
        return f;
    }

    int n_;
    cplx c_, h_, anchor_;
    double r_, rho_in_, rho_out_;
    int m_;
    std::vector<cplx> w_;
    std::vector<char> inside_;
};

// Integral over the cycle of f(lambda, mu) d lambda, where f returns a
// vector so several differentials share one set of nodes.
template <class F>
std::pair<CVec, QuadReport> integrate_cycle(const BranchConfig& cfg, const CycleSpec& cyc, F&& f,
                                            const QuadOptions& opt = {}, double clearance = -1.0) {
    Contour K(cfg, cyc);
    if (clearance < 0) clearance = default_clearance(cfg);
    for (int k = 0; k < 512; ++k) {
        cplx lam = K.lambda(K.at(2 * M_PI * k / 512));
        for (int i = 0; i < cfg.finite_count(); ++i)
            if (std::abs(lam - cfg.point(i)) < clearance)
                throw path_too_close("contour passes within clearance of " + cfg.label(i));
    }
    auto integrand = [&](double th) -> CVec {
        cplx w = K.at(th);
        cplx lam = K.lambda(w);
        return CVec(f(lam, K.mu(w)) * K.dlambda_dtheta(w));
    };
    auto res = trapezoid_periodic(integrand, opt);
    res.first *= double(cyc.orientation);
    return res;
}

template <class F>
cplx cycle_integral(const BranchConfig& cfg, const CycleSpec& cyc, F&& f, const QuadOptions& opt = {}) {
    auto vf = [&](cplx lam, cplx mu) {
        CVec v(1);
        v[0] = f(lam, mu);
        return v;
    };
    return integrate_cycle(cfg, cyc, vf, opt).first[0];
}

struct LaurentFit {
    int lowest = 0;
    std::vector<cplx> coeffs;      // coefficient of zeta^(lowest + k)
    double richardson_diff = 0.0;  // max change between radius R and 2R

    cplx coefficient(int n) const {
        int k = n - lowest;
        return (k >= 0 && k < int(coeffs.size())) ? coeffs[k] : cplx(0.0);
    }
};

// Laurent coefficients at P_inf of Q(lambda) d lambda / mu divided by
// d zeta, zeta = 1/sqrt(lambda), fitted on |lambda| = R and checked at 2R.
inline LaurentFit laurent_at_infinity(const BranchConfig& c, const CVec& q, double R = -1.0, int lowest = -4,
                                      int highest = 4, int samples = 64) {
    if (R <= 0) R = 10.0 * std::max(1.0, max_modulus(c));
    const int g = c.genus;
    auto fit = [&](double radius) {
        double rho = 1.0 / std::sqrt(radius);
        std::vector<cplx> out(highest - lowest + 1, 0.0);
        for (int m = 0; m < samples; ++m) {
            cplx z = rho * std::polar(1.0, 2 * M_PI * m / samples);
            cplx lam = 1.0 / (z * z);
            cplx root = 1.0;
            for (int i = 0; i < c.finite_count(); ++i) root *= std::sqrt(1.0 - c.point(i) * z * z);
            cplx mu = std::pow(z, -(2 * g + 1)) * root;
            cplx f = poly_eval(q, lam) * (-2.0 * std::pow(z, -3)) / mu;
            for (int n = lowest; n <= highest; ++n) out[n - lowest] += f * std::pow(z, -n) / double(samples);
        }
        return out;
    };
    LaurentFit L;
    L.lowest = lowest;
    L.coeffs = fit(R);
    auto check = fit(2 * R);
    for (size_t k = 0; k < check.size(); ++k)
        L.richardson_diff = std::max(L.richardson_diff, std::abs(check[k] - L.coeffs[k]));
    return L;
}

struct PeriodDiagnostics {
    int max_nodes = 0;
    double max_error_estimate = 0.0;
    double normalization_error = 0.0;   // max |a-period of omega_k - delta|
    double symmetry_error = 0.0;        // max |B - B^T|
    double infinity_fit_error = 0.0;    // closed form vs Laurent fit at P_inf
    double a_condition = 0.0;           // reciprocal condition estimate of A_raw
};

struct PeriodData {
    BranchConfig cfg;
    CanonicalBasis basis;   // b-orientations fixed so that Im B is positive definite
    CMat a_raw;             // (g+1) x g: a_raw(k, j) = integral of lambda^k phi over a_j
    CMat b_raw;             // (g+1) x g: same over b_j
    CMat C;                 // omega_j = sum_k C(j, k) lambda^k phi
    CMat B;                 // B(j, k) = integral of omega_k over b_j
    CVec phi_at;            // phi at the finite ramification points
    CMat omega_at;          // g x (2g+2); column 2g+1 is P_inf
    Eigen::MatrixXi pairing;
    PeriodDiagnostics diag;

    int genus() const { return cfg.genus; }
    CVec omega_infinity() const { return omega_at.col(cfg.infinity_index()); }
};

inline void track(PeriodDiagnostics& d, const QuadReport& r) {
    d.max_nodes = std::max(d.max_nodes, r.nodes);
    d.max_error_estimate = std::max(d.max_error_estimate, r.error_estimate);
}

inline CVec monomials(cplx lam, int count) {
    CVec v(count);
    cplx p = 1.0;
    for (int k = 0; k < count; ++k, p *= lam) v[k] = p;
    return v;
}

inline PeriodData normalized_basis(const BranchConfig& cfg, const CanonicalBasis& basis, const QuadOptions& opt = {}) {
    require_valid(cfg);
    check_canonical(basis, cfg);
    const int g = cfg.genus;
    PeriodData pd;
    pd.cfg = cfg;
    pd.basis = basis;
    pd.a_raw.resize(g + 1, g);
    pd.b_raw.resize(g + 1, g);
    auto f = [g](cplx lam, cplx mu) -> CVec { return monomials(lam, g + 1) / mu; };
    for (int j = 0; j < g; ++j) {
        auto ra = integrate_cycle(cfg, basis.a[j], f, opt);
        pd.a_raw.col(j) = ra.first;
        track(pd.diag, ra.second);
        auto rb = integrate_cycle(cfg, basis.b[j], f, opt);
        pd.b_raw.col(j) = rb.first;
        track(pd.diag, rb.second);
    }
    Eigen::PartialPivLU<CMat> lu(pd.a_raw.topRows(g));
    pd.diag.a_condition = lu.rcond();
    if (!(pd.diag.a_condition > 1e-14)) throw singular_period_matrix("a-period matrix is numerically singular");
    pd.C = lu.inverse();
    pd.B = (pd.C * pd.b_raw.topRows(g)).transpose();
    for (int j = 0; j < g; ++j)
        if (pd.B(j, j).imag() < 0) {
            pd.basis.b[j].orientation *= -1;
            pd.b_raw.col(j) *= -1.0;
        }
    pd.B = (pd.C * pd.b_raw.topRows(g)).transpose();
    pd.pairing = pairing_mod2(pd.basis);

    pd.phi_at.resize(cfg.finite_count());
    pd.omega_at.resize(g, cfg.finite_count() + 1);
    for (int k = 0; k < cfg.finite_count(); ++k) {
        pd.phi_at[k] = phi_at_ramification(cfg, k);
        pd.omega_at.col(k) = pd.C * monomials(cfg.point(k), g) * pd.phi_at[k];
    }
    // Only lambda^(g-1) phi survives at P_inf, where it equals -2 d zeta.
    pd.omega_at.col(cfg.infinity_index()) = -2.0 * pd.C.col(g - 1);

    pd.diag.normalization_error = (pd.C * pd.a_raw.topRows(g) - CMat::Identity(g, g)).cwiseAbs().maxCoeff();
    pd.diag.symmetry_error = (pd.B - pd.B.transpose()).cwiseAbs().maxCoeff();
    for (int j = 0; j < g; ++j) {
        CVec q = CVec::Zero(g);
        q = pd.C.row(j).transpose();
        auto L = laurent_at_infinity(cfg, q);
        pd.diag.infinity_fit_error =
            std::max(pd.diag.infinity_fit_error, std::abs(L.coefficient(0) - pd.omega_at(j, cfg.infinity_index())));
    }
    return pd;
}

// Omega = -(lambda^g + c_{g-1} lambda^{g-1} + ... + c_0) d lambda / (2 mu) + alpha . omega,
// stored as Omega = Q(lambda) phi with Q given by q (lowest degree first).
struct OmegaDifferential {
    CVec alpha;
    CVec c;          // monic normalization polynomial, without the leading 1
    CVec q;          // g+1 coefficients of Q
    CVec beta;       // b-periods
    CVec beta_formula;  // 2 pi i omega(P_inf) + alpha B
    CVec a_periods;  // should reproduce alpha
    CVec values_at;  // Omega at the finite ramification points
    double leading_coefficient = 0.0;  // zeta^-2 coefficient at P_inf (should be 1)
    double residue_at_infinity = 0.0;  // |zeta^-1 coefficient|

    cplx value(int i) const { return values_at[i]; }
};

inline OmegaDifferential build_omega(const PeriodData& pd, const CVec& alpha) {
    const int g = pd.genus();
    if (alpha.size() != g) throw input_error("alpha must have genus entries");
    OmegaDifferential om;
    om.alpha = alpha;
    Eigen::PartialPivLU<CMat> lu(pd.a_raw.topRows(g).transpose());
    if (!(lu.rcond() > 1e-14)) throw singular_period_matrix("a-period matrix is numerically singular");
    om.c = lu.solve(CVec(-pd.a_raw.row(g).transpose()));
    om.q = CVec::Zero(g + 1);
    om.q.head(g) = -0.5 * om.c + pd.C.transpose() * alpha;
    om.q[g] = -0.5;
    om.a_periods = pd.a_raw.transpose() * om.q;
    om.beta = pd.b_raw.transpose() * om.q;
    om.beta_formula = two_pi_i * pd.omega_infinity() + pd.B.transpose() * alpha;
    om.values_at.resize(pd.cfg.finite_count());
    for (int k = 0; k < pd.cfg.finite_count(); ++k) om.values_at[k] = poly_eval(om.q, pd.cfg.point(k)) * pd.phi_at[k];
    auto L = laurent_at_infinity(pd.cfg, om.q);
    om.leading_coefficient = std::abs(L.coefficient(-2));
    om.residue_at_infinity = std::abs(L.coefficient(-1));
    return om;
}

inline OmegaDifferential build_omega(const PeriodData& pd) { return build_omega(pd, CVec::Zero(pd.genus())); }

// U = omega(P_inf) = beta / (2 pi i) for alpha = 0.
inline CVec wavevector_U(const PeriodData& pd) { return pd.omega_infinity(); }

// Bidifferential W evaluated at pairs of finite ramification points.
// For the base point P_k,
//   W(P, P_k) = phi(P) / (phi(P_k) (lambda - lambda_k)) + sum_i I(i, k) v_i(P),
// with I(., k) fixed by vanishing a-periods.
struct WTable {
    CMat I;   // g x (2g+1)
    CMat W;   // (2g+1) x (2g+1), diagonal unused
    double symmetry_error = 0.0;

    cplx operator()(int j, int k) const { return W(j, k); }
};

inline WTable build_w_table(const PeriodData& pd, const QuadOptions& opt = {}) {
    const BranchConfig& cfg = pd.cfg;
    const int g = cfg.genus, n = cfg.finite_count();
    CMat J(g, n);
    for (int a = 0; a < g; ++a) {
        auto f = [&](cplx lam, cplx mu) -> CVec {
            CVec v(n);
            for (int k = 0; k < n; ++k) v[k] = 1.0 / ((lam - cfg.point(k)) * mu);
            return v;
        };
        J.row(a) = integrate_cycle(cfg, pd.basis.a[a], f, opt).first.transpose();
    }
    std::vector<std::vector<cplx>> vp(g);
    for (int i = 0; i < g; ++i) vp[i] = v_polynomial(cfg, i);
    CMat Av(g, g);
    for (int a = 0; a < g; ++a)
        for (int i = 0; i < g; ++i) {
            cplx s = 0.0;
            for (size_t l = 0; l < vp[i].size(); ++l) s += vp[i][l] * pd.a_raw(l, a);
            Av(a, i) = s;
        }
    Eigen::PartialPivLU<CMat> lu(Av);
    if (!(lu.rcond() > 1e-14)) throw singular_period_matrix("a-periods of the v basis are singular");
    WTable T;
    T.I.resize(g, n);
    for (int k = 0; k < n; ++k) T.I.col(k) = lu.solve(CVec(-J.col(k) / pd.phi_at[k]));
    CMat V(g, n);
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < n; ++j) V(i, j) = v_at(cfg, i, j);
    T.W = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) continue;
            cplx w = pd.phi_at[j] / (pd.phi_at[k] * (cfg.point(j) - cfg.point(k)));
            for (int i = 0; i < g; ++i) w += T.I(i, k) * V(i, j);
            T.W(j, k) = w;
        }
    T.symmetry_error = (T.W - T.W.transpose()).cwiseAbs().maxCoeff();
    return T;
}

struct WEvaluation {
    int j = 0, k = 0;
    cplx value;
    CVec I;   // normalization constants for the base point P_k
};

inline WEvaluation eval_W_pair(const PeriodData& pd, int j, int k, const QuadOptions& opt = {}) {
    if (j == k) throw input_error("eval_W_pair needs two distinct ramification points");
    WTable T = build_w_table(pd, opt);
    return {j, k, T(j, k), T.I.col(k)};
}

}  // namespace hyperflow
