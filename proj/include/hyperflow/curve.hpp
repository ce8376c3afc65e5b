#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "hyperflow/errors.hpp"
#include "hyperflow/poly.hpp"

namespace hyperflow {

// Curve mu^2 = lambda * prod(lambda - u_j) * prod(lambda - x_j).
//
// Finite branch points are indexed 0 -> lambda = 0, 1..g -> x_1..x_g,
// g+1..2g -> u_1..u_g. Index 2g+1 denotes the point at infinity where a
// table has a slot for it.
struct BranchConfig {
    int genus = 0;
    std::vector<cplx> x;
    std::vector<cplx> u;
    bool real = false;

    int finite_count() const { return 2 * genus + 1; }
    int infinity_index() const { return 2 * genus + 1; }
    static constexpr int zero_index() { return 0; }
    int x_index(int j) const { return 1 + j; }
    int u_index(int j) const { return 1 + genus + j; }
    bool is_u(int i) const { return i > genus && i <= 2 * genus; }
    bool is_x(int i) const { return i >= 1 && i <= genus; }

    cplx point(int i) const {
        if (i == 0) return 0.0;
        if (i <= genus) return x[i - 1];
        return u[i - 1 - genus];
    }

    std::vector<cplx> points() const {
        std::vector<cplx> p{0.0};
        p.insert(p.end(), x.begin(), x.end());
        p.insert(p.end(), u.begin(), u.end());
        return p;
    }

    std::string label(int i) const {
        if (i == 0) return "0";
        if (i == infinity_index()) return "inf";
        if (i <= genus) return "x" + std::to_string(i);
        return "u" + std::to_string(i - genus);
    }
};

inline BranchConfig make_config(std::vector<cplx> x, std::vector<cplx> u) {
    if (x.size() != u.size() || x.empty())
        throw input_error("x and u must be nonempty lists of equal length");
    BranchConfig c;
    c.genus = int(x.size());
    c.x = std::move(x);
    c.u = std::move(u);
    c.real = true;
    for (int i = 0; i < c.finite_count(); ++i)
        if (c.point(i).imag() != 0.0) c.real = false;
    return c;
}

inline BranchConfig make_real_config(const std::vector<double>& x, const std::vector<double>& u) {
    return make_config(std::vector<cplx>(x.begin(), x.end()), std::vector<cplx>(u.begin(), u.end()));
}

// Drop round-off imaginary parts (relative size below tol) from a
// configuration that is meant to be real.
inline BranchConfig real_projection(const BranchConfig& c, double tol = 1e-9) {
    double scale = 1.0;
    for (int i = 0; i < c.finite_count(); ++i) scale = std::max(scale, std::abs(c.point(i)));
    BranchConfig r = c;
    for (auto* v : {&r.x, &r.u})
        for (auto& z : *v) {
            if (std::abs(z.imag()) > tol * scale) throw ordering_violation("configuration is not real");
            z = z.real();
        }
    r.real = true;
    return r;
}

inline double min_separation(const BranchConfig& c) {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < c.finite_count(); ++i)
        for (int j = i + 1; j < c.finite_count(); ++j)
            m = std::min(m, std::abs(c.point(i) - c.point(j)));
    return m;
}

inline double max_modulus(const BranchConfig& c) {
    double m = 0.0;
    for (int i = 0; i < c.finite_count(); ++i) m = std::max(m, std::abs(c.point(i)));
    return m;
}

// Empty result means the configuration is admissible. With
// require_ordering the real interlacing 0 < u_1 < x_1 < ... < u_g < x_g
// is also checked.
inline std::vector<std::string> validate_config(const BranchConfig& c, bool require_ordering = false) {
    std::vector<std::string> v;
    if (c.genus < 1) v.push_back("genus must be positive");
    if (int(c.x.size()) != c.genus || int(c.u.size()) != c.genus) {
        v.push_back("x and u must each have genus entries");
        return v;
    }
    for (int i = 0; i < c.finite_count(); ++i) {
        cplx p = c.point(i);
        if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) v.push_back("non-finite branch point " + c.label(i));
    }
    for (int i = 0; i < c.finite_count(); ++i)
        for (int j = i + 1; j < c.finite_count(); ++j)
            if (c.point(i) == c.point(j)) {
                std::ostringstream os;
                os << "duplicate branch point " << c.point(j).real();
                if (c.point(j).imag() != 0.0) os << (c.point(j).imag() > 0 ? "+" : "") << c.point(j).imag() << "i";
                os << " (" << c.label(i) << ", " << c.label(j) << ")";
                v.push_back(os.str());
            }
    if (c.real)
        for (int i = 0; i < c.finite_count(); ++i)
            if (c.point(i).imag() != 0.0) v.push_back("real flag set but " + c.label(i) + " is not real");
    if (require_ordering) {
        bool ok = c.real;
        double prev = 0.0;
        for (int j = 0; ok && j < c.genus; ++j) {
            double uj = c.u[j].real(), xj = c.x[j].real();
            if (!(prev < uj && uj < xj)) ok = false;
            prev = xj;
        }
        if (!ok) v.push_back("ordering violated: expected 0 < u1 < x1 < ... < ug < xg");
    }
    return v;
}

inline void require_valid(const BranchConfig& c, bool require_ordering = false) {
    auto v = validate_config(c, require_ordering);
    if (v.empty()) return;
    std::string msg;
    for (auto& s : v) msg += (msg.empty() ? "" : "; ") + s;
    if (require_ordering && v.back().rfind("ordering", 0) == 0 && v.size() == 1) throw ordering_violation(msg);
    throw degenerate_config(msg);
}

// Finite branch points sorted by real part, then imaginary part.
inline std::vector<int> sorted_indices(const BranchConfig& c) {
    std::vector<int> idx(c.finite_count());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        cplx pa = c.point(a), pb = c.point(b);
        if (pa.real() != pb.real()) return pa.real() < pb.real();
        return pa.imag() < pb.imag();
    });
    return idx;
}

inline double default_clearance(const BranchConfig& c) { return 1e-3 * min_separation(c); }

// Square root with its cut along the downward vertical ray; positive on
// the positive reals.
inline cplx sqrt_down(cplx z) {
    static const cplx rot = std::polar(1.0, M_PI / 4);
    return rot * std::sqrt(cplx(0, -1) * z);
}

// Reference branch of mu: analytic off the downward rays from the branch
// points, hence analytic in the upper half plane, and positive on real
// lambda to the right of all real branch points. This is sheet +1.
inline cplx mu_reference(const BranchConfig& c, cplx lambda) {
    cplx r = 1.0;
    for (int i = 0; i < c.finite_count(); ++i) r *= sqrt_down(lambda - c.point(i));
    return r;
}

inline cplx curve_polynomial(const BranchConfig& c, cplx lambda) {
    cplx r = 1.0;
    for (int i = 0; i < c.finite_count(); ++i) r *= lambda - c.point(i);
    return r;
}

struct BranchOfMu {
    cplx lambda;
    cplx mu;
};

inline BranchOfMu start_branch(const BranchConfig& c, cplx lambda, int sheet = 1) {
    return {lambda, double(sheet) * mu_reference(c, lambda)};
}

inline double point_segment_distance(cplx p, cplx a, cplx b) {
    cplx d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(p - a);
    double t = std::clamp(std::real((p - a) * std::conj(d)) / len2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

// Analytic continuation of mu along a polyline starting at start.lambda.
// Each factor sqrt(lambda - lambda_i) is tracked through its accumulated
// argument, so the result does not depend on how finely the path is cut.
inline cplx mu_along_path(const BranchConfig& c, const std::vector<cplx>& path, const BranchOfMu& start,
                          double clearance = -1.0) {
    if (clearance < 0) clearance = default_clearance(c);
    const int n = c.finite_count();
    std::vector<cplx> pts{start.lambda};
    pts.insert(pts.end(), path.begin(), path.end());
    for (size_t s = 0; s + 1 < pts.size(); ++s)
        for (int i = 0; i < n; ++i)
            if (point_segment_distance(c.point(i), pts[s], pts[s + 1]) < clearance)
                throw path_too_close("path passes within clearance of branch point " + c.label(i));

    std::vector<double> arg(n);
    cplx value0 = 1.0;
    for (int i = 0; i < n; ++i) {
        cplx d = start.lambda - c.point(i);
        arg[i] = std::arg(d);
        value0 *= std::polar(std::sqrt(std::abs(d)), arg[i] / 2);
    }
    cplx sign = start.mu / value0;

    cplx cur = start.lambda;
    for (size_t s = 1; s < pts.size(); ++s) {
        cplx target = pts[s];
        while (cur != target) {
            double dmin = std::numeric_limits<double>::infinity();
            for (int i = 0; i < n; ++i) dmin = std::min(dmin, std::abs(cur - c.point(i)));
            cplx step = target - cur;
            double len = std::abs(step);
            cplx next = len <= 0.25 * dmin ? target : cur + step * (0.25 * dmin / len);
            for (int i = 0; i < n; ++i) arg[i] += std::arg((next - c.point(i)) / (cur - c.point(i)));
            cur = next;
        }
    }
    cplx value = 1.0;
    for (int i = 0; i < n; ++i) value *= std::polar(std::sqrt(std::abs(cur - c.point(i))), arg[i] / 2);
    return sign * value;
}

// phi = d lambda / mu evaluated at P_j in the local parameter
// sqrt(lambda - lambda_j): 2 / sqrt(prod_{i != j}(lambda_j - lambda_i)),
// principal square root.
inline cplx phi_at_ramification(const BranchConfig& c, int j) {
    cplx p = 1.0;
    for (int i = 0; i < c.finite_count(); ++i)
        if (i != j) p *= c.point(j) - c.point(i);
    if (p == 0.0) throw degenerate_config("coinciding branch points at " + c.label(j));
    return 2.0 / std::sqrt(p);
}

// Coefficients of prod_{i != m}(lambda - u_i) / (phi(P_{u_m}) prod_{i != m}(u_m - u_i)),
// so that v_m = (this polynomial) * phi.
inline std::vector<cplx> v_polynomial(const BranchConfig& c, int m) {
    std::vector<cplx> roots;
    cplx denom = phi_at_ramification(c, c.u_index(m));
    for (int i = 0; i < c.genus; ++i)
        if (i != m) {
            roots.push_back(c.u[i]);
            denom *= c.u[m] - c.u[i];
        }
    if (denom == 0.0) throw degenerate_config("coinciding u points");
    auto p = poly_from_roots(roots);
    for (auto& z : p) z /= denom;
    return p;
}

// v_m evaluated at the finite ramification point with index q.
inline cplx v_at(const BranchConfig& c, int m, int q) {
    if (c.is_u(q)) return (q == c.u_index(m)) ? 1.0 : 0.0;
    return poly_eval(v_polynomial(c, m), c.point(q)) * phi_at_ramification(c, q);
}

}  // namespace hyperflow
