#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include <boost/math/special_functions/legendre.hpp>

#include "hyperflow/errors.hpp"
#include "hyperflow/poly.hpp"

namespace hyperflow {

struct QuadOptions {
    double tol = 1e-10;
    int min_nodes = 32;
    int max_nodes = 1 << 18;
};

struct QuadReport {
    int nodes = 0;
    double error_estimate = 0.0;
};

// Trapezoidal rule on [0, 2pi) for a periodic vector-valued integrand,
// doubling the node count until two successive estimates agree.
template <class F>
std::pair<CVec, QuadReport> trapezoid_periodic(F&& f, const QuadOptions& opt) {
    int n = opt.min_nodes;
    CVec sum = f(0.0);
    for (int k = 1; k < n; ++k) sum += f(2 * M_PI * k / n);
    CVec prev = sum * (2 * M_PI / n);
    while (true) {
        CVec add = CVec::Zero(sum.size());
        for (int k = 0; k < n; ++k) add += f(2 * M_PI * (k + 0.5) / n);
        sum += add;
        n *= 2;
        CVec cur = sum * (2 * M_PI / n);
        double err = (cur - prev).cwiseAbs().maxCoeff();
        double scale = std::max(1.0, cur.cwiseAbs().maxCoeff());
        if (err <= opt.tol * scale) return {cur, {n, err}};
        if (n >= opt.max_nodes) throw no_convergence("trapezoid rule did not converge with " + std::to_string(n) + " nodes");
        prev = cur;
    }
}

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
    GaussRule r;
    auto zeros = boost::math::legendre_p_zeros<double>(n);
    for (double z : zeros) {
        double dp = boost::math::legendre_p_prime(n, z);
        double w = 2.0 / ((1 - z * z) * dp * dp);
        r.nodes.push_back(z);
        r.weights.push_back(w);
        if (z != 0.0) {
            r.nodes.push_back(-z);
            r.weights.push_back(w);
        }
    }
    return r;
}

// Gauss-Legendre on [a, b] with doubling of the order.
template <class F>
std::pair<cplx, QuadReport> gauss_legendre_adaptive(F&& f, double a, double b, const QuadOptions& opt) {
    int n = 16;
    cplx prev = 0.0;
    bool have_prev = false;
    while (true) {
        auto rule = gauss_legendre(n);
        cplx s = 0.0;
        for (size_t k = 0; k < rule.nodes.size(); ++k)
            s += rule.weights[k] * f(0.5 * (a + b) + 0.5 * (b - a) * rule.nodes[k]);
        s *= 0.5 * (b - a);
        if (have_prev) {
            double err = std::abs(s - prev);
            if (err <= opt.tol * std::max(1.0, std::abs(s))) return {s, {n, err}};
        }
        if (n >= 1024) throw no_convergence("Gauss-Legendre did not converge");
        prev = s;
        have_prev = true;
        n *= 2;
    }
}

// Gauss-Chebyshev (midpoint rule in the angle) for
// int_0^pi s(theta) d theta with s smooth and even-periodic.
template <class F>
std::pair<cplx, QuadReport> chebyshev_angle_adaptive(F&& f, const QuadOptions& opt) {
    int n = 16;
    cplx sum = 0.0;
    for (int k = 0; k < n; ++k) sum += f(M_PI * (k + 0.5) / n);
    cplx prev = sum * (M_PI / n);
    while (true) {
        // Tripling keeps the old midpoints as a subset of the new ones.
        cplx add = 0.0;
        for (int k = 0; k < n; ++k) {
            add += f(M_PI * (3 * k + 0.5) / (3 * n));
            add += f(M_PI * (3 * k + 2.5) / (3 * n));
        }
        sum += add;
        n *= 3;
        cplx cur = sum * (M_PI / n);
        double err = std::abs(cur - prev);
        if (err <= opt.tol * std::max(1.0, std::abs(cur))) return {cur, {n, err}};
        if (n > opt.max_nodes) throw no_convergence("Gauss-Chebyshev rule did not converge");
        prev = cur;
    }
}

}  // namespace hyperflow
