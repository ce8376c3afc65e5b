#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace hyperflow {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

// Coefficients are stored lowest degree first.
inline cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx r = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) r = r * z + *it;
    return r;
}

inline cplx poly_eval(const CVec& c, cplx z) {
    cplx r = 0.0;
    for (Eigen::Index k = c.size() - 1; k >= 0; --k) r = r * z + c[k];
    return r;
}

inline cplx poly_derivative_eval(const CVec& c, cplx z) {
    cplx r = 0.0;
    for (Eigen::Index k = c.size() - 1; k >= 1; --k) r = r * z + double(k) * c[k];
    return r;
}

// Monic polynomial with the given roots.
inline std::vector<cplx> poly_from_roots(const std::vector<cplx>& roots) {
    std::vector<cplx> c{1.0};
    for (cplx r : roots) {
        std::vector<cplx> n(c.size() + 1, 0.0);
        for (size_t k = 0; k < c.size(); ++k) {
            n[k + 1] += c[k];
            n[k] -= r * c[k];
        }
        c = std::move(n);
    }
    return c;
}

}  // namespace hyperflow
