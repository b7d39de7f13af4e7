// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_QUADRATURE_HPP
#define VBLAST_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace vblast {

// Gauss-Legendre nodes and weights on [-1, 1]; cached per order.
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendreRule &gauss_legendre(int n);

struct QuadratureSettings {
    int nodes = 20;         // per-panel Gauss-Legendre order; high order keeps
                            // panel counts small in nested integrals
    double gamma_max = 0.0; // domain truncation; 0 means pick from r
    double rel_tol = 1e-7;
    int max_depth = 32;
};

// Fixed-order Gauss-Legendre on [a, b].
double gl_integrate(const std::function<double(double)> &f, double a, double b, int n);

// Adaptive bisection with per-panel Gauss-Legendre estimates. The tolerance is
// relative to the magnitude of the whole-interval estimate; abs_tol adds an
// absolute floor so that regions negligible on the caller's scale are not
// refined forever (closed forms can be pure rounding noise there). When
// converged is non-null it is set to false if any panel hit max_depth.
double adaptive_integrate(const std::function<double(double)> &f, double a, double b,
                          double rel_tol, int nodes = 12, int max_depth = 32,
                          bool *converged = nullptr, double abs_tol = 0.0);

} // namespace vblast

#endif
