// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_DISTRIBUTION_HPP
#define VBLAST_DISTRIBUTION_HPP

#include "vblast/quadrature.hpp"

#include <span>

namespace vblast {

// Exact law of the first m ordered squared layer gains for t transmit and r
// receive antennas (t <= r) under IID Rayleigh fading with greedy ordering.
struct LayerLaw {
    int t = 1;
    int r = 1;
    int m = 1;
    QuadratureSettings quad;

    LayerLaw(int t_, int r_, int m_, QuadratureSettings q = {});
};

// Joint PDF of (gamma_1, ..., gamma_m); zero outside the ordered cone
// gamma_1 >= ... >= gamma_m >= 0.
double joint_pdf(const LayerLaw &law, std::span<const double> gamma);

// Joint density of one natural-order row (v_{i1}, ..., v_{i,min(i,m)}); the
// full unordered joint density is the product over rows.
double unordered_row_pdf(int r, int i, int m, std::span<const double> v);

// Marginal PDF of gamma_layer, by nested adaptive quadrature of the joint PDF
// over the other coordinates (1 <= layer <= m).
double marginal_pdf(const LayerLaw &law, int layer, double x);

// Marginal CDF of gamma_layer; exact [P(r,x)]^t for layer 1, quadrature with
// the innermost dimension closed analytically otherwise.
double marginal_cdf(const LayerLaw &law, int layer, double x);

// Bisection inverse of marginal_cdf; |F(result) - eps| <= 1e-6.
double inverse_cdf(const LayerLaw &law, int layer, double eps);

// Least-squares slope of log F vs log x over x in {1e-3, 3e-3, 1e-2};
// approaches (t-layer+1)(r-layer+1) as x -> 0.
double diversity_slope(const LayerLaw &law, int layer);

// No-ordering baseline (identity permutation): layer i gain is chi-squared
// with 2(r-i+1) degrees of freedom.
double baseline_cdf(int r, int layer, double x);
double baseline_inverse_cdf(int r, int layer, double eps);

// Default domain truncation for a given receive antenna count.
double default_gamma_max(int r);

} // namespace vblast

#endif
