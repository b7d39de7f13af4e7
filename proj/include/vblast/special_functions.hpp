// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_SPECIAL_FUNCTIONS_HPP
#define VBLAST_SPECIAL_FUNCTIONS_HPP

namespace vblast {

// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double reg_lower_gamma(double a, double x);

// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double reg_upper_gamma(double a, double x);

// Survival function of the chi-squared distribution with dof degrees of
// freedom, i.e. Pr(X > x).
double chi_square_sf(double x, int dof);

// Exact factorial as double; exact integers up to 20!, floating beyond.
double factorial(int n);

// log2(n!)
double log2_factorial(int n);

} // namespace vblast

#endif
