// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_COMBINATORICS_HPP
#define VBLAST_COMBINATORICS_HPP

#include <span>
#include <vector>

namespace vblast {

// Nonnegative integer parts (b_1, ..., b_{k+1}) with b_1 + ... + b_{k+1} = k+1
// and every prefix sum b_1 + ... + b_n <= n for n in {1, ..., k}.
using Composition = std::vector<int>;

// Exhaustive, duplicate-free enumeration of the constrained compositions for a
// given k. There are Catalan(k+1) of them. Memoized; k <= 12.
const std::vector<Composition> &constrained_compositions(int k);

inline constexpr int kMaxCompositionOrder = 12;

// Wilks' nested-integral sum over constrained compositions. Arguments must be
// nondecreasing; returns G(alpha_1, ..., alpha_{k+1}).
double wilks_g(std::span<const double> alpha);

// The ordered-region multiple integral over e^{-v}; gamma is a nonincreasing
// vector (gamma_1, ..., gamma_j). For j = 1 this is e^{-gamma_1}.
double integral_ij(std::span<const double> gamma);

// Exponentiated-bracket integral: the integral of z^{r-m}/(r-m)! times the
// innermost ordered-region integral, from 0 to gamma_m, in closed form.
// gamma is nonincreasing of length m; requires r >= m. For m = 1 this is the
// regularized lower incomplete gamma P(r, gamma_1).
double integral_j(std::span<const double> gamma, int r);

// Upper incomplete gamma at integer order: (s-1)! e^{-x} sum_{k<s} x^k/k!.
double upper_gamma_int(int s, double x);

} // namespace vblast

#endif
