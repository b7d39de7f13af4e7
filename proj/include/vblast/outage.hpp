// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_OUTAGE_HPP
#define VBLAST_OUTAGE_HPP

#include "vblast/distribution.hpp"

#include <cmath>
#include <span>
#include <utility>
#include <vector>

namespace vblast {

// Water-filling solution over the per-layer epsilon-quantile gains.
struct PowerAllocation {
    std::vector<double> rho; // per-layer powers, zero beyond the active set
    double mu = 0.0;         // water level
    int active = 0;          // number of layers with positive power (a prefix)
    double total = 0.0;
};

// Pr(log2(1 + gamma_layer * rho_i) <= rate) for the given layer.
double outage_probability(const LayerLaw &law, int layer, double rate, double rho_i);

// Largest rate with outage probability at most eps: log2(1 + F^{-1}(eps) rho_i).
double eps_outage_capacity(const LayerLaw &law, int layer, double eps, double rho_i);

// Water-fill a total power over fixed quantile gains g_i (linear units).
PowerAllocation waterfill_from_gains(std::span<const double> gains, double rho_total);

// Water-fill using g_i = F^{-1}_{gamma_i}(eps) for i = 1..t. Quantiles are
// cached per (law, eps).
PowerAllocation waterfill(const LayerLaw &law, double eps, double rho_total);

// Cached epsilon-quantile of one layer's gain distribution.
double quantile_gain(const LayerLaw &law, int layer, double eps);

// Decoding-order feedback cost: (log2(t!), ceil(log2(t!))).
std::pair<double, int> feedback_bits(int t);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

} // namespace vblast

#endif
