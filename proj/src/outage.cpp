// SPDX-License-Identifier: Apache-2.0
#include "vblast/outage.hpp"

#include "vblast/errors.hpp"
#include "vblast/special_functions.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace vblast {

double outage_probability(const LayerLaw &law, int layer, double rate, double rho_i) {
    if (!(rate > 0.0))
        throw parameter_error("outage_probability: rate must be positive");
    if (!(rho_i > 0.0))
        throw parameter_error("outage_probability: rho_i must be positive");
    const double threshold = (std::exp2(rate) - 1.0) / rho_i;
    return marginal_cdf(law, layer, threshold);
}

double quantile_gain(const LayerLaw &law, int layer, double eps) {
    using Key = std::tuple<int, int, int, double, double, double>;
    static std::map<Key, double> cache;
    static std::mutex mutex;
    Key key{law.t, law.r, layer, eps, law.quad.gamma_max, law.quad.rel_tol};
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(key);
        if (it != cache.end())
            return it->second;
    }
    LayerLaw per_layer(law.t, law.r, layer, law.quad);
    double g = inverse_cdf(per_layer, layer, eps);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, g);
    return g;
}

double eps_outage_capacity(const LayerLaw &law, int layer, double eps, double rho_i) {
    if (rho_i < 0.0)
        throw parameter_error("eps_outage_capacity: rho_i must be nonnegative");
    if (rho_i == 0.0)
        return 0.0;
    return std::log2(1.0 + quantile_gain(law, layer, eps) * rho_i);
}

PowerAllocation waterfill_from_gains(std::span<const double> gains, double rho_total) {
    if (gains.empty())
        throw parameter_error("waterfill_from_gains: empty gain vector");
    if (!(rho_total > 0.0))
        throw parameter_error("waterfill_from_gains: rho_total must be positive");
    for (double g : gains)
        if (!(g > 0.0))
            throw parameter_error("waterfill_from_gains: gains must be positive");
    const int t = static_cast<int>(gains.size());

    PowerAllocation alloc;
    alloc.rho.assign(static_cast<std::size_t>(t), 0.0);
    alloc.total = rho_total;
    // Largest active prefix whose water level clears 1/g_k.
    double inv_sum = 0.0;
    for (double g : gains)
        inv_sum += 1.0 / g;
    for (int k = t; k >= 1; --k) {
        double mu = (rho_total + inv_sum) / k;
        if (mu - 1.0 / gains[static_cast<std::size_t>(k - 1)] > 0.0) {
            alloc.mu = mu;
            alloc.active = k;
            for (int i = 0; i < k; ++i)
                alloc.rho[static_cast<std::size_t>(i)] =
                    std::max(0.0, mu - 1.0 / gains[static_cast<std::size_t>(i)]);
            return alloc;
        }
        inv_sum -= 1.0 / gains[static_cast<std::size_t>(k - 1)];
    }
    throw numeric_error("waterfill_from_gains: no feasible active set", 0.0);
}

PowerAllocation waterfill(const LayerLaw &law, double eps, double rho_total) {
    if (!(eps > 0.0 && eps < 1.0))
        throw parameter_error("waterfill: eps must lie in (0, 1)");
    std::vector<double> gains(static_cast<std::size_t>(law.t));
    for (int i = 1; i <= law.t; ++i)
        gains[static_cast<std::size_t>(i - 1)] = quantile_gain(law, i, eps);
    return waterfill_from_gains(gains, rho_total);
}

std::pair<double, int> feedback_bits(int t) {
    if (t < 1)
        throw parameter_error("feedback_bits: t must be >= 1");
    double exact = log2_factorial(t);
    return {exact, static_cast<int>(std::ceil(exact - 1e-12))};
}

} // namespace vblast
