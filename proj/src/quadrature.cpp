// SPDX-License-Identifier: Apache-2.0
#include "vblast/quadrature.hpp"

#include "vblast/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace vblast {

namespace {

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    // Newton iteration on Legendre polynomials, Chebyshev starting guesses.
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-15)
                break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return rule;
}

struct AdaptiveState {
    const std::function<double(double)> *f;
    const GaussLegendreRule *rule;
    double abs_tol;
    int max_depth;
    bool converged;
};

double panel(const AdaptiveState &st, double a, double b) {
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < st.rule->nodes.size(); ++i)
        sum += st.rule->weights[i] * (*st.f)(mid + half * st.rule->nodes[i]);
    return half * sum;
}

double refine(AdaptiveState &st, double a, double b, double whole, double tol, int depth) {
    double mid = 0.5 * (a + b);
    double left = panel(st, a, mid);
    double right = panel(st, mid, b);
    double split = left + right;
    if (std::fabs(split - whole) <= tol || (b - a) < 1e-14 * (std::fabs(a) + 1.0))
        return split;
    if (depth >= st.max_depth) {
        st.converged = false;
        return split;
    }
    return refine(st, a, mid, left, 0.5 * tol, depth + 1) +
           refine(st, mid, b, right, 0.5 * tol, depth + 1);
}

} // namespace

const GaussLegendreRule &gauss_legendre(int n) {
    if (n < 2)
        throw parameter_error("gauss_legendre: order must be >= 2");
    static std::map<int, GaussLegendreRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double gl_integrate(const std::function<double(double)> &f, double a, double b, int n) {
    const GaussLegendreRule &rule = gauss_legendre(n);
    double mid = 0.5 * (a + b);
    double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double adaptive_integrate(const std::function<double(double)> &f, double a, double b,
                          double rel_tol, int nodes, int max_depth, bool *converged,
                          double abs_tol) {
    if (converged)
        *converged = true;
    if (!(b > a))
        return 0.0;
    AdaptiveState st{&f, &gauss_legendre(nodes), 0.0, max_depth, true};
    double whole = panel(st, a, b);
    st.abs_tol = std::max(rel_tol * std::max(std::fabs(whole), 1e-300), abs_tol);
    double result = refine(st, a, b, whole, st.abs_tol, 0);
    if (converged)
        *converged = st.converged;
    return result;
}

} // namespace vblast
