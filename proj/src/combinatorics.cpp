// SPDX-License-Identifier: Apache-2.0
#include "vblast/combinatorics.hpp"

#include "vblast/errors.hpp"
#include "vblast/special_functions.hpp"

#include <array>
#include <cmath>
#include <mutex>

namespace vblast {

namespace {

void enumerate_parts(int k, int pos, int prefix_sum, Composition &current,
                     std::vector<Composition> &out) {
    const int total = k + 1;
    if (pos == k) {
        current[static_cast<std::size_t>(k)] = total - prefix_sum;
        out.push_back(current);
        return;
    }
    // b_1 + ... + b_{pos+1} <= pos+1 and the remaining parts stay nonnegative.
    int cap = (pos + 1) - prefix_sum;
    for (int b = 0; b <= cap; ++b) {
        current[static_cast<std::size_t>(pos)] = b;
        enumerate_parts(k, pos + 1, prefix_sum + b, current, out);
    }
}

double binom(int n, int c) { return factorial(n) / (factorial(c) * factorial(n - c)); }

// x^n for small nonnegative integer n; much cheaper than std::pow here.
double ipow(double x, int n) {
    double out = 1.0;
    for (; n > 0; n >>= 1, x *= x)
        if (n & 1)
            out *= x;
    return out;
}

void require_nondecreasing(std::span<const double> alpha, const char *what) {
    for (std::size_t i = 0; i + 1 < alpha.size(); ++i)
        if (alpha[i] > alpha[i + 1])
            throw parameter_error(std::string(what) + ": arguments must be nondecreasing");
    if (!alpha.empty() && alpha[0] < 0.0)
        throw parameter_error(std::string(what) + ": arguments must be nonnegative");
}

void require_nonincreasing(std::span<const double> gamma, const char *what) {
    for (std::size_t i = 0; i + 1 < gamma.size(); ++i)
        if (gamma[i] < gamma[i + 1])
            throw parameter_error(std::string(what) + ": arguments must be nonincreasing");
    if (!gamma.empty() && gamma[gamma.size() - 1] < 0.0)
        throw parameter_error(std::string(what) + ": arguments must be nonnegative");
}

} // namespace

const std::vector<Composition> &constrained_compositions(int k) {
    if (k < 0)
        throw parameter_error("constrained_compositions: k must be >= 0");
    if (k > kMaxCompositionOrder)
        throw parameter_error("constrained_compositions: k exceeds enumeration cap");
    // Lock-free after first use per k; this sits on the quadrature hot path.
    static std::array<std::once_flag, kMaxCompositionOrder + 1> flags;
    static std::array<std::vector<Composition>, kMaxCompositionOrder + 1> cache;
    std::call_once(flags[static_cast<std::size_t>(k)], [k] {
        std::vector<Composition> out;
        Composition current(static_cast<std::size_t>(k + 1), 0);
        enumerate_parts(k, 0, 0, current, out);
        cache[static_cast<std::size_t>(k)] = std::move(out);
    });
    return cache[static_cast<std::size_t>(k)];
}

double wilks_g(std::span<const double> alpha) {
    if (alpha.empty())
        throw parameter_error("wilks_g: empty argument");
    require_nondecreasing(alpha, "wilks_g");
    const int k = static_cast<int>(alpha.size()) - 1;
    if (k == 0)
        return alpha[0];
    double total = 0.0;
    for (const Composition &parts : constrained_compositions(k)) {
        // parts[i] holds b_{i+1}; the exponent of (alpha_{i+1} - alpha_i) is
        // b_{k+1-i} and alpha_1 carries b_{k+1}.
        double term = ipow(alpha[0], parts[static_cast<std::size_t>(k)]);
        for (int i = 1; i <= k; ++i)
            term *= ipow(alpha[static_cast<std::size_t>(i)] - alpha[static_cast<std::size_t>(i - 1)],
                         parts[static_cast<std::size_t>(k - i)]);
        double denom = 1.0;
        for (int b : parts)
            denom *= factorial(b);
        total += term / denom;
    }
    return total;
}

double integral_ij(std::span<const double> gamma) {
    if (gamma.empty())
        throw parameter_error("integral_ij: empty argument");
    require_nonincreasing(gamma, "integral_ij");
    const int j = static_cast<int>(gamma.size());
    if (j == 1)
        return std::exp(-gamma[0]);
    // e^{-gamma_j} - e^{-gamma_{j-1}} without cancellation for near-ties.
    double result = std::exp(-gamma[static_cast<std::size_t>(j - 2)]) *
                    std::expm1(gamma[static_cast<std::size_t>(j - 2)] - gamma[static_cast<std::size_t>(j - 1)]);
    double alpha[kMaxCompositionOrder + 1];
    for (int k = 0; k <= j - 3; ++k) {
        for (int i = 0; i <= k; ++i)
            alpha[i] = gamma[static_cast<std::size_t>(j - 2 - i)];
        std::span<const double> args(alpha, static_cast<std::size_t>(k + 1));
        const double g_hi = wilks_g(args);
        alpha[0] = gamma[static_cast<std::size_t>(j - 1)];
        const double g_lo = wilks_g(args);
        result -= std::exp(-gamma[static_cast<std::size_t>(j - k - 3)]) * (g_hi - g_lo);
    }
    return result;
}

double integral_j(std::span<const double> gamma, int r) {
    if (gamma.empty())
        throw parameter_error("integral_j: empty argument");
    const int m = static_cast<int>(gamma.size());
    if (r < m)
        throw parameter_error("integral_j: requires r >= m");
    require_nonincreasing(gamma, "integral_j");
    if (m == 1)
        return reg_lower_gamma(static_cast<double>(r), gamma[0]);

    const int q = r - m;
    const double gm = gamma[static_cast<std::size_t>(m - 1)];
    const double gm_pow = ipow(gm, q + 1) / factorial(q + 1);
    double result = reg_lower_gamma(q + 1.0, gm) -
                    std::exp(-gamma[static_cast<std::size_t>(m - 2)]) * gm_pow;

    double alpha[kMaxCompositionOrder + 1];
    for (int k = 0; k <= m - 3; ++k) {
        for (int i = 0; i <= k; ++i)
            alpha[i] = gamma[static_cast<std::size_t>(m - 2 - i)];
        const double g_full = wilks_g(std::span<const double>(alpha, static_cast<std::size_t>(k + 1)));
        const double a2 = (k >= 1) ? alpha[1] : 0.0;

        // Integral of z^{r-m}/(r-m)! G(z, alpha_2, ..., alpha_{k+1}) dz over
        // [0, gamma_m], term by term with (alpha_2 - z)^{b_k} expanded.
        double gz = 0.0;
        for (const Composition &parts : constrained_compositions(k)) {
            double tail = 1.0;
            for (int i = 2; i <= k; ++i)
                tail *= ipow(alpha[i] - alpha[i - 1], parts[static_cast<std::size_t>(k - i)]);
            double denom = 1.0;
            for (int b : parts)
                denom *= factorial(b);
            const int bk1 = parts[static_cast<std::size_t>(k)];
            const int bk = (k >= 1) ? parts[static_cast<std::size_t>(k - 1)] : 0;
            double inner = 0.0;
            double sign = 1.0;
            for (int c = 0; c <= bk; ++c) {
                inner += binom(bk, c) * ipow(a2, bk - c) * sign * ipow(gm, bk1 + c + q + 1) /
                         ((bk1 + c + q + 1) * factorial(q));
                sign = -sign;
            }
            gz += tail / denom * inner;
        }
        result -= std::exp(-gamma[static_cast<std::size_t>(m - k - 3)]) * (g_full * gm_pow - gz);
    }
    return result;
}

double upper_gamma_int(int s, double x) {
    if (s < 1)
        throw parameter_error("upper_gamma_int: s must be >= 1");
    if (x < 0.0)
        throw parameter_error("upper_gamma_int: x must be nonnegative");
    double sum = 1.0;
    double term = 1.0;
    for (int k = 1; k < s; ++k) {
        term *= x / k;
        sum += term;
    }
    return factorial(s - 1) * std::exp(-x) * sum;
}

} // namespace vblast
