// SPDX-License-Identifier: Apache-2.0
#include "vblast/distribution.hpp"

#include "vblast/combinatorics.hpp"
#include "vblast/errors.hpp"
#include "vblast/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace vblast {

LayerLaw::LayerLaw(int t_, int r_, int m_, QuadratureSettings q) : t(t_), r(r_), m(m_), quad(q) {
    if (m < 1 || m > t || t > r)
        throw parameter_error("LayerLaw: requires 1 <= m <= t <= r");
    if (quad.gamma_max == 0.0)
        quad.gamma_max = default_gamma_max(r);
    if (quad.gamma_max <= 0.0)
        throw parameter_error("LayerLaw: gamma_max must be positive");
    if (quad.nodes < 8)
        throw parameter_error("LayerLaw: quadrature nodes must be >= 8");
    if (quad.rel_tol <= 0.0 || quad.rel_tol > 1e-2)
        throw parameter_error("LayerLaw: rel_tol must be in (0, 1e-2]");
}

double default_gamma_max(int r) { return 8.0 + 3.0 * r; }

namespace {

bool ordered_support(std::span<const double> gamma) {
    for (std::size_t i = 0; i + 1 < gamma.size(); ++i)
        if (gamma[i] < gamma[i + 1])
            return false;
    return gamma.empty() || gamma[gamma.size() - 1] >= 0.0;
}

double ipow(double x, int n) {
    double out = 1.0;
    for (; n > 0; n >>= 1, x *= x)
        if (n & 1)
            out *= x;
    return out;
}

// gamma_j^{r-j}/(r-j)! * I_j evaluated on the prefix (gamma_1, ..., gamma_j).
double layer_factor(const LayerLaw &law, std::span<const double> prefix) {
    const int j = static_cast<int>(prefix.size());
    const double gj = prefix[static_cast<std::size_t>(j - 1)];
    return ipow(gj, law.r - j) / factorial(law.r - j) * integral_ij(prefix);
}

// Nested adaptive integrator over the ordered cone. Coordinates 1..dims are
// integrated in order; coordinate `fixed_at` (0 = none) is pinned to
// fixed_value; the upper range of coordinate `clip_at` (0 = none) is capped
// at clip_value. leaf(gamma, prev) is called with all dims coordinates set.
struct ConeIntegrator {
    const LayerLaw &law;
    int dims;
    int fixed_at = 0;
    double fixed_value = 0.0;
    int clip_at = 0;
    double clip_value = 0.0;
    double kink_at = -1.0; // split every level's range here (derivative kink)
    double top;            // outermost upper bound
    std::function<double(std::span<const double>, double)> leaf;
    std::vector<double> gamma;
    bool converged = true;
    bool coarse = false;     // low-order pilot pass, no adaptivity
    double abs_floor = 0.0;  // absolute tolerance on the final value

    double run() {
        gamma.assign(static_cast<std::size_t>(dims), 0.0);
        // Pilot pass fixes the overall scale so the adaptive pass can skip
        // regions whose contribution is negligible: near the cone's origin
        // the closed forms cancel almost completely and a purely relative
        // tolerance would chase rounding noise with unbounded refinement.
        coarse = true;
        double pilot = recurse(1, std::numeric_limits<double>::infinity(), 1.0, 1.0);
        coarse = false;
        abs_floor = 1e-3 * law.quad.rel_tol * std::fabs(pilot);
        return recurse(1, std::numeric_limits<double>::infinity(), 1.0, 1.0);
    }

    // outer = product of every factor multiplying this subtree's value.
    double recurse(int j, double prev, double partial, double outer) {
        if (j > dims)
            return partial * leaf(std::span<const double>(gamma.data(), static_cast<std::size_t>(dims)), prev);
        double hi = std::min(prev, top);
        double lo = (fixed_at > j) ? fixed_value : 0.0;
        if (j == clip_at)
            hi = std::min(hi, clip_value);
        if (j == fixed_at) {
            if (fixed_value > prev)
                return 0.0;
            gamma[static_cast<std::size_t>(j - 1)] = fixed_value;
            double f = layer_factor(law, std::span<const double>(gamma.data(), static_cast<std::size_t>(j)));
            return recurse(j + 1, fixed_value, partial * f, outer);
        }
        if (!(hi > lo))
            return 0.0;
        // Tighter tolerance for inner dimensions.
        double rel = law.quad.rel_tol;
        for (int d = 1; d < j; ++d)
            rel *= 0.5;
        double scale = outer * std::fabs(partial);
        // keep panels on one side of any derivative kink
        double result = (kink_at > lo && kink_at < hi)
                            ? integrate(j, lo, kink_at, rel, scale) + integrate(j, kink_at, hi, rel, scale)
                            : integrate(j, lo, hi, rel, scale);
        return partial * result;
    }

    double integrate(int j, double lo, double hi, double rel, double scale) {
        auto integrand = [&](double g) {
            gamma[static_cast<std::size_t>(j - 1)] = g;
            double f = layer_factor(law, std::span<const double>(gamma.data(), static_cast<std::size_t>(j)));
            return recurse(j + 1, g, f, scale);
        };
        if (coarse)
            return gl_integrate(integrand, lo, hi, 8);
        bool ok = true;
        double abs_tol = abs_floor / std::max(scale, 1e-300);
        double result = adaptive_integrate(integrand, lo, hi, rel, law.quad.nodes,
                                           law.quad.max_depth, &ok, abs_tol);
        if (!ok)
            converged = false;
        return result;
    }
};

double checked(const ConeIntegrator &integ, double value, const char *what) {
    if (!integ.converged) {
        std::ostringstream msg;
        msg << what << ": quadrature failed to converge (estimate " << value << ")";
        throw numeric_error(msg.str(), value);
    }
    return value;
}

void check_layer(const LayerLaw &law, int layer) {
    if (layer < 1 || layer > law.m)
        throw parameter_error("layer must satisfy 1 <= layer <= m");
}

} // namespace

double joint_pdf(const LayerLaw &law, std::span<const double> gamma) {
    if (static_cast<int>(gamma.size()) != law.m)
        throw parameter_error("joint_pdf: gamma length must equal m");
    if (!ordered_support(gamma))
        return 0.0;
    double value = factorial(law.t) / factorial(law.t - law.m);
    for (int j = 1; j <= law.m; ++j)
        value *= layer_factor(law, gamma.subspan(0, static_cast<std::size_t>(j)));
    if (law.t > law.m)
        value *= std::pow(integral_j(gamma, law.r), law.t - law.m);
    return std::max(value, 0.0);
}

double unordered_row_pdf(int r, int i, int m, std::span<const double> v) {
    if (i < 1 || m < 1 || r < std::min(i, m))
        throw parameter_error("unordered_row_pdf: invalid dimensions");
    const int len = std::min(i, m);
    if (static_cast<int>(v.size()) != len)
        throw parameter_error("unordered_row_pdf: v length must be min(i, m)");
    if (!ordered_support(v))
        return 0.0;
    const int j = (i <= m) ? i : m;
    return std::pow(v[static_cast<std::size_t>(len - 1)], r - j) / factorial(r - j) *
           std::exp(-v[0]);
}

double marginal_cdf(const LayerLaw &law, int layer, double x) {
    check_layer(law, layer);
    if (x <= 0.0)
        return 0.0;
    const int mm = law.m;
    const int t = law.t;
    const int power = t - mm + 1;
    const double scale = factorial(t) / (factorial(t - mm) * power);

    ConeIntegrator integ{law, mm - 1};
    integ.top = law.quad.gamma_max;
    if (layer < mm) {
        integ.clip_at = layer;
        integ.clip_value = x;
    } else if (mm > 1) {
        integ.kink_at = x; // min(prev, x) kinks every level at x
    }
    std::vector<double> full(static_cast<std::size_t>(mm), 0.0);
    integ.leaf = [&](std::span<const double> gamma, double prev) {
        double jup = std::isinf(prev) ? x : ((layer == mm) ? std::min(prev, x) : prev);
        if (!(jup > 0.0))
            return 0.0;
        std::copy(gamma.begin(), gamma.end(), full.begin());
        full[static_cast<std::size_t>(mm - 1)] = jup;
        double j_val = integral_j(full, law.r);
        return ipow(std::max(j_val, 0.0), power);
    };
    double value = scale * integ.run();
    checked(integ, value, "marginal_cdf");
    return std::clamp(value, 0.0, 1.0);
}

double marginal_pdf(const LayerLaw &law, int layer, double x) {
    check_layer(law, layer);
    if (x < 0.0)
        return 0.0;
    const int mm = law.m;
    const int t = law.t;
    const double top = std::max(law.quad.gamma_max, 2.0 * x);

    if (layer == mm) {
        // Integrate the joint over gamma_1 >= ... >= gamma_{m-1} >= x.
        ConeIntegrator integ{law, mm - 1};
        integ.top = top;
        integ.fixed_at = mm; // below every free coordinate
        integ.fixed_value = x;
        std::vector<double> full(static_cast<std::size_t>(mm), 0.0);
        integ.leaf = [&](std::span<const double> gamma, double) {
            std::copy(gamma.begin(), gamma.end(), full.begin());
            full[static_cast<std::size_t>(mm - 1)] = x;
            double v = layer_factor(law, full);
            if (t > mm)
                v *= ipow(std::max(integral_j(full, law.r), 0.0), t - mm);
            return v;
        };
        double value = factorial(t) / factorial(t - mm) * integ.run();
        return std::max(checked(integ, value, "marginal_pdf"), 0.0);
    }

    // layer < m: the innermost coordinate integrates analytically into the
    // exponentiated bracket, leaving an (m-2)-dimensional cone integral.
    const int power = t - mm + 1;
    ConeIntegrator integ{law, mm - 1};
    integ.top = top;
    integ.fixed_at = layer;
    integ.fixed_value = x;
    std::vector<double> full(static_cast<std::size_t>(mm), 0.0);
    integ.leaf = [&](std::span<const double> gamma, double prev) {
        std::copy(gamma.begin(), gamma.end(), full.begin());
        full[static_cast<std::size_t>(mm - 1)] = prev;
        return ipow(std::max(integral_j(full, law.r), 0.0), power);
    };
    double value = factorial(t) / (factorial(t - mm) * power) * integ.run();
    return std::max(checked(integ, value, "marginal_pdf"), 0.0);
}

double inverse_cdf(const LayerLaw &law, int layer, double eps) {
    check_layer(law, layer);
    if (!(eps > 0.0 && eps < 1.0))
        throw parameter_error("inverse_cdf: eps must lie in (0, 1)");
    double hi = law.quad.gamma_max;
    LayerLaw wide = law;
    for (int expand = 0; marginal_cdf(wide, layer, hi) < eps; ++expand) {
        if (expand >= 12)
            throw numeric_error("inverse_cdf: failed to bracket the quantile", hi);
        hi *= 2.0;
        wide.quad.gamma_max = hi;
    }
    double lo = 0.0;
    double mid = 0.5 * hi;
    for (int iter = 0; iter < 60; ++iter) {
        mid = 0.5 * (lo + hi);
        double f = marginal_cdf(wide, layer, mid);
        if (std::fabs(f - eps) <= 1e-6)
            return mid;
        (f < eps ? lo : hi) = mid;
        if (hi - lo <= 1e-12 * std::max(hi, 1.0))
            break;
    }
    return mid;
}

double diversity_slope(const LayerLaw &law, int layer) {
    check_layer(law, layer);
    const double xs[] = {1e-3, 3e-3, 1e-2};
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (double x : xs) {
        double f = marginal_cdf(law, layer, x);
        if (f < 1e-300)
            throw numeric_error("diversity_slope: CDF underflow, use a larger x grid", f);
        double lx = std::log(x);
        double ly = std::log(f);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = 3.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double baseline_cdf(int r, int layer, double x) {
    if (layer < 1 || layer > r)
        throw parameter_error("baseline_cdf: requires 1 <= layer <= r");
    if (x <= 0.0)
        return 0.0;
    return reg_lower_gamma(static_cast<double>(r - layer + 1), x);
}

double baseline_inverse_cdf(int r, int layer, double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw parameter_error("baseline_inverse_cdf: eps must lie in (0, 1)");
    double hi = 1.0;
    while (baseline_cdf(r, layer, hi) < eps)
        hi *= 2.0;
    double lo = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        double mid = 0.5 * (lo + hi);
        (baseline_cdf(r, layer, mid) < eps ? lo : hi) = mid;
        if (hi - lo <= 1e-14 * std::max(hi, 1.0))
            break;
    }
    return 0.5 * (lo + hi);
}

} // namespace vblast
