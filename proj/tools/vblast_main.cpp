// SPDX-License-Identifier: Apache-2.0
//
// vblast: exact layer-gain laws of greedy-ordered zero-forcing V-BLAST and a
// Monte Carlo cross-check, exposed as CSV-producing subcommands.
#include "vblast/channel.hpp"
#include "vblast/combinatorics.hpp"
#include "vblast/distribution.hpp"
#include "vblast/errors.hpp"
#include "vblast/outage.hpp"
#include "vblast/quadrature.hpp"
#include "vblast/result_table.hpp"
#include "vblast/rng.hpp"
#include "vblast/simulator.hpp"
#include "vblast/special_functions.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

constexpr const char *kVersion = "1.0.0";

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitVerifyFailed = 3;

struct CommonOpts {
    int t = 2;
    int r = 2;
    std::uint64_t seed = 1;
    int workers = 0; // 0: use hardware concurrency
    std::string output;
    double rel_tol = 1e-7;
    double gamma_max = 0.0; // 0: derived from r
    bool quick = false;
};

void add_common(CLI::App *sub, CommonOpts &opts, bool wants_quad = true) {
    sub->add_option("--t", opts.t, "transmit antennas")->check(CLI::PositiveNumber);
    sub->add_option("--r", opts.r, "receive antennas")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "base RNG seed");
    sub->add_option("--workers", opts.workers, "worker threads (0 = all cores)")
        ->envname("VBLAST_WORKERS");
    sub->add_option("-o,--output", opts.output, "output CSV path (default stdout)");
    sub->add_flag("--quick", opts.quick, "reduced trial counts for fast runs");
    if (wants_quad) {
        sub->add_option("--rel-tol", opts.rel_tol, "quadrature relative tolerance");
        sub->add_option("--gamma-max", opts.gamma_max, "gain-domain truncation (0 = auto)");
    }
    sub->set_config("--config", "", "plain key=value config file; flags take precedence");
}

int effective_workers(int workers) {
    if (workers > 0)
        return workers;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    return hw > 0 ? hw : 1;
}

vblast::QuadratureSettings quad_of(const CommonOpts &opts) {
    vblast::QuadratureSettings q;
    q.rel_tol = opts.rel_tol;
    q.gamma_max = opts.gamma_max;
    return q;
}

void stamp(vblast::ResultTable &table, const std::string &cmd, const CommonOpts &opts) {
    table.add_meta("tool", std::string("vblast ") + kVersion);
    table.add_meta("command", cmd);
    table.add_meta("t", std::to_string(opts.t));
    table.add_meta("r", std::to_string(opts.r));
    table.add_meta("seed", std::to_string(opts.seed));
}

// Output is byte-identical for identical config + seed, so volatile facts
// (wall time, worker count) go to stderr rather than into the CSV.
void emit(const vblast::ResultTable &table, const CommonOpts &opts,
          std::chrono::steady_clock::time_point started) {
    if (opts.output.empty()) {
        table.write_csv(std::cout);
    } else {
        std::ofstream out(opts.output);
        if (!out)
            throw vblast::parameter_error("output: cannot open '" + opts.output + "'");
        table.write_csv(out);
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    std::cerr << "wall_ms=" << ms << "\n";
}

std::int64_t trials_of(double trials_flag, bool quick) {
    double v = quick ? std::min(trials_flag, 1e5) : trials_flag;
    if (v < 0.0 || v != std::floor(v) || v > 4e9)
        throw vblast::parameter_error("trials: must be a nonnegative integer");
    return static_cast<std::int64_t>(v);
}

// ---------------------------------------------------------------------------

int cmd_pdf(const CommonOpts &opts, const std::vector<int> &layers, double trials_flag,
            int bins, double xmax) {
    auto started = std::chrono::steady_clock::now();
    if (bins < 1)
        throw vblast::parameter_error("bins: must be positive");
    if (!(xmax > 0.0))
        throw vblast::parameter_error("xmax: must be positive");
    const std::int64_t trials = trials_of(trials_flag, opts.quick);

    int max_layer = 1;
    std::vector<vblast::LayerLaw> laws;
    for (int layer : layers) {
        laws.emplace_back(opts.t, opts.r, layer, quad_of(opts));
        max_layer = std::max(max_layer, layer);
    }

    vblast::ResultTable table;
    table.columns = {"gamma"};
    for (int layer : layers)
        table.columns.push_back("pdf_" + std::to_string(layer));
    std::vector<std::vector<double>> hists;
    if (trials > 0) {
        vblast::GainSamples samples = vblast::simulate_gains(
            opts.t, opts.r, max_layer, trials, opts.seed, effective_workers(opts.workers));
        for (int layer : layers) {
            auto col = vblast::gain_column(samples, layer);
            hists.push_back(vblast::histogram_density(col, bins, 0.0, xmax));
            table.columns.push_back("hist_" + std::to_string(layer));
        }
    }

    stamp(table, "pdf", opts);
    table.add_meta("trials", std::to_string(trials));
    table.add_meta("bins", std::to_string(bins));
    table.add_meta("xmax", vblast::format_float(xmax));

    const double width = xmax / bins;
    for (int b = 0; b < bins; ++b) {
        std::vector<double> row{(b + 0.5) * width};
        for (std::size_t i = 0; i < layers.size(); ++i)
            row.push_back(vblast::marginal_pdf(laws[i], layers[i], row[0]));
        for (const auto &hist : hists)
            row.push_back(hist[static_cast<std::size_t>(b)]);
        table.add_row(std::move(row));
    }
    emit(table, opts, started);
    return kExitOk;
}

int cmd_outage(const CommonOpts &opts, double rate, const std::string &rho_spec,
               const std::string &scale_name) {
    auto started = std::chrono::steady_clock::now();
    if (!(rate > 0.0))
        throw vblast::parameter_error("rate: must be positive");
    vblast::SweepScale scale = vblast::parse_scale(scale_name);
    vblast::Sweep sweep = vblast::parse_sweep(rho_spec, scale);

    std::vector<vblast::LayerLaw> laws;
    for (int layer = 1; layer <= opts.t; ++layer)
        laws.emplace_back(opts.t, opts.r, layer, quad_of(opts));

    vblast::ResultTable table;
    table.columns = {scale == vblast::SweepScale::Db ? "rho_db" : "rho"};
    for (int layer = 1; layer <= opts.t; ++layer)
        table.columns.push_back("outage_" + std::to_string(layer));
    stamp(table, "outage", opts);
    table.add_meta("rate", vblast::format_float(rate));
    table.add_meta("rho", rho_spec);
    table.add_meta("scale", scale_name);

    for (double x : sweep.values()) {
        double rho = scale == vblast::SweepScale::Db ? vblast::db_to_linear(x) : x;
        std::vector<double> row{x};
        for (int layer = 1; layer <= opts.t; ++layer)
            row.push_back(vblast::outage_probability(laws[static_cast<std::size_t>(layer - 1)],
                                                     layer, rate, rho / opts.t));
        table.add_row(std::move(row));
    }
    emit(table, opts, started);
    return kExitOk;
}

int cmd_capacity(const CommonOpts &opts, double eps, const std::string &rho_spec,
                 const std::string &scale_name) {
    auto started = std::chrono::steady_clock::now();
    if (!(eps > 0.0 && eps < 1.0))
        throw vblast::parameter_error("eps: must lie in (0, 1)");
    vblast::SweepScale scale = vblast::parse_scale(scale_name);
    vblast::Sweep sweep = vblast::parse_sweep(rho_spec, scale);

    vblast::LayerLaw law(opts.t, opts.r, opts.t, quad_of(opts));

    vblast::ResultTable table;
    table.columns = {scale == vblast::SweepScale::Db ? "rho_db" : "rho"};
    for (int layer = 1; layer <= opts.t; ++layer)
        table.columns.push_back("cap_" + std::to_string(layer));
    table.columns.push_back("cap_sum");
    for (int layer = 1; layer <= opts.t; ++layer)
        table.columns.push_back("base_" + std::to_string(layer));
    table.columns.push_back("base_sum");

    stamp(table, "capacity", opts);
    table.add_meta("eps", vblast::format_float(eps));
    table.add_meta("rho", rho_spec);
    table.add_meta("scale", scale_name);
    auto [fb_exact, fb_ceil] = vblast::feedback_bits(opts.t);
    table.add_meta("feedback_bits", vblast::format_float(fb_exact));
    table.add_meta("feedback_bits_ceil", std::to_string(fb_ceil));

    for (double x : sweep.values()) {
        double rho = scale == vblast::SweepScale::Db ? vblast::db_to_linear(x) : x;
        std::vector<double> row{x};
        double sum = 0.0;
        for (int layer = 1; layer <= opts.t; ++layer) {
            double c = vblast::eps_outage_capacity(law, layer, eps, rho / opts.t);
            sum += c;
            row.push_back(c);
        }
        row.push_back(sum);
        double base_sum = 0.0;
        for (int layer = 1; layer <= opts.t; ++layer) {
            double g = vblast::baseline_inverse_cdf(opts.r, layer, eps);
            double c = std::log2(1.0 + g * rho / opts.t);
            base_sum += c;
            row.push_back(c);
        }
        row.push_back(base_sum);
        table.add_row(std::move(row));
    }
    emit(table, opts, started);
    return kExitOk;
}

int cmd_waterfill(const CommonOpts &opts, const std::string &eps_spec,
                  const std::string &rho_db_spec) {
    auto started = std::chrono::steady_clock::now();
    vblast::Sweep eps_sweep = vblast::parse_sweep(eps_spec, vblast::SweepScale::Linear);
    vblast::Sweep rho_sweep = vblast::parse_sweep(rho_db_spec, vblast::SweepScale::Db);
    if (eps_sweep.points > 1 && rho_sweep.points > 1)
        throw vblast::parameter_error("waterfill: sweep either eps or rho-db, not both");
    const bool eps_axis = rho_sweep.points == 1;

    vblast::LayerLaw law(opts.t, opts.r, opts.t, quad_of(opts));

    vblast::ResultTable table;
    table.columns = {eps_axis ? "eps" : "rho_db"};
    for (int layer = 1; layer <= opts.t; ++layer)
        table.columns.push_back("inv_g_" + std::to_string(layer));
    table.columns.push_back("mu");
    for (int layer = 1; layer <= opts.t; ++layer)
        table.columns.push_back("rho_" + std::to_string(layer));
    table.columns.push_back("active");
    stamp(table, "waterfill", opts);
    table.add_meta("eps", eps_spec);
    table.add_meta("rho_db", rho_db_spec);

    for (double x : (eps_axis ? eps_sweep : rho_sweep).values()) {
        double eps = eps_axis ? x : eps_sweep.start;
        double rho = vblast::db_to_linear(eps_axis ? rho_sweep.start : x);
        vblast::PowerAllocation alloc = vblast::waterfill(law, eps, rho);
        std::vector<double> row{x};
        for (int layer = 1; layer <= opts.t; ++layer)
            row.push_back(1.0 / vblast::quantile_gain(law, layer, eps));
        row.push_back(alloc.mu);
        for (double p : alloc.rho)
            row.push_back(p);
        row.push_back(static_cast<double>(alloc.active));
        table.add_row(std::move(row));
    }
    emit(table, opts, started);
    return kExitOk;
}

int cmd_simulate(const CommonOpts &opts, int m, double trials_flag) {
    auto started = std::chrono::steady_clock::now();
    const std::int64_t trials = trials_of(trials_flag, opts.quick);
    if (trials < 1)
        throw vblast::parameter_error("trials: must be positive");
    if (m == 0)
        m = opts.t;
    vblast::GainSamples samples = vblast::simulate_gains(opts.t, opts.r, m, trials, opts.seed,
                                                         effective_workers(opts.workers));
    vblast::ResultTable table;
    table.columns = {"trial"};
    for (int j = 1; j <= m; ++j)
        table.columns.push_back("gamma_" + std::to_string(j));
    stamp(table, "simulate", opts);
    table.add_meta("m", std::to_string(m));
    table.add_meta("trials", std::to_string(trials));
    for (std::int64_t k = 0; k < trials; ++k) {
        std::vector<double> row{static_cast<double>(k)};
        for (int j = 0; j < m; ++j)
            row.push_back(samples.gains(k, j));
        table.add_row(std::move(row));
    }
    emit(table, opts, started);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify: re-derives the library's closed forms from quadrature oracles and
// cross-checks the Monte Carlo path; prints one row per check.

struct Check {
    std::string name;
    double expected;
    double got;
    double tol;
    bool pass;
};

class Verifier {
  public:
    void add(const std::string &name, double expected, double got, double tol) {
        bool pass = std::fabs(got - expected) <= tol;
        checks_.push_back({name, expected, got, tol, pass});
    }
    void add_below(const std::string &name, double bound, double got) {
        checks_.push_back({name, bound, got, bound, got < bound});
    }
    void add_above(const std::string &name, double bound, double got) {
        checks_.push_back({name, bound, got, bound, got > bound});
    }

    int report(std::ostream &os) const {
        int failed = 0;
        os << "check,expected,got,tolerance,status\n";
        for (const auto &c : checks_) {
            os << c.name << "," << vblast::format_float(c.expected) << ","
               << vblast::format_float(c.got) << "," << vblast::format_float(c.tol) << ","
               << (c.pass ? "PASS" : "FAIL") << "\n";
            if (!c.pass)
                ++failed;
        }
        os << "# " << (checks_.size() - static_cast<std::size_t>(failed)) << "/"
           << checks_.size() << " checks passed\n";
        return failed;
    }

  private:
    std::vector<Check> checks_;
};

double nested_integral_ij(std::span<const double> gamma) {
    const std::size_t j = gamma.size();
    if (j == 1)
        return std::exp(-gamma[0]);
    struct Rec {
        std::span<const double> gamma;
        double eval(std::size_t s, double lower) const {
            if (s == 1)
                return std::exp(-lower) - std::exp(-gamma[0]);
            return vblast::adaptive_integrate([&](double v) { return eval(s - 1, v); }, lower,
                                              gamma[s - 1], 1e-11);
        }
    } rec{gamma};
    return rec.eval(j - 1, gamma[j - 1]);
}

double nested_integral_j(std::span<const double> gamma, int r) {
    const std::size_t m = gamma.size();
    std::vector<double> buf(gamma.begin(), gamma.end());
    return vblast::adaptive_integrate(
        [&](double z) {
            buf[m - 1] = z;
            return std::pow(z, r - static_cast<int>(m)) /
                   vblast::factorial(r - static_cast<int>(m)) * nested_integral_ij(buf);
        },
        0.0, gamma[m - 1], 1e-11);
}

double nested_wilks_g(std::span<const double> alpha) {
    struct Rec {
        std::span<const double> alpha;
        double eval(std::size_t level, double lower) const {
            double upper = alpha[level];
            if (level + 1 == alpha.size())
                return upper - lower;
            return vblast::adaptive_integrate([&](double x) { return eval(level + 1, x); },
                                              lower, upper, 1e-11);
        }
    } rec{alpha};
    return rec.eval(0, 0.0);
}

double cone_mass(const vblast::LayerLaw &law) {
    struct Rec {
        const vblast::LayerLaw &law;
        std::vector<double> x;
        double eval(int level, double upper) {
            if (level == law.m)
                return vblast::joint_pdf(law, x);
            return vblast::adaptive_integrate(
                [&](double v) {
                    x[static_cast<std::size_t>(level)] = v;
                    return eval(level + 1, v);
                },
                0.0, upper, 1e-5);
        }
    } rec{law, std::vector<double>(static_cast<std::size_t>(law.m), 0.0)};
    return rec.eval(0, law.quad.gamma_max);
}

// Dense CDF table with linear interpolation, for KS checks against large
// Monte Carlo samples without a quadrature call per sample point.
class CdfTable {
  public:
    CdfTable(const vblast::LayerLaw &law, int layer, double hi, int points) : hi_(hi) {
        values_.reserve(static_cast<std::size_t>(points) + 1);
        for (int i = 0; i <= points; ++i)
            values_.push_back(vblast::marginal_cdf(law, layer, hi * i / points));
    }
    double operator()(double x) const {
        if (x <= 0.0)
            return 0.0;
        if (x >= hi_)
            return values_.back();
        double pos = x / hi_ * (static_cast<double>(values_.size()) - 1.0);
        std::size_t idx = static_cast<std::size_t>(pos);
        double frac = pos - static_cast<double>(idx);
        return values_[idx] * (1.0 - frac) + values_[idx + 1] * frac;
    }

  private:
    double hi_;
    std::vector<double> values_;
};

int cmd_verify(const CommonOpts &opts, double trials_flag) {
    auto started = std::chrono::steady_clock::now();
    const std::int64_t trials = trials_of(trials_flag, opts.quick);
    const int workers = effective_workers(opts.workers);
    Verifier v;
    vblast::SampleStream rng(opts.seed, 0xFEED);

    // composition counts
    const std::int64_t catalan[] = {1, 2, 5, 14, 42, 132, 429, 1430, 4862};
    bool catalan_ok = true;
    for (int k = 0; k <= 8; ++k)
        catalan_ok &= static_cast<std::int64_t>(vblast::constrained_compositions(k).size()) ==
                      catalan[k];
    v.add("composition_counts_catalan", 1.0, catalan_ok ? 1.0 : 0.0, 0.0);

    // Wilks G vs nested quadrature
    double g_err = 0.0;
    for (int k = 1; k <= 4; ++k)
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> alpha(static_cast<std::size_t>(k + 1));
            for (auto &a : alpha)
                a = 0.05 + 6.0 * rng.next_uniform();
            std::sort(alpha.begin(), alpha.end());
            double want = nested_wilks_g(alpha);
            g_err = std::max(g_err, std::fabs(vblast::wilks_g(alpha) - want) / std::fabs(want));
        }
    v.add_below("wilks_g_vs_quadrature_rel", 1e-7, g_err);

    // I_j vs nested quadrature, 100 random ordered vectors
    double ij_err = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        int j = 2 + static_cast<int>(rng.next_u64() % 4);
        std::vector<double> gamma(static_cast<std::size_t>(j));
        for (auto &g : gamma)
            g = 6.0 * rng.next_uniform();
        std::sort(gamma.begin(), gamma.end(), std::greater<>());
        double want = nested_integral_ij(gamma);
        ij_err = std::max(ij_err,
                          std::fabs(vblast::integral_ij(gamma) - want) / std::fabs(want));
    }
    v.add_below("integral_ij_vs_quadrature_rel", 1e-8, ij_err);

    // J vs nested quadrature, 100 random ordered vectors
    double j_err = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % 4);
        int r = m + static_cast<int>(rng.next_u64() % 3);
        std::vector<double> gamma(static_cast<std::size_t>(m));
        for (auto &g : gamma)
            g = 0.1 + 5.9 * rng.next_uniform();
        std::sort(gamma.begin(), gamma.end(), std::greater<>());
        double want = nested_integral_j(gamma, r);
        j_err = std::max(j_err,
                         std::fabs(vblast::integral_j(gamma, r) - want) / std::fabs(want));
    }
    v.add_below("integral_j_vs_quadrature_rel", 1e-8, j_err);

    // layer-1 closed form
    double l1_err = 0.0;
    for (auto [t, r] : {std::pair{2, 2}, {3, 4}, {4, 4}}) {
        vblast::LayerLaw law(t, r, 1);
        for (int i = 0; i <= 40; ++i) {
            double x = 0.1 + (3.0 * r - 0.1) * i / 40.0;
            l1_err = std::max(l1_err, std::fabs(vblast::marginal_cdf(law, 1, x) -
                                                std::pow(vblast::reg_lower_gamma(r, x), t)));
        }
    }
    v.add_below("layer1_cdf_closed_form_abs", 1e-6, l1_err);

    // joint normalization
    v.add("joint_mass_t2_r2_m2", 1.0, cone_mass(vblast::LayerLaw(2, 2, 2)), 1e-3);
    v.add("joint_mass_t3_r4_m3", 1.0, cone_mass(vblast::LayerLaw(3, 4, 3)), 1e-3);

    // permutation equiprobability
    auto counts = vblast::permutation_census(3, 4, trials, opts.seed, workers);
    v.add_above("census_chi2_pvalue_t3_r4", 0.001, vblast::census_chi_square_pvalue(counts));

    // cross-row projection-vector covariance
    std::int64_t probe_n = std::min<std::int64_t>(trials, 200000);
    auto rep = vblast::independence_probe(3, 4, 2, probe_n, opts.seed + 1, workers);
    v.add_below("cross_row_cov_max", rep.cross_cov_threshold, rep.max_cross_cov);
    v.add_above("within_row_corr", 0.1, rep.within_row_corr);

    // exponential suffix-sum sampler vs the analytic row law, per coordinate
    {
        const int n = 100000;
        std::vector<double> c1(n), c2(n);
        for (int k = 0; k < n; ++k) {
            auto row = vblast::sample_row_exponential(
                4, 2, 2, vblast::derive_stream(opts.seed + 2, static_cast<std::uint64_t>(k)));
            c1[static_cast<std::size_t>(k)] = row[0];
            c2[static_cast<std::size_t>(k)] = row[1];
        }
        std::sort(c1.begin(), c1.end());
        std::sort(c2.begin(), c2.end());
        v.add_below("exp_row_ks_coord1", 0.01, vblast::ks_distance(c1, [](double x) {
                        return vblast::reg_lower_gamma(4.0, x);
                    }));
        v.add_below("exp_row_ks_coord2", 0.01, vblast::ks_distance(c2, [](double x) {
                        return vblast::reg_lower_gamma(3.0, x);
                    }));
    }

    // Monte Carlo layer gains vs analytic CDFs
    {
        const double ks_tol = opts.quick ? 0.012 : 0.005;
        vblast::GainSamples samples =
            vblast::simulate_gains(3, 4, 3, trials, opts.seed + 3, workers);
        for (int layer = 1; layer <= 3; ++layer) {
            vblast::LayerLaw law(3, 4, layer);
            CdfTable cdf(law, layer, 30.0, 1500);
            auto col = vblast::gain_column(samples, layer);
            std::sort(col.begin(), col.end());
            v.add_below("mc_vs_analytic_ks_layer" + std::to_string(layer), ks_tol,
                        vblast::ks_distance(col, [&](double x) { return cdf(x); }));
        }
    }

    // water-filling feasibility and KKT on random instances
    {
        double worst = 0.0;
        bool structure_ok = true;
        for (int repn = 0; repn < 1000; ++repn) {
            int t = 1 + static_cast<int>(rng.next_u64() % 6);
            std::vector<double> gains(static_cast<std::size_t>(t));
            for (auto &g : gains)
                g = std::exp(3.0 * (rng.next_uniform() - 0.5));
            std::sort(gains.begin(), gains.end(), std::greater<>());
            double rho = std::pow(10.0, 3.0 * rng.next_uniform() - 1.0);
            auto alloc = vblast::waterfill_from_gains(gains, rho);
            double sum = 0.0;
            for (double p : alloc.rho)
                sum += p;
            worst = std::max(worst, std::fabs(sum - rho) / rho);
            for (int i = 0; i < t; ++i) {
                double p = alloc.rho[static_cast<std::size_t>(i)];
                if (i < alloc.active)
                    structure_ok &= p > 0.0 &&
                                    std::fabs(p + 1.0 / gains[static_cast<std::size_t>(i)] -
                                              alloc.mu) < 1e-9 * alloc.mu;
                else
                    structure_ok &=
                        p == 0.0 && 1.0 / gains[static_cast<std::size_t>(i)] >= alloc.mu - 1e-12;
            }
        }
        v.add_below("waterfill_power_budget_rel", 1e-9, worst);
        v.add("waterfill_kkt_prefix_active", 1.0, structure_ok ? 1.0 : 0.0, 0.0);
    }

    int failed = 0;
    if (opts.output.empty()) {
        failed = v.report(std::cout);
    } else {
        std::ofstream out(opts.output);
        if (!out)
            throw vblast::parameter_error("output: cannot open '" + opts.output + "'");
        failed = v.report(out);
    }
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - started)
                  .count();
    std::cerr << "wall_ms=" << ms << "\n";
    return failed == 0 ? kExitOk : kExitVerifyFailed;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Greedy-ordered zero-forcing V-BLAST layer-gain laws"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("vblast ") + kVersion);

    CommonOpts pdf_opts, outage_opts, cap_opts, wf_opts, sim_opts, verify_opts;

    auto *pdf = app.add_subcommand("pdf", "analytic marginal PDFs with optional MC histograms");
    std::string pdf_layers = "1";
    double pdf_trials = 1e6;
    int pdf_bins = 100;
    double pdf_xmax = 12.0;
    add_common(pdf, pdf_opts);
    pdf->add_option("--layers", pdf_layers, "comma-separated layer indices");
    pdf->add_option("--trials", pdf_trials, "MC trials for histograms (0 disables)");
    pdf->add_option("--bins", pdf_bins, "histogram bins");
    pdf->add_option("--xmax", pdf_xmax, "upper edge of the gain grid");

    auto *outage = app.add_subcommand("outage", "per-layer outage probability vs power");
    double outage_rate = 1.0;
    std::string outage_rho = "0:25:26", outage_scale = "db";
    add_common(outage, outage_opts);
    outage->add_option("--rate", outage_rate, "target rate, bits/s/Hz per layer");
    outage->add_option("--rho", outage_rho, "total power sweep start:stop:points");
    outage->add_option("--scale", outage_scale, "sweep scale: db|linear|log");

    auto *capacity = app.add_subcommand("capacity", "per-layer eps-outage capacity vs power");
    double cap_eps = 0.1;
    std::string cap_rho = "0:25:26", cap_scale = "db";
    add_common(capacity, cap_opts);
    capacity->add_option("--eps", cap_eps, "outage level");
    capacity->add_option("--rho", cap_rho, "total power sweep start:stop:points");
    capacity->add_option("--scale", cap_scale, "sweep scale: db|linear|log");

    auto *waterfill = app.add_subcommand("waterfill", "water-filling over quantile gains");
    std::string wf_eps = "0.01:0.5:50", wf_rho_db = "5";
    add_common(waterfill, wf_opts);
    waterfill->add_option("--eps", wf_eps, "outage level (sweepable)");
    waterfill->add_option("--rho-db", wf_rho_db, "total power in dB (sweepable)");

    auto *simulate = app.add_subcommand("simulate", "raw Monte Carlo gain samples");
    int sim_m = 0;
    double sim_trials = 1e4;
    add_common(simulate, sim_opts, false);
    simulate->add_option("--m", sim_m, "retained layers (0 = t)");
    simulate->add_option("--trials", sim_trials, "number of channel draws");

    auto *verify = app.add_subcommand("verify", "oracle and cross-validation suite");
    double verify_trials = 1e6;
    add_common(verify, verify_opts);
    verify->add_option("--trials", verify_trials, "MC trials for statistical checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (pdf->parsed())
            return cmd_pdf(pdf_opts, vblast::parse_int_list(pdf_layers), pdf_trials, pdf_bins,
                           pdf_xmax);
        if (outage->parsed())
            return cmd_outage(outage_opts, outage_rate, outage_rho, outage_scale);
        if (capacity->parsed())
            return cmd_capacity(cap_opts, cap_eps, cap_rho, cap_scale);
        if (waterfill->parsed())
            return cmd_waterfill(wf_opts, wf_eps, wf_rho_db);
        if (simulate->parsed())
            return cmd_simulate(sim_opts, sim_m, sim_trials);
        if (verify->parsed())
            return cmd_verify(verify_opts, verify_trials);
    } catch (const vblast::parameter_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const vblast::degenerate_input_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const vblast::numeric_error &e) {
        std::cerr << "error: " << e.what() << " (estimate " << e.estimate() << ")\n";
        return kExitNumeric;
    }
    return kExitValidation;
}
