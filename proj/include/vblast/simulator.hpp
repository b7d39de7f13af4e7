// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_SIMULATOR_HPP
#define VBLAST_SIMULATOR_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace vblast {

// Monte Carlo draws of the first m greedy-ordered squared layer gains.
struct GainSamples {
    int t = 0;
    int r = 0;
    int m = 0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd gains; // n_trials x m, rows nonincreasing

    std::int64_t n_trials() const { return gains.rows(); }
};

// Row k comes from greedy_decompose(sample_channel(t, r, derive_stream(seed, k))).
// Bit-identical output for any worker count.
GainSamples simulate_gains(int t, int r, int m, std::int64_t n_trials, std::uint64_t seed,
                           int workers = 1);

// Occurrence counts of each greedy permutation, indexed by Lehmer rank.
// Requires t <= 6.
std::vector<std::int64_t> permutation_census(int t, int r, std::int64_t n_trials,
                                             std::uint64_t seed, int workers = 1);

// Chi-square p-value of counts against the uniform distribution over cells.
double census_chi_square_pvalue(std::span<const std::int64_t> counts);

struct IndependenceReport {
    // Largest |E{w_ij w_pq^H}| entry over projection-vector pairs from
    // different rows; near zero under the claimed independence.
    double max_cross_cov = 0.0;
    double cross_cov_threshold = 0.0; // 4 standard errors
    // Sample correlation of v_11 and v_22 across rows (near zero), and of the
    // same-row pair (v_21, v_22) (substantially positive).
    double cross_row_corr = 0.0;
    double within_row_corr = 0.0;
};

// Requires 2 <= m <= t.
IndependenceReport independence_probe(int t, int r, int m, std::int64_t n_trials,
                                      std::uint64_t seed, int workers = 1);

// Linear-algebra-free sampler for one natural-order row: suffix sums of r IID
// unit exponentials, truncated to min(i, m) entries. Same law as the
// Gaussian-channel row.
std::vector<double> sample_row_exponential(int r, int i, int m, std::uint64_t seed);

// Rank-based empirical CDF over a sample.
class EmpiricalCdf {
  public:
    explicit EmpiricalCdf(std::vector<double> samples);
    double operator()(double x) const;
    const std::vector<double> &sorted() const { return sorted_; }

  private:
    std::vector<double> sorted_;
};

// Normalized histogram over [lo, hi]; out-of-range samples are clamped into
// the edge bins so the densities integrate to one.
std::vector<double> histogram_density(std::span<const double> samples, int bins, double lo,
                                      double hi);

// Kolmogorov-Smirnov distance between a sample and a reference CDF evaluated
// at the sample points.
double ks_distance(std::span<const double> sorted_samples,
                   const std::function<double(double)> &cdf);

// Extracts one gain column from the sample matrix.
std::vector<double> gain_column(const GainSamples &samples, int layer);

} // namespace vblast

#endif
