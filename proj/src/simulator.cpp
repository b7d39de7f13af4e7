// SPDX-License-Identifier: Apache-2.0
#include "vblast/simulator.hpp"

#include "vblast/channel.hpp"
#include "vblast/errors.hpp"
#include "vblast/rng.hpp"
#include "vblast/special_functions.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace vblast {

namespace {

constexpr std::int64_t kBlockSize = 8192;

int clamp_workers(int workers) {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1)
        hw = 1;
    return std::clamp(workers, 1, std::max(hw, 1));
}

// Runs fn(block_index, first_trial, last_trial) over disjoint trial blocks.
// Block boundaries are independent of the worker count, so block-local
// accumulations reduce to identical totals for any parallelism.
template <typename Fn>
void parallel_blocks(std::int64_t n_trials, int workers, Fn &&fn) {
    const std::int64_t n_blocks = (n_trials + kBlockSize - 1) / kBlockSize;
    workers = clamp_workers(workers);
    if (workers == 1 || n_blocks == 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b)
            fn(b, b * kBlockSize, std::min(n_trials, (b + 1) * kBlockSize));
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                std::int64_t b = next.fetch_add(1);
                if (b >= n_blocks)
                    return;
                fn(b, b * kBlockSize, std::min(n_trials, (b + 1) * kBlockSize));
            }
        });
    for (auto &th : pool)
        th.join();
}

int lehmer_rank(std::span<const int> perm) {
    const int n = static_cast<int>(perm.size());
    int rank = 0;
    for (int i = 0; i < n; ++i) {
        int smaller = 0;
        for (int j = i + 1; j < n; ++j)
            if (perm[static_cast<std::size_t>(j)] < perm[static_cast<std::size_t>(i)])
                ++smaller;
        rank = rank * (n - i) + smaller;
    }
    return rank;
}

struct MomentAcc {
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    void add(double x, double y) {
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    void merge(const MomentAcc &o) {
        sx += o.sx;
        sy += o.sy;
        sxx += o.sxx;
        syy += o.syy;
        sxy += o.sxy;
    }
    double corr(double n) const {
        double cov = sxy / n - (sx / n) * (sy / n);
        double vx = sxx / n - (sx / n) * (sx / n);
        double vy = syy / n - (sy / n) * (sy / n);
        return cov / std::sqrt(std::max(vx * vy, 1e-300));
    }
};

} // namespace

GainSamples simulate_gains(int t, int r, int m, std::int64_t n_trials, std::uint64_t seed,
                           int workers) {
    if (t < 1 || t > r)
        throw parameter_error("simulate_gains: requires 1 <= t <= r");
    if (m < 1 || m > t)
        throw parameter_error("simulate_gains: requires 1 <= m <= t");
    if (n_trials < 1)
        throw parameter_error("simulate_gains: n_trials must be >= 1");
    GainSamples out;
    out.t = t;
    out.r = r;
    out.m = m;
    out.seed = seed;
    out.gains.resize(n_trials, m);
    parallel_blocks(n_trials, workers, [&](std::int64_t, std::int64_t first, std::int64_t last) {
        for (std::int64_t k = first; k < last; ++k) {
            ChannelMatrix h = sample_channel(t, r, derive_stream(seed, static_cast<std::uint64_t>(k)));
            GreedyDecomposition gd = greedy_decompose(h);
            for (int j = 0; j < m; ++j)
                out.gains(k, j) = gd.gains(j);
        }
    });
    return out;
}

std::vector<std::int64_t> permutation_census(int t, int r, std::int64_t n_trials,
                                             std::uint64_t seed, int workers) {
    if (t > 6)
        throw parameter_error("permutation_census: t must be <= 6");
    if (t < 1 || t > r || n_trials < 1)
        throw parameter_error("permutation_census: invalid dimensions");
    const std::size_t cells = static_cast<std::size_t>(factorial(t));
    const std::int64_t n_blocks = (n_trials + kBlockSize - 1) / kBlockSize;
    std::vector<std::vector<std::int64_t>> partial(static_cast<std::size_t>(n_blocks),
                                                   std::vector<std::int64_t>(cells, 0));
    parallel_blocks(n_trials, workers, [&](std::int64_t b, std::int64_t first, std::int64_t last) {
        auto &local = partial[static_cast<std::size_t>(b)];
        for (std::int64_t k = first; k < last; ++k) {
            ChannelMatrix h = sample_channel(t, r, derive_stream(seed, static_cast<std::uint64_t>(k)));
            GreedyDecomposition gd = greedy_decompose(h);
            ++local[static_cast<std::size_t>(lehmer_rank(gd.perm))];
        }
    });
    std::vector<std::int64_t> counts(cells, 0);
    for (const auto &local : partial)
        for (std::size_t c = 0; c < cells; ++c)
            counts[c] += local[c];
    return counts;
}

double census_chi_square_pvalue(std::span<const std::int64_t> counts) {
    if (counts.empty())
        throw parameter_error("census_chi_square_pvalue: empty counts");
    if (counts.size() == 1)
        return 1.0;
    double n = 0.0;
    for (std::int64_t c : counts)
        n += static_cast<double>(c);
    const double expected = n / static_cast<double>(counts.size());
    double stat = 0.0;
    for (std::int64_t c : counts) {
        double d = static_cast<double>(c) - expected;
        stat += d * d / expected;
    }
    return chi_square_sf(stat, static_cast<int>(counts.size()) - 1);
}

IndependenceReport independence_probe(int t, int r, int m, std::int64_t n_trials,
                                      std::uint64_t seed, int workers) {
    if (t < 2 || t > r || m < 2 || m > t)
        throw parameter_error("independence_probe: requires 2 <= m <= t <= r");
    if (n_trials < 2)
        throw parameter_error("independence_probe: n_trials must be >= 2");

    // Index the projection vectors w_ij (1-based i, j <= min(i, m)).
    struct Slot {
        int i, j;
    };
    std::vector<Slot> slots;
    for (int i = 1; i <= t; ++i)
        for (int j = 1; j <= std::min(i, m); ++j)
            slots.push_back({i, j});
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < slots.size(); ++a)
        for (std::size_t b = a + 1; b < slots.size(); ++b)
            if (slots[a].i != slots[b].i)
                pairs.emplace_back(a, b);

    struct BlockAcc {
        std::vector<Eigen::MatrixXcd> outer;
        MomentAcc cross, within;
    };
    const std::int64_t n_blocks = (n_trials + kBlockSize - 1) / kBlockSize;
    std::vector<BlockAcc> partial(static_cast<std::size_t>(n_blocks));
    for (auto &acc : partial)
        acc.outer.assign(pairs.size(), Eigen::MatrixXcd::Zero(r, r));

    parallel_blocks(n_trials, workers, [&](std::int64_t b, std::int64_t first, std::int64_t last) {
        BlockAcc &acc = partial[static_cast<std::size_t>(b)];
        std::vector<Eigen::VectorXcd> w(slots.size());
        std::vector<Eigen::VectorXcd> q;
        std::vector<Eigen::VectorXcd> prefix;
        for (std::int64_t k = first; k < last; ++k) {
            ChannelMatrix h = sample_channel(t, r, derive_stream(seed, static_cast<std::uint64_t>(k)));
            q.clear();
            for (int j = 0; j + 1 < m; ++j) {
                Eigen::VectorXcd res;
                double n2 = detail::residual_sq_norm(q, h.col(j), &res);
                q.push_back(res / std::sqrt(n2));
            }
            double v11 = 0.0, v21 = 0.0, v22 = 0.0;
            for (std::size_t s = 0; s < slots.size(); ++s) {
                prefix.assign(q.begin(), q.begin() + (slots[s].j - 1));
                Eigen::VectorXcd res;
                double v = detail::residual_sq_norm(prefix, h.col(slots[s].i - 1), &res);
                w[s] = std::move(res);
                if (slots[s].i == 1 && slots[s].j == 1)
                    v11 = v;
                if (slots[s].i == 2 && slots[s].j == 1)
                    v21 = v;
                if (slots[s].i == 2 && slots[s].j == 2)
                    v22 = v;
            }
            for (std::size_t p = 0; p < pairs.size(); ++p)
                acc.outer[p].noalias() += w[pairs[p].first] * w[pairs[p].second].adjoint();
            acc.cross.add(v11, v22);
            acc.within.add(v21, v22);
        }
    });

    std::vector<Eigen::MatrixXcd> total(pairs.size(), Eigen::MatrixXcd::Zero(r, r));
    MomentAcc cross, within;
    for (const auto &acc : partial) {
        for (std::size_t p = 0; p < pairs.size(); ++p)
            total[p] += acc.outer[p];
        cross.merge(acc.cross);
        within.merge(acc.within);
    }

    IndependenceReport report;
    const double n = static_cast<double>(n_trials);
    for (const auto &sum : total)
        report.max_cross_cov = std::max(report.max_cross_cov, (sum / n).cwiseAbs().maxCoeff());
    report.cross_cov_threshold = 4.0 / std::sqrt(n);
    report.cross_row_corr = cross.corr(n);
    report.within_row_corr = within.corr(n);
    return report;
}

std::vector<double> sample_row_exponential(int r, int i, int m, std::uint64_t seed) {
    if (r < 1 || i < 1 || m < 1)
        throw parameter_error("sample_row_exponential: invalid dimensions");
    SampleStream rng(seed);
    std::vector<double> beta(static_cast<std::size_t>(r));
    for (double &b : beta)
        b = rng.next_exponential();
    // Suffix sums: v_j = beta_j + ... + beta_r.
    std::vector<double> v(static_cast<std::size_t>(r));
    double acc = 0.0;
    for (int j = r - 1; j >= 0; --j) {
        acc += beta[static_cast<std::size_t>(j)];
        v[static_cast<std::size_t>(j)] = acc;
    }
    v.resize(static_cast<std::size_t>(std::min(i, m)));
    return v;
}

EmpiricalCdf::EmpiricalCdf(std::vector<double> samples) : sorted_(std::move(samples)) {
    if (sorted_.empty())
        throw parameter_error("EmpiricalCdf: empty sample");
    std::sort(sorted_.begin(), sorted_.end());
}

double EmpiricalCdf::operator()(double x) const {
    auto it = std::upper_bound(sorted_.begin(), sorted_.end(), x);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(sorted_.size());
}

std::vector<double> histogram_density(std::span<const double> samples, int bins, double lo,
                                      double hi) {
    if (bins < 1 || !(hi > lo))
        throw parameter_error("histogram_density: invalid binning");
    if (samples.empty())
        throw parameter_error("histogram_density: empty sample");
    std::vector<double> density(static_cast<std::size_t>(bins), 0.0);
    const double width = (hi - lo) / bins;
    for (double x : samples) {
        int b = static_cast<int>((x - lo) / width);
        b = std::clamp(b, 0, bins - 1);
        density[static_cast<std::size_t>(b)] += 1.0;
    }
    const double norm = 1.0 / (static_cast<double>(samples.size()) * width);
    for (double &d : density)
        d *= norm;
    return density;
}

double ks_distance(std::span<const double> sorted_samples,
                   const std::function<double(double)> &cdf) {
    const double n = static_cast<double>(sorted_samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        double f = cdf(sorted_samples[i]);
        d = std::max(d, std::fabs(f - static_cast<double>(i + 1) / n));
        d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    }
    return d;
}

std::vector<double> gain_column(const GainSamples &samples, int layer) {
    if (layer < 1 || layer > samples.m)
        throw parameter_error("gain_column: layer out of range");
    std::vector<double> col(static_cast<std::size_t>(samples.gains.rows()));
    for (Eigen::Index i = 0; i < samples.gains.rows(); ++i)
        col[static_cast<std::size_t>(i)] = samples.gains(i, layer - 1);
    return col;
}

} // namespace vblast
