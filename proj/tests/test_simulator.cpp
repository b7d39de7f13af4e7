// SPDX-License-Identifier: Apache-2.0
#include "vblast/channel.hpp"
#include "vblast/distribution.hpp"
#include "vblast/errors.hpp"
#include "vblast/quadrature.hpp"
#include "vblast/rng.hpp"
#include "vblast/simulator.hpp"
#include "vblast/special_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace vblast;

TEST_CASE("simulate_gains validation and determinism across worker counts") {
    CHECK_THROWS_AS((void)simulate_gains(3, 2, 1, 10, 0), parameter_error);
    CHECK_THROWS_AS((void)simulate_gains(2, 2, 3, 10, 0), parameter_error);
    CHECK_THROWS_AS((void)simulate_gains(2, 2, 1, 0, 0), parameter_error);

    GainSamples a = simulate_gains(3, 4, 3, 20000, 123, 1);
    GainSamples b = simulate_gains(3, 4, 3, 20000, 123, 8);
    CHECK(a.gains == b.gains); // bit-identical regardless of parallelism
    GainSamples c = simulate_gains(3, 4, 3, 20000, 124, 8);
    CHECK(a.gains != c.gains);
}

TEST_CASE("simulate_gains rows are valid draws") {
    GainSamples s = simulate_gains(3, 4, 3, 500, 9, 2);
    for (Eigen::Index k = 0; k < s.gains.rows(); ++k) {
        CHECK(s.gains(k, 0) >= s.gains(k, 1));
        CHECK(s.gains(k, 1) >= s.gains(k, 2));
        CHECK(s.gains(k, 2) > 0.0);
        // greedy first gain dominates the natural-order v_11
        ChannelMatrix h = sample_channel(3, 4, derive_stream(9, static_cast<std::uint64_t>(k)));
        UnorderedGainTable v = unordered_gains(h, 3);
        CHECK(s.gains(k, 0) >= v[0][0] - 1e-12);
    }
}

TEST_CASE("simulated means match the analytic law") {
    {
        // t = r = 1: unit-mean exponential gain
        GainSamples s = simulate_gains(1, 1, 1, 1000000, 2024, 4);
        CHECK(s.gains.col(0).mean() == doctest::Approx(1.0).epsilon(0.01));
    }
    {
        GainSamples s = simulate_gains(3, 4, 1, 400000, 77, 4);
        // E[gamma_1] = integral of the survival function of the max
        double want = adaptive_integrate(
            [](double x) { return 1.0 - std::pow(reg_lower_gamma(4.0, x), 3); }, 0.0, 60.0,
            1e-10);
        CHECK(s.gains.col(0).mean() == doctest::Approx(want).epsilon(0.005));
    }
}

TEST_CASE("permutation census") {
    CHECK_THROWS_AS((void)permutation_census(7, 7, 10, 0), parameter_error);
    auto single = permutation_census(1, 2, 1000, 5);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == 1000);

    auto counts = permutation_census(2, 2, 100000, 11, 4);
    REQUIRE(counts.size() == 2);
    CHECK(counts[0] + counts[1] == 100000);
    // equiprobable permutations
    CHECK(std::abs(counts[0] - 50000) < 5 * std::sqrt(25000.0));
    CHECK(census_chi_square_pvalue(counts) > 0.001);
}

TEST_CASE("census_chi_square_pvalue hand values") {
    std::vector<std::int64_t> even{50, 50};
    CHECK(census_chi_square_pvalue(even) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<std::int64_t> skew{60, 40};
    // chi-square stat 4 with 1 dof
    CHECK(census_chi_square_pvalue(skew) == doctest::Approx(chi_square_sf(4.0, 1)).epsilon(1e-12));
    std::vector<std::int64_t> empty;
    CHECK_THROWS_AS((void)census_chi_square_pvalue(empty), parameter_error);
}

TEST_CASE("independence probe") {
    CHECK_THROWS_AS((void)independence_probe(2, 2, 1, 100, 0), parameter_error);
    IndependenceReport rep = independence_probe(2, 2, 2, 200000, 314, 4);
    CHECK(rep.max_cross_cov < rep.cross_cov_threshold);
    CHECK(std::fabs(rep.cross_row_corr) < rep.cross_cov_threshold);
    CHECK(rep.within_row_corr > 0.1); // same-row entries are strongly coupled
}

TEST_CASE("exponential suffix-sum row sampler") {
    auto row = sample_row_exponential(4, 2, 3, 99);
    REQUIRE(row.size() == 2); // min(i, m)
    CHECK(row[0] >= row[1]);
    CHECK(row == sample_row_exponential(4, 2, 3, 99));

    const int n = 200000;
    double mean1 = 0.0;
    std::vector<double> v22(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        auto v = sample_row_exponential(4, 2, 2, derive_stream(55, static_cast<std::uint64_t>(k)));
        mean1 += v[0];
        v22[static_cast<std::size_t>(k)] = v[1];
    }
    CHECK(mean1 / n == doctest::Approx(4.0).epsilon(0.01));
    // second entry is Erlang with r-1 stages
    std::sort(v22.begin(), v22.end());
    double d = ks_distance(v22, [](double x) { return reg_lower_gamma(3.0, x); });
    CHECK(d < 0.01);
}

TEST_CASE("exponential rows agree with Gaussian-channel rows in law") {
    const int n = 30000;
    std::vector<double> gauss(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        ChannelMatrix h = sample_channel(2, 4, derive_stream(808, static_cast<std::uint64_t>(k)));
        UnorderedGainTable v = unordered_gains(h, 2);
        gauss[static_cast<std::size_t>(k)] = v[1][1]; // v_22
    }
    std::sort(gauss.begin(), gauss.end());
    double d = ks_distance(gauss, [](double x) { return reg_lower_gamma(3.0, x); });
    CHECK(d < 0.015);
}

TEST_CASE("empirical cdf, histogram, ks distance") {
    EmpiricalCdf cdf({3.0, 1.0, 2.0});
    CHECK(cdf(0.5) == 0.0);
    CHECK(cdf(1.0) == doctest::Approx(1.0 / 3.0));
    CHECK(cdf(2.5) == doctest::Approx(2.0 / 3.0));
    CHECK(cdf(3.0) == 1.0);
    CHECK_THROWS_AS(EmpiricalCdf({}), parameter_error);

    std::vector<double> samples{0.1, 0.2, 0.8, 1.5, -2.0};
    auto dens = histogram_density(samples, 4, 0.0, 1.0);
    double mass = 0.0;
    for (double d : dens)
        mass += d * 0.25;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12)); // clamped edges keep unit mass
    CHECK_THROWS_AS((void)histogram_density(samples, 0, 0.0, 1.0), parameter_error);

    std::vector<double> sorted{1.0};
    double d = ks_distance(sorted, [](double) { return 0.25; });
    CHECK(d == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("gain_column extraction") {
    GainSamples s = simulate_gains(2, 2, 2, 100, 1, 1);
    auto col = gain_column(s, 2);
    REQUIRE(col.size() == 100);
    CHECK(col[0] == s.gains(0, 1));
    CHECK_THROWS_AS((void)gain_column(s, 3), parameter_error);
}
