// SPDX-License-Identifier: Apache-2.0
#include "vblast/distribution.hpp"
#include "vblast/errors.hpp"
#include "vblast/outage.hpp"
#include "vblast/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace vblast;

TEST_CASE("outage probability hand values") {
    LayerLaw expo(1, 1, 1);
    // rate 1, rho 1: threshold gain is 1, exponential CDF there is 1 - 1/e
    CHECK(outage_probability(expo, 1, 1.0, 1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-9));
    CHECK(outage_probability(expo, 1, 1.0, 1.0) == doctest::Approx(0.6321205588).epsilon(1e-9));
    // huge power: outage vanishes
    CHECK(outage_probability(expo, 1, 1.0, 1e12) < 1e-10);
    // outage decreases with power, increases with rate
    CHECK(outage_probability(expo, 1, 1.0, 10.0) < outage_probability(expo, 1, 1.0, 1.0));
    CHECK(outage_probability(expo, 1, 2.0, 1.0) > outage_probability(expo, 1, 1.0, 1.0));
    CHECK_THROWS_AS((void)outage_probability(expo, 1, 0.0, 1.0), parameter_error);
    CHECK_THROWS_AS((void)outage_probability(expo, 1, 1.0, 0.0), parameter_error);
}

TEST_CASE("eps-outage capacity") {
    LayerLaw expo(1, 1, 1);
    CHECK(eps_outage_capacity(expo, 1, 0.5, 0.0) == 0.0);
    // rho_i = 1/g makes the capacity exactly one bit
    double g = quantile_gain(expo, 1, 0.1);
    CHECK(g == doctest::Approx(-std::log(0.9)).epsilon(1e-6));
    CHECK(eps_outage_capacity(expo, 1, 0.1, 1.0 / g) == doctest::Approx(1.0).epsilon(1e-9));
    // achieving that rate has outage exactly eps
    CHECK(outage_probability(expo, 1, 1.0, 1.0 / g) == doctest::Approx(0.1).epsilon(1e-5));
    CHECK(eps_outage_capacity(expo, 1, 0.1, 2.0) > eps_outage_capacity(expo, 1, 0.1, 1.0));
    CHECK_THROWS_AS((void)eps_outage_capacity(expo, 1, 0.1, -1.0), parameter_error);
}

TEST_CASE("waterfill_from_gains hand cases") {
    // equal gains: equal split
    std::vector<double> eq{2.0, 2.0, 2.0};
    PowerAllocation a = waterfill_from_gains(eq, 3.0);
    CHECK(a.active == 3);
    for (double p : a.rho)
        CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.mu == doctest::Approx(1.5).epsilon(1e-12));

    // single layer: everything goes to it
    std::vector<double> one{0.5};
    PowerAllocation b = waterfill_from_gains(one, 4.0);
    CHECK(b.active == 1);
    CHECK(b.rho[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(b.mu == doctest::Approx(4.0 + 2.0).epsilon(1e-12));

    // weak second gain gets cut off at low total power
    std::vector<double> gains{10.0, 0.01};
    PowerAllocation c = waterfill_from_gains(gains, 0.5);
    CHECK(c.active == 1);
    CHECK(c.rho[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.rho[1] == 0.0);

    CHECK_THROWS_AS((void)waterfill_from_gains(std::vector<double>{}, 1.0), parameter_error);
    CHECK_THROWS_AS((void)waterfill_from_gains(eq, 0.0), parameter_error);
    std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS((void)waterfill_from_gains(bad, 1.0), parameter_error);
}

TEST_CASE("waterfill_from_gains satisfies the KKT conditions on random instances") {
    SampleStream rng(0xFADEDu);
    for (int rep = 0; rep < 1000; ++rep) {
        int t = 1 + static_cast<int>(rng.next_u64() % 6);
        std::vector<double> gains(static_cast<std::size_t>(t));
        for (double &g : gains)
            g = std::exp(3.0 * (rng.next_uniform() - 0.5));
        std::sort(gains.begin(), gains.end(), std::greater<>());
        double rho_total = std::pow(10.0, 3.0 * rng.next_uniform() - 1.0);
        PowerAllocation alloc = waterfill_from_gains(gains, rho_total);

        double sum = 0.0;
        for (double p : alloc.rho)
            sum += p;
        CHECK(sum == doctest::Approx(rho_total).epsilon(1e-9));
        REQUIRE(alloc.active >= 1);
        REQUIRE(alloc.active <= t);
        for (int i = 0; i < t; ++i) {
            double p = alloc.rho[static_cast<std::size_t>(i)];
            CHECK(p >= 0.0);
            if (i < alloc.active) {
                // active layers share a common water level
                CHECK(p + 1.0 / gains[static_cast<std::size_t>(i)] ==
                      doctest::Approx(alloc.mu).epsilon(1e-10));
                CHECK(p > 0.0);
            } else {
                // inactive layers sit above the water level
                CHECK(p == 0.0);
                CHECK(1.0 / gains[static_cast<std::size_t>(i)] >= alloc.mu - 1e-12);
            }
        }
        // more power never shrinks any layer's share
        PowerAllocation more = waterfill_from_gains(gains, 2.0 * rho_total);
        for (int i = 0; i < t; ++i)
            CHECK(more.rho[static_cast<std::size_t>(i)] >=
                  alloc.rho[static_cast<std::size_t>(i)] - 1e-12);
    }
}

TEST_CASE("waterfill over quantile gains") {
    LayerLaw law(2, 2, 2);
    PowerAllocation alloc = waterfill(law, 0.1, 10.0);
    REQUIRE(alloc.rho.size() == 2);
    double sum = alloc.rho[0] + alloc.rho[1];
    CHECK(sum == doctest::Approx(10.0).epsilon(1e-9));
    // the stronger layer has the larger quantile gain, hence the larger share
    CHECK(alloc.rho[0] >= alloc.rho[1]);
    double g1 = quantile_gain(law, 1, 0.1);
    double g2 = quantile_gain(law, 2, 0.1);
    CHECK(g1 > g2);
    if (alloc.active == 2)
        CHECK(alloc.rho[0] - alloc.rho[1] == doctest::Approx(1.0 / g2 - 1.0 / g1).epsilon(1e-8));
    CHECK_THROWS_AS((void)waterfill(law, 0.0, 1.0), parameter_error);
}

TEST_CASE("quantile_gain caches consistently") {
    LayerLaw law(2, 2, 2);
    double a = quantile_gain(law, 1, 0.2);
    double b = quantile_gain(law, 1, 0.2);
    CHECK(a == b);
    CHECK(a == doctest::Approx(inverse_cdf(LayerLaw(2, 2, 1), 1, 0.2)).epsilon(1e-9));
}

TEST_CASE("feedback bits") {
    auto [e1, c1] = feedback_bits(1);
    CHECK(e1 == 0.0);
    CHECK(c1 == 0);
    auto [e3, c3] = feedback_bits(3);
    CHECK(e3 == doctest::Approx(std::log2(6.0)).epsilon(1e-12));
    CHECK(c3 == 3);
    auto [e4, c4] = feedback_bits(4);
    CHECK(e4 == doctest::Approx(std::log2(24.0)).epsilon(1e-12));
    CHECK(c4 == 5);
    CHECK_THROWS_AS((void)feedback_bits(0), parameter_error);
}

TEST_CASE("dB conversions") {
    CHECK(db_to_linear(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(linear_to_db(db_to_linear(7.3)) == doctest::Approx(7.3).epsilon(1e-12));
}
