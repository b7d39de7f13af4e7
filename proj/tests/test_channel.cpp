// SPDX-License-Identifier: Apache-2.0
#include "vblast/channel.hpp"
#include "vblast/errors.hpp"
#include "vblast/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

using namespace vblast;
using Eigen::VectorXcd;

TEST_CASE("sample_channel shape, determinism, parameter checks") {
    ChannelMatrix a = sample_channel(2, 3, 42);
    ChannelMatrix b = sample_channel(2, 3, 42);
    CHECK(a.rows() == 3);
    CHECK(a.cols() == 2);
    CHECK(a == b);
    ChannelMatrix c = sample_channel(2, 3, 43);
    CHECK(a != c);
    CHECK_THROWS_AS((void)sample_channel(3, 2, 1), parameter_error);
    CHECK_THROWS_AS((void)sample_channel(0, 2, 1), parameter_error);
}

TEST_CASE("sample_channel entry moments") {
    const int n = 100000;
    std::complex<double> mean_sum = 0.0;
    double pow_sum = 0.0;
    for (int k = 0; k < n; ++k) {
        ChannelMatrix h = sample_channel(2, 2, derive_stream(7, static_cast<std::uint64_t>(k)));
        mean_sum += h.sum();
        pow_sum += h.squaredNorm();
    }
    const double entries = 4.0 * n;
    CHECK(std::abs(mean_sum) / entries < 0.01);
    CHECK(pow_sum / entries == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("complement_projector basics") {
    // empty basis: identity
    Eigen::MatrixXcd p0 = complement_projector({}, 3);
    CHECK((p0 - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);

    // project off the first axis
    VectorXcd e1(2);
    e1 << 1.0, 0.0;
    Eigen::MatrixXcd p = complement_projector({e1}, 2);
    VectorXcd v(2);
    v << 1.0, 1.0;
    VectorXcd pv = p * v;
    CHECK(std::abs(pv(0)) < 1e-14);
    CHECK(pv(1) == std::complex<double>(1.0, 0.0));

    // random basis: Hermitian, idempotent, annihilates the basis
    SampleStream rng(99);
    std::vector<VectorXcd> basis;
    for (int k = 0; k < 2; ++k) {
        VectorXcd b(4);
        for (int i = 0; i < 4; ++i)
            b(i) = rng.next_cgauss();
        basis.push_back(b);
    }
    Eigen::MatrixXcd pr = complement_projector(basis, 4);
    CHECK((pr - pr.adjoint()).norm() < 1e-12);
    CHECK((pr * pr - pr).norm() < 1e-10);
    for (const auto &b : basis)
        CHECK((pr * b).norm() < 1e-10 * b.norm());

    // degenerate and invalid inputs
    CHECK_THROWS_AS((void)complement_projector({basis[0], basis[0]}, 4), degenerate_input_error);
    CHECK_THROWS_AS((void)complement_projector({e1, e1, e1}, 2), parameter_error);
}

TEST_CASE("greedy_decompose hand examples") {
    // h1 = (1,0), h2 = (0,2): antenna 2 wins first, gains (4, 1)
    ChannelMatrix h(2, 2);
    h << 1.0, 0.0, 0.0, 2.0;
    GreedyDecomposition d = greedy_decompose(h);
    CHECK(d.perm == std::vector<int>{1, 0});
    CHECK(d.gains(0) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(d.gains(1) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d.u_diag(0) == doctest::Approx(2.0).epsilon(1e-14));

    // h1 = (1,0), h2 = (1,1): norms 1 and 2, then residual of h1 off h2
    ChannelMatrix g(2, 2);
    g << 1.0, 1.0, 0.0, 1.0;
    GreedyDecomposition e = greedy_decompose(g);
    CHECK(e.perm == std::vector<int>{1, 0});
    CHECK(e.gains(0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.gains(1) == doctest::Approx(0.5).epsilon(1e-12));
    // product of gains equals det(H^H H)
    double det = std::abs((g.adjoint() * g).determinant());
    CHECK(e.gains.prod() == doctest::Approx(det).epsilon(1e-12));
}

TEST_CASE("greedy_decompose single column and degenerate input") {
    ChannelMatrix h(3, 1);
    h << std::complex<double>(1.0, 1.0), 2.0, 0.0;
    GreedyDecomposition d = greedy_decompose(h);
    CHECK(d.perm == std::vector<int>{0});
    CHECK(d.gains(0) == doctest::Approx(6.0).epsilon(1e-14));

    ChannelMatrix dup(2, 2);
    dup << 1.0, 1.0, 2.0, 2.0;
    CHECK_THROWS_AS((void)greedy_decompose(dup), degenerate_input_error);
}

TEST_CASE("greedy_decompose properties on random channels") {
    for (std::uint64_t s = 0; s < 50; ++s) {
        ChannelMatrix h = sample_channel(3, 4, derive_stream(1234, s));
        GreedyDecomposition d = greedy_decompose(h);
        for (int i = 0; i + 1 < 3; ++i)
            CHECK(d.gains(i) >= d.gains(i + 1));
        CHECK(d.gains(2) > 0.0);
        double det = std::abs((h.adjoint() * h).determinant());
        CHECK(d.gains.prod() == doctest::Approx(det).epsilon(1e-8));
        for (int i = 0; i < 3; ++i)
            CHECK(d.u_diag(i) * d.u_diag(i) == doctest::Approx(d.gains(i)).epsilon(1e-14));
        // perm is a permutation of {0,1,2}
        std::vector<bool> seen(3, false);
        for (int p : d.perm) {
            CHECK(!seen[static_cast<std::size_t>(p)]);
            seen[static_cast<std::size_t>(p)] = true;
        }
    }
}

TEST_CASE("unordered_gains hand example") {
    // h1 = (1,0), h2 = (1,1): v11 = 1, v21 = 2, v22 = |P h2|^2 = 1
    ChannelMatrix h(2, 2);
    h << 1.0, 1.0, 0.0, 1.0;
    UnorderedGainTable v = unordered_gains(h, 2);
    REQUIRE(v.size() == 2);
    REQUIRE(v[0].size() == 1);
    REQUIRE(v[1].size() == 2);
    CHECK(v[0][0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(v[1][0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(v[1][1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unordered_gains shape, m=1, and validation") {
    ChannelMatrix h = sample_channel(3, 4, 5);
    UnorderedGainTable v1 = unordered_gains(h, 1);
    for (int i = 0; i < 3; ++i) {
        REQUIRE(v1[static_cast<std::size_t>(i)].size() == 1);
        CHECK(v1[static_cast<std::size_t>(i)][0] ==
              doctest::Approx(h.col(i).squaredNorm()).epsilon(1e-14));
    }
    UnorderedGainTable v2 = unordered_gains(h, 2);
    REQUIRE(v2[0].size() == 1);
    REQUIRE(v2[1].size() == 2);
    REQUIRE(v2[2].size() == 2); // truncated at m
    CHECK_THROWS_AS((void)unordered_gains(h, 0), parameter_error);
    CHECK_THROWS_AS((void)unordered_gains(h, 4), parameter_error);
}

TEST_CASE("unordered_gains rows are nonincreasing") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        ChannelMatrix h = sample_channel(4, 5, derive_stream(777, s));
        UnorderedGainTable v = unordered_gains(h, 4);
        for (const auto &row : v)
            for (std::size_t j = 0; j + 1 < row.size(); ++j)
                CHECK(row[j] >= row[j + 1]);
    }
}

TEST_CASE("greedy gains equal the diagonal of the permuted gain table") {
    // Permuting the columns into greedy order makes the table diagonal the
    // greedy gains, each being the max of its column over the rows at or
    // below the diagonal. Shared projection arithmetic makes this exact.
    for (std::uint64_t s = 0; s < 25; ++s) {
        ChannelMatrix h = sample_channel(3, 4, derive_stream(31337, s));
        GreedyDecomposition d = greedy_decompose(h);
        ChannelMatrix hp(h.rows(), h.cols());
        for (int j = 0; j < 3; ++j)
            hp.col(j) = h.col(d.perm[static_cast<std::size_t>(j)]);
        UnorderedGainTable v = unordered_gains(hp, 3);
        for (int i = 0; i < 3; ++i) {
            CHECK(v[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == d.gains(i));
            for (int p = i; p < 3; ++p)
                CHECK(v[static_cast<std::size_t>(p)][static_cast<std::size_t>(i)] <=
                      d.gains(i));
        }
    }
}

TEST_CASE("smallest_singular_value") {
    ChannelMatrix h(2, 2);
    h << 3.0, 0.0, 0.0, 2.0;
    CHECK(smallest_singular_value(h) == doctest::Approx(2.0).epsilon(1e-12));
    ChannelMatrix s(2, 2);
    s << 1.0, 1.0, 1.0, 1.0;
    CHECK(smallest_singular_value(s) < 1e-7);
}
