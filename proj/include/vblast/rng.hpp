// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_RNG_HPP
#define VBLAST_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>

namespace vblast {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}
} // namespace detail

// Mixes a base seed with a trial index into an independent 64-bit stream id.
// Substream results depend only on (seed, index), never on shared RNG state,
// so Monte Carlo output is identical for any worker count.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t s = seed;
    std::uint64_t a = detail::splitmix64(s);
    s ^= index * 0xD6E8FEB86659FD93ULL;
    std::uint64_t b = detail::splitmix64(s);
    s = a ^ (b + 0x2545F4914F6CDD1DULL);
    return detail::splitmix64(s);
}

// Small counter-based generator (splitmix64 sequence) with Gaussian and
// exponential variates. One instance per (seed, stream) pair.
class SampleStream {
  public:
    explicit SampleStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(derive_stream(seed, stream)) {}

    std::uint64_t next_u64() { return detail::splitmix64(state_); }

    // Uniform on (0, 1), never returns 0 or 1.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller.
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = next_uniform();
        double u2 = next_uniform();
        double rad = std::sqrt(-2.0 * std::log(u1));
        double ang = 6.28318530717958647692 * u2;
        spare_ = rad * std::sin(ang);
        have_spare_ = true;
        return rad * std::cos(ang);
    }

    // Circularly-symmetric complex Gaussian, E|z|^2 = 1.
    std::complex<double> next_cgauss() {
        constexpr double inv_sqrt2 = 0.70710678118654752440;
        double re = next_normal();
        double im = next_normal();
        return {re * inv_sqrt2, im * inv_sqrt2};
    }

    // Unit-mean exponential.
    double next_exponential() { return -std::log(next_uniform()); }

  private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace vblast

#endif
