// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_CHANNEL_HPP
#define VBLAST_CHANNEL_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace vblast {

// r x t complex channel realization; columns are the per-antenna fade vectors.
using ChannelMatrix = Eigen::MatrixXcd;

// Greedy ordered decomposition: permutation pi and the nonincreasing squared
// layer gains gamma_i = [U]_ii^2 of the ordered QR factor.
struct GreedyDecomposition {
    std::vector<int> perm;  // 0-based antenna index selected at each step
    Eigen::VectorXd gains;  // gamma_1 >= ... >= gamma_t >= 0
    Eigen::VectorXd u_diag; // [U]_ii = sqrt(gamma_i)
};

// Row i holds v_{i1} >= ... >= v_{i,min(i,m)}: squared norms of h_i projected
// off the spans of the first 0, 1, ..., min(i,m)-1 natural-order columns.
using UnorderedGainTable = std::vector<std::vector<double>>;

// IID CN(0,1) entries, deterministic per (t, r, seed). Use
// derive_stream(seed, trial) as the seed for independent trials.
ChannelMatrix sample_channel(int t, int r, std::uint64_t seed);

// Orthogonal projector onto the complement of span(basis). Empty basis gives
// the identity. Throws degenerate_input_error if the basis is near-dependent.
Eigen::MatrixXcd complement_projector(const std::vector<Eigen::VectorXcd> &basis, int dim);

GreedyDecomposition greedy_decompose(const ChannelMatrix &h);

UnorderedGainTable unordered_gains(const ChannelMatrix &h, int m);

// Smallest singular value of a, computed from the Gram matrix spectrum.
double smallest_singular_value(const Eigen::MatrixXcd &a);

namespace detail {
// Squared norm of v after twice-reorthogonalized projection off span(q).
// Optionally returns the residual vector. Shared by the greedy and natural
// order paths so their gains agree bit for bit.
double residual_sq_norm(const std::vector<Eigen::VectorXcd> &q, const Eigen::VectorXcd &v,
                        Eigen::VectorXcd *residual = nullptr);
} // namespace detail

} // namespace vblast

#endif
