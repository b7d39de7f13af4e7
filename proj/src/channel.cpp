// SPDX-License-Identifier: Apache-2.0
#include "vblast/channel.hpp"

#include "vblast/errors.hpp"
#include "vblast/rng.hpp"

#include <cmath>

namespace vblast {

namespace {
constexpr double kRankGuard = 1e-10; // on the smallest singular value
}

namespace detail {

double residual_sq_norm(const std::vector<Eigen::VectorXcd> &q, const Eigen::VectorXcd &v,
                        Eigen::VectorXcd *residual) {
    Eigen::VectorXcd w = v;
    for (int pass = 0; pass < 2; ++pass)
        for (const Eigen::VectorXcd &qi : q)
            w -= qi.dot(w) * qi;
    if (residual)
        *residual = w;
    return w.squaredNorm();
}

} // namespace detail

ChannelMatrix sample_channel(int t, int r, std::uint64_t seed) {
    if (t < 1 || t > r)
        throw parameter_error("sample_channel: requires 1 <= t <= r");
    SampleStream rng(seed);
    ChannelMatrix h(r, t);
    for (int j = 0; j < t; ++j)
        for (int i = 0; i < r; ++i)
            h(i, j) = rng.next_cgauss();
    return h;
}

double smallest_singular_value(const Eigen::MatrixXcd &a) {
    Eigen::MatrixXcd gram = a.adjoint() * a;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram, Eigen::EigenvaluesOnly);
    double lambda_min = solver.eigenvalues().minCoeff();
    return std::sqrt(std::max(lambda_min, 0.0));
}

Eigen::MatrixXcd complement_projector(const std::vector<Eigen::VectorXcd> &basis, int dim) {
    if (dim < 1)
        throw parameter_error("complement_projector: dim must be positive");
    if (static_cast<int>(basis.size()) >= dim)
        throw parameter_error("complement_projector: basis size must be < dim");
    if (!basis.empty()) {
        Eigen::MatrixXcd stacked(dim, static_cast<int>(basis.size()));
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (basis[j].size() != dim)
                throw parameter_error("complement_projector: basis vector dimension mismatch");
            stacked.col(static_cast<int>(j)) = basis[j];
        }
        if (smallest_singular_value(stacked) <= kRankGuard)
            throw degenerate_input_error("complement_projector: rank-deficient basis");
    }
    std::vector<Eigen::VectorXcd> q;
    q.reserve(basis.size());
    for (const Eigen::VectorXcd &b : basis) {
        Eigen::VectorXcd res;
        double n2 = detail::residual_sq_norm(q, b, &res);
        if (n2 <= kRankGuard * kRankGuard * b.squaredNorm())
            throw degenerate_input_error("complement_projector: dependent basis vector");
        q.push_back(res / std::sqrt(n2));
    }
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Identity(dim, dim);
    for (const Eigen::VectorXcd &qi : q)
        p -= qi * qi.adjoint();
    return p;
}

GreedyDecomposition greedy_decompose(const ChannelMatrix &h) {
    const int r = static_cast<int>(h.rows());
    const int t = static_cast<int>(h.cols());
    if (t < 1 || t > r)
        throw parameter_error("greedy_decompose: requires 1 <= t <= r");
    if (smallest_singular_value(h) <= kRankGuard)
        throw degenerate_input_error("greedy_decompose: rank-deficient channel matrix");

    GreedyDecomposition out;
    out.perm.reserve(static_cast<std::size_t>(t));
    out.gains.resize(t);
    out.u_diag.resize(t);

    std::vector<bool> used(static_cast<std::size_t>(t), false);
    std::vector<Eigen::VectorXcd> q;
    q.reserve(static_cast<std::size_t>(t));
    for (int step = 0; step < t; ++step) {
        int best = -1;
        double best_gain = -1.0;
        for (int j = 0; j < t; ++j) {
            if (used[static_cast<std::size_t>(j)])
                continue;
            double g = detail::residual_sq_norm(q, h.col(j));
            if (g > best_gain) { // ties keep the lowest antenna index
                best_gain = g;
                best = j;
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        out.perm.push_back(best);
        Eigen::VectorXcd res;
        double gain = detail::residual_sq_norm(q, h.col(best), &res);
        out.gains(step) = gain;
        out.u_diag(step) = std::sqrt(gain);
        if (step + 1 < t)
            q.push_back(res / std::sqrt(gain));
    }
    return out;
}

UnorderedGainTable unordered_gains(const ChannelMatrix &h, int m) {
    const int t = static_cast<int>(h.cols());
    if (m < 1 || m > t)
        throw parameter_error("unordered_gains: requires 1 <= m <= t");

    // Orthonormal prefixes of the natural-order columns; q[0..j-1] spans
    // {h_1, ..., h_j}.
    std::vector<Eigen::VectorXcd> q;
    q.reserve(static_cast<std::size_t>(m - 1));
    UnorderedGainTable table(static_cast<std::size_t>(t));
    for (int i = 0; i < t; ++i) {
        const int cols = std::min(i + 1, m);
        auto &row = table[static_cast<std::size_t>(i)];
        row.resize(static_cast<std::size_t>(cols));
        std::vector<Eigen::VectorXcd> prefix;
        for (int j = 0; j < cols; ++j) {
            prefix.assign(q.begin(), q.begin() + j);
            row[static_cast<std::size_t>(j)] = detail::residual_sq_norm(prefix, h.col(i));
        }
        if (i < m - 1) {
            Eigen::VectorXcd res;
            double n2 = detail::residual_sq_norm(q, h.col(i), &res);
            if (n2 <= 0.0)
                throw degenerate_input_error("unordered_gains: dependent columns");
            q.push_back(res / std::sqrt(n2));
        }
    }
    return table;
}

} // namespace vblast
