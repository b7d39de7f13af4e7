// SPDX-License-Identifier: Apache-2.0
#ifndef VBLAST_ERRORS_HPP
#define VBLAST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace vblast {

// Invalid argument values (dimensions, ranges, unordered inputs).
class parameter_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Numerically degenerate input (rank-deficient matrix, dependent basis).
class degenerate_input_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A numerical procedure failed to reach its target accuracy.
class numeric_error : public std::runtime_error {
  public:
    numeric_error(const std::string &msg, double estimate = 0.0)
        : std::runtime_error(msg), estimate_(estimate) {}
    double estimate() const { return estimate_; }

  private:
    double estimate_;
};

} // namespace vblast

#endif
