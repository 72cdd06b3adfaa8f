#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pagame {

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = VecX<double>;
using Mat = MatX<double>;

using ArmIndex = std::size_t;
using ArmList = std::vector<ArmIndex>;

/// Per-arm offer pi(t); every entry is nonnegative.
using Incentive = Vec;

/// Violation of a precondition or configuration contract.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A hard invariant failed during a run (design certificate, empty search
/// body, singular design matrix).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Natural-log helper for schedule formulas written with `log`.
inline double ln(double x) { return std::log(x); }

/// ceil(log2(T)) for T >= 1.
inline std::size_t ceil_log2(std::size_t horizon) {
  std::size_t bits = 0;
  std::size_t v = 1;
  while (v < horizon) {
    v <<= 1;
    ++bits;
  }
  return bits;
}

}  // namespace pagame
