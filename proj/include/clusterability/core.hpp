#ifndef CLUSTERABILITY_CORE_HPP
#define CLUSTERABILITY_CORE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace clusterability {

using Index = Eigen::Index;

/// Errors raised for malformed arguments or violated preconditions.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Errors raised when the input data cannot be read or is unsuitable
/// for the requested computation (too few points, degenerate sample, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Identifies a reproducible random stream.
struct RandomSeed {
  std::uint64_t value = 0;

  friend constexpr bool operator==(RandomSeed, RandomSeed) = default;
};

/// Significance level of a test; strictly inside (0, 1).
class Significance {
 public:
  constexpr Significance() = default;

  explicit Significance(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw UsageError("significance level must lie in (0, 1), got " +
                       std::to_string(alpha));
    }
  }

  constexpr double alpha() const { return alpha_; }

 private:
  double alpha_ = 0.05;
};

}  // namespace clusterability

#endif  // CLUSTERABILITY_CORE_HPP
