#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mpbandit {

/// Gaps of every joint tuple plus the horizon a bound is evaluated at.
struct BoundInput {
  std::vector<double> gaps;
  std::size_t k_max = 0;
  double horizon = 2.0;

  /// Throws InvalidInput on negative gaps, no zero gap, or k_max != gaps.size().
  void validate() const;
};

inline constexpr double kUcbBoundConstant = 6.0 + 5.656854249492380195;  // 6 + 4 sqrt(2)

/// 3 sum_a gap_a + sum_{gap_a > 0} (6 + 4 sqrt 2) ln T / gap_a.
double gap_dependent_regret_bound(const BoundInput& input);

/// With eps = sqrt(ln T / T):
/// 3 k_max + (1 + (6 + 4 sqrt 2) |{a : gap_a > eps}|) sqrt(T ln T).
double gap_independent_regret_bound(const BoundInput& input);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of y on x. A constant y is fitted exactly (R^2 = 1).
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct GrowthFit {
  LinearFit log_fit;     // value against ln t
  LinearFit linear_fit;  // value against t
};

/// Fits value ~ ln t and value ~ t over the upper half of the checkpoints
/// (the initial exploration transient is discarded).
/// Throws InsufficientData for fewer than 10 checkpoints, less than two
/// decades of t, or fewer than 3 points in the upper half.
GrowthFit classify_growth(std::span<const std::pair<std::uint64_t, double>> checkpoints);

struct ConfidenceBand {
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> lower;  // mean - 2 std
  std::vector<double> upper;  // mean + 2 std
};

/// Per-checkpoint sample mean and std (n - 1) of a row-major runs x checkpoints
/// matrix, with the mean +/- 2 std band. Throws InsufficientData for < 2 runs.
ConfidenceBand confidence_band(std::span<const double> per_run, std::size_t runs, std::size_t checkpoints);

struct ProbabilityEstimate {
  double p = 0.0;
  double std_error = 0.0;  // sqrt(p (1 - p) / trials)
  std::uint64_t trials = 0;
};

/// Monte Carlo estimate, on the two-player counterexample environment, of the
/// event that after one sample of every tuple player 1's best sample mean is
/// (2,1) and player 2's is (1,2), each player drawing its own samples. Under
/// that event both players play arm 2 and lock onto (2,2).
ProbabilityEstimate estimate_lock_in_probability(std::uint64_t trials, std::uint64_t seed);

}  // namespace mpbandit
