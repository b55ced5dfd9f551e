#include "mpbandit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpbandit/environments.hpp"
#include "mpbandit/errors.hpp"
#include "mpbandit/kernels.hpp"

namespace mpbandit {

void BoundInput::validate() const {
  if (gaps.empty()) throw InvalidInput("bound input has no gaps");
  if (k_max != gaps.size()) throw InvalidInput("k_max must equal the number of gaps");
  bool has_zero = false;
  for (double g : gaps) {
    if (!(g >= 0.0)) throw InvalidInput("gaps must be non-negative");
    has_zero = has_zero || g == 0.0;
  }
  if (!has_zero) throw InvalidInput("at least one tuple must have zero gap");
  if (!(horizon >= 2.0)) throw InvalidInput("bounds need T >= 2");
}

double gap_dependent_regret_bound(const BoundInput& input) {
  input.validate();
  const double log_t = std::log(input.horizon);
  double total = 0.0;
  for (double g : input.gaps) {
    total += 3.0 * g;
    if (g > 0.0) total += kUcbBoundConstant * log_t / g;
  }
  return total;
}

double gap_independent_regret_bound(const BoundInput& input) {
  input.validate();
  const double t = input.horizon;
  const double log_t = std::log(t);
  const double eps = std::sqrt(log_t / t);
  const auto wide = static_cast<double>(std::count_if(input.gaps.begin(), input.gaps.end(),
                                                      [eps](double g) { return g > eps; }));
  return 3.0 * static_cast<double>(input.k_max) + (1.0 + kUcbBoundConstant * wide) * std::sqrt(t * log_t);
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InsufficientData("least squares needs at least two paired points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw InsufficientData("least squares needs at least two distinct x values");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

GrowthFit classify_growth(std::span<const std::pair<std::uint64_t, double>> checkpoints) {
  if (checkpoints.size() < 10) throw InsufficientData("growth fit needs at least 10 checkpoints");
  const double first = static_cast<double>(checkpoints.front().first);
  const double last = static_cast<double>(checkpoints.back().first);
  if (!(first >= 1.0) || last < 100.0 * first) {
    throw InsufficientData("growth fit needs checkpoints spanning at least two decades");
  }
  const auto upper = checkpoints.subspan(checkpoints.size() / 2);
  if (upper.size() < 3) throw InsufficientData("fewer than 3 checkpoints in the upper half");
  std::vector<double> t;
  std::vector<double> log_t;
  std::vector<double> v;
  for (const auto& [time, value] : upper) {
    t.push_back(static_cast<double>(time));
    log_t.push_back(std::log(static_cast<double>(time)));
    v.push_back(value);
  }
  return {least_squares(log_t, v), least_squares(t, v)};
}

ConfidenceBand confidence_band(std::span<const double> per_run, std::size_t runs, std::size_t checkpoints) {
  if (runs < 2) throw InsufficientData("confidence band needs at least 2 runs");
  ConfidenceBand band;
  band.mean.resize(checkpoints);
  band.stddev.resize(checkpoints);
  kernels::column_mean_std(per_run, runs, checkpoints, band.mean, band.stddev);
  band.lower.resize(checkpoints);
  band.upper.resize(checkpoints);
  for (std::size_t c = 0; c < checkpoints; ++c) {
    band.lower[c] = band.mean[c] - 2.0 * band.stddev[c];
    band.upper[c] = band.mean[c] + 2.0 * band.stddev[c];
  }
  return band;
}

ProbabilityEstimate estimate_lock_in_probability(std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw InvalidInput("need at least one trial");
  CounterexampleEnv env;
  const ArmSpace& space = env.space();
  const std::size_t t21 = space.flat_index({2, 1});
  const std::size_t t12 = space.flat_index({1, 2});
  RewardStreams rng(seed, space.size(), 2);
  std::vector<double> sample(space.size() * 2);
  std::uint64_t hits = 0;
  for (std::uint64_t n = 0; n < trials; ++n) {
    // One independent sample of every tuple for each player.
    for (std::size_t a = 0; a < space.size(); ++a) {
      env.sample_independent(a, rng, std::span<double>(sample).subspan(a * 2, 2));
    }
    auto favours = [&](std::size_t player, std::size_t target) {
      for (std::size_t a = 0; a < space.size(); ++a) {
        if (a != target && !(sample[target * 2 + player] > sample[a * 2 + player])) return false;
      }
      return true;
    };
    if (favours(0, t21) && favours(1, t12)) ++hits;
  }
  ProbabilityEstimate est;
  est.trials = trials;
  est.p = static_cast<double>(hits) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.p * (1.0 - est.p) / static_cast<double>(trials));
  return est;
}

}  // namespace mpbandit
