#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "mpbandit/arm_space.hpp"

namespace mpbandit {

/// Independent random streams, one per (tuple, player) pair, derived from a
/// single root seed. A draw on one stream never shifts another, so the reward
/// sequence of a tuple depends only on the seed and how often it was pulled.
class RewardStreams {
 public:
  struct Stream {
    std::mt19937_64 engine;
    std::normal_distribution<double> normal{0.0, 1.0};
  };

  RewardStreams(std::uint64_t seed, std::size_t tuples, std::size_t players);

  std::uint64_t seed() const { return seed_; }
  Stream& at(std::size_t flat, std::size_t player) { return streams_[flat * players_ + player]; }

 private:
  std::uint64_t seed_;
  std::size_t players_;
  std::vector<Stream> streams_;
};

struct Gaussian {
  double mean;
  double std;
  bool operator==(const Gaussian&) const = default;
};

struct Uniform {
  double center;
  double half_width;
  bool operator==(const Uniform&) const = default;
};

using RewardDistribution = std::variant<Gaussian, Uniform>;

double distribution_mean(const RewardDistribution& dist);
double draw(const RewardDistribution& dist, RewardStreams::Stream& stream);

/// Rewards for joint actions plus the ground truth needed for regret accounting.
///
/// Instances hold mutable per-run state (Markov chain positions) and are meant
/// to be confined to one run; clone() gives a fresh, reset copy for another.
class Environment {
 public:
  virtual ~Environment() = default;

  const ArmSpace& space() const { return space_; }
  /// True means, indexed by flat tuple index.
  const std::vector<double>& means() const { return means_; }
  const std::vector<double>& gaps() const { return gaps_; }
  double mu_star() const { return mu_star_; }
  std::size_t optimal_flat() const { return optimal_flat_; }
  double mean(const ArmTuple& a) const { return means_[space_.flat_index(a)]; }
  double gap(const ArmTuple& a) const { return gaps_[space_.flat_index(a)]; }

  /// One draw delivered identically to every player.
  double sample_common(const ArmTuple& a, RewardStreams& rng) { return sample_common(space_.flat_index(a), rng); }
  virtual double sample_common(std::size_t flat, RewardStreams& rng) = 0;

  /// One independent draw per player.
  std::vector<double> sample_independent(const ArmTuple& a, RewardStreams& rng);
  virtual void sample_independent(std::size_t flat, RewardStreams& rng, std::span<double> out) = 0;

  virtual std::unique_ptr<Environment> clone() const = 0;

 protected:
  Environment(ArmSpace space, std::vector<double> means);

 private:
  ArmSpace space_;
  std::vector<double> means_;
  std::vector<double> gaps_;
  double mu_star_ = 0.0;
  std::size_t optimal_flat_ = 0;
};

/// IID rewards: each tuple has a fixed Gaussian or uniform distribution.
/// Gaussian draws are not clipped to [0, 1].
class IidEnv : public Environment {
 public:
  IidEnv(ArmSpace space, std::vector<RewardDistribution> dists);

  const std::vector<RewardDistribution>& distributions() const { return dists_; }

  using Environment::sample_common;
  using Environment::sample_independent;
  double sample_common(std::size_t flat, RewardStreams& rng) override;
  void sample_independent(std::size_t flat, RewardStreams& rng, std::span<double> out) override;
  std::unique_ptr<Environment> clone() const override { return std::make_unique<IidEnv>(*this); }

 private:
  std::vector<RewardDistribution> dists_;
};

/// Gaussian arms with means and standard deviations drawn uniformly from the
/// given ranges: means in [lo, hi], standard deviations in (lo, hi].
IidEnv random_gaussian_env(const ArmSpace& space, std::pair<double, double> mean_range,
                           std::pair<double, double> std_range, std::uint64_t seed);

struct MarkovChainSpec {
  std::vector<double> rewards;                  // per-state reward in [0, 1]
  std::vector<std::vector<double>> transition;  // row-stochastic
  std::size_t initial_state = 0;
  bool operator==(const MarkovChainSpec&) const = default;
};

/// Stationary distribution of an irreducible aperiodic chain (solves pi P = pi, sum pi = 1).
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

/// Rested Markov rewards: each tuple owns a chain that emits the reward of its
/// current state and advances one step only when that tuple is pulled. Only the
/// common-reward feedback is defined.
class MarkovEnv : public Environment {
 public:
  /// Throws InvalidInput unless every chain is row-stochastic, irreducible and aperiodic.
  MarkovEnv(ArmSpace space, std::vector<MarkovChainSpec> chains);

  const std::vector<MarkovChainSpec>& chains() const { return chains_; }
  std::size_t current_state(const ArmTuple& a) const { return state_[space().flat_index(a)]; }

  using Environment::sample_common;
  using Environment::sample_independent;
  double sample_common(std::size_t flat, RewardStreams& rng) override;
  /// Throws InvalidInput: the rested chain model has one shared chain per tuple.
  void sample_independent(std::size_t flat, RewardStreams& rng, std::span<double> out) override;
  std::unique_ptr<Environment> clone() const override;

 private:
  std::vector<MarkovChainSpec> chains_;
  std::vector<std::size_t> state_;
};

/// Two players, two arms each, uniform rewards of width 0.1 around
///   mu(1,1) = 0.90, mu(1,2) = mu(2,1) = 0.88, mu(2,2) = 0.30.
/// One noisy sample of (2,1) can beat one of (1,1), which is what lets two
/// independent mUCB learners lock onto (2,2) with positive probability.
class CounterexampleEnv : public IidEnv {
 public:
  CounterexampleEnv();
  std::unique_ptr<Environment> clone() const override { return std::make_unique<CounterexampleEnv>(*this); }
};

CounterexampleEnv build_counterexample();

}  // namespace mpbandit
