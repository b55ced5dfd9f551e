#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "mpbandit/arm_space.hpp"
#include "mpbandit/environments.hpp"
#include "mpbandit/feedback.hpp"
#include "mpbandit/policies.hpp"

namespace mpbandit {

/// Maximum allowed |pseudo_regret - sum_a gap_a * pulls_a| at a checkpoint.
inline constexpr double kDecompositionTolerance = 1e-9;

/// {1..100} united with round(10^(k/50)) for k = 0, 1, ... while <= horizon,
/// plus the horizon itself; sorted, no duplicates.
std::vector<std::uint64_t> default_checkpoint_grid(std::uint64_t horizon);

struct Checkpoint {
  std::uint64_t t = 0;
  double pseudo_regret = 0.0;
  /// t * mu_star minus the rewards player 1 received.
  double realized_regret = 0.0;
};

/// Per-run regret accounting.
///
/// The pseudo-regret is accumulated round by round with compensated
/// summation; at each checkpoint it is checked against the pull-count
/// decomposition sum_a gap_a * pulls_a.
class RegretLedger {
 public:
  explicit RegretLedger(std::size_t tuples) : pulls_(tuples, 0) {}

  void record_round(std::size_t flat, double gap, double reward);
  /// Throws InvalidState if the decomposition residual exceeds kDecompositionTolerance.
  void checkpoint(std::uint64_t t, std::span<const double> gaps, double mu_star);

  double pseudo_regret() const { return regret_sum_ + regret_carry_; }
  const std::vector<std::uint64_t>& pulls() const { return pulls_; }
  const std::vector<Checkpoint>& checkpoints() const { return checkpoints_; }
  double max_decomposition_residual() const { return max_residual_; }
  std::uint64_t coordination_violations() const { return coordination_violations_; }
  std::uint64_t rounds() const { return rounds_; }
  /// Realized joint action per round (flat index); empty unless tracing was requested.
  const std::vector<std::uint32_t>& joint_trace() const { return trace_; }

 private:
  friend class EpisodeRunner;

  std::vector<std::uint64_t> pulls_;
  std::vector<Checkpoint> checkpoints_;
  double regret_sum_ = 0.0;
  double regret_carry_ = 0.0;
  double reward_sum_ = 0.0;
  double reward_carry_ = 0.0;
  double max_residual_ = 0.0;
  std::uint64_t coordination_violations_ = 0;
  std::uint64_t rounds_ = 0;
  std::vector<std::uint32_t> trace_;
};

/// Sum of gap_a * pulls_a, the pull-count form of pseudo-regret.
double decomposed_regret(std::span<const double> gaps, std::span<const std::uint64_t> pulls);

/// Throws ConfigError if `algorithm` may not be run under `problem`:
/// markov rewards need variant A; mUCB under variant B only with
/// allow_negative_result.
void check_compatibility(Algorithm algorithm, const ProblemVariant& problem, bool allow_negative_result);

struct EpisodeOptions {
  std::uint64_t horizon = 1;
  std::uint64_t seed = 0;
  /// Checkpoint rounds; empty means default_checkpoint_grid(horizon).
  std::vector<std::uint64_t> grid;
  bool allow_negative_result = false;
  bool record_trace = false;
};

/// Plays `horizon` rounds. Each player receives only the Feedback fields its
/// variant permits. In variant A the realized joint action is compared against
/// every player's anticipated tuple and mismatches are counted.
RegretLedger run_episode(Environment& env, const ProblemVariant& problem,
                         std::span<const std::unique_ptr<Player>> players, const EpisodeOptions& options);

struct ExperimentSpec {
  Algorithm algorithm = Algorithm::Mucb;
  ProblemVariant problem;
  std::shared_ptr<const Environment> environment;
  std::uint64_t horizon = 1;
  std::uint64_t runs = 1;
  std::uint64_t seed = 0;
  KSchedule k_schedule = KSchedule::identity();
  std::vector<std::uint64_t> grid;
  bool allow_negative_result = false;
  bool record_trace = false;
};

struct ExperimentResult {
  Algorithm algorithm = Algorithm::Mucb;
  Variant variant = Variant::A;
  std::vector<std::uint64_t> grid;
  std::vector<std::uint64_t> seeds;
  /// runs x grid, row-major.
  std::vector<double> pseudo_regret;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<RegretLedger> ledgers;

  std::size_t runs() const { return seeds.size(); }
  double at(std::size_t run, std::size_t column) const { return pseudo_regret[run * grid.size() + column]; }
  std::span<const double> row(std::size_t run) const {
    return std::span<const double>(pseudo_regret).subspan(run * grid.size(), grid.size());
  }
};

/// Runs seeds seed, seed+1, ..., seed+runs-1 against clones of one
/// environment and aggregates mean and sample std per checkpoint.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace mpbandit
