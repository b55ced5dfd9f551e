#include "mpbandit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mpbandit/errors.hpp"
#include "mpbandit/kernels.hpp"

namespace mpbandit {
namespace {

// Neumaier compensated addition.
void compensated_add(double& sum, double& carry, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    carry += (sum - t) + x;
  } else {
    carry += (x - t) + sum;
  }
  sum = t;
}

}  // namespace

std::vector<std::uint64_t> default_checkpoint_grid(std::uint64_t horizon) {
  if (horizon == 0) throw InvalidInput("horizon must be >= 1");
  std::vector<std::uint64_t> grid;
  for (std::uint64_t t = 1; t <= std::min<std::uint64_t>(100, horizon); ++t) grid.push_back(t);
  for (int k = 0;; ++k) {
    const auto t = static_cast<std::uint64_t>(std::llround(std::pow(10.0, k / 50.0)));
    if (t > horizon) break;
    grid.push_back(t);
  }
  grid.push_back(horizon);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

double decomposed_regret(std::span<const double> gaps, std::span<const std::uint64_t> pulls) {
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t k = 0; k < gaps.size(); ++k) {
    compensated_add(sum, carry, gaps[k] * static_cast<double>(pulls[k]));
  }
  return sum + carry;
}

void RegretLedger::record_round(std::size_t flat, double gap, double reward) {
  ++pulls_[flat];
  ++rounds_;
  compensated_add(regret_sum_, regret_carry_, gap);
  compensated_add(reward_sum_, reward_carry_, reward);
}

void RegretLedger::checkpoint(std::uint64_t t, std::span<const double> gaps, double mu_star) {
  const double pseudo = pseudo_regret();
  const double residual = std::abs(pseudo - decomposed_regret(gaps, pulls_));
  max_residual_ = std::max(max_residual_, residual);
  if (!(residual <= kDecompositionTolerance)) {
    throw InvalidState("regret decomposition violated at t=" + std::to_string(t) +
                       ": residual " + std::to_string(residual));
  }
  checkpoints_.push_back({t, pseudo, static_cast<double>(t) * mu_star - (reward_sum_ + reward_carry_)});
}

void check_compatibility(Algorithm algorithm, const ProblemVariant& problem, bool allow_negative_result) {
  problem.validate();
  if (algorithm == Algorithm::Mucb && problem.variant == Variant::B && !allow_negative_result) {
    throw ConfigError(
        "mucb under variant B needs allow_negative_result = true: without observed actions or a "
        "common reward the players cannot reconstruct the joint action");
  }
}

class EpisodeRunner {
 public:
  static RegretLedger run(Environment& env, const ProblemVariant& problem,
                          std::span<const std::unique_ptr<Player>> players, const EpisodeOptions& options) {
    const ArmSpace& space = env.space();
    const std::size_t m = space.players();
    if (players.size() != m) {
      throw ConfigError("episode needs one player per seat (" + std::to_string(m) + "), got " +
                        std::to_string(players.size()));
    }
    if (options.horizon == 0) throw ConfigError("horizon must be >= 1");
    for (const auto& p : players) check_compatibility(p->algorithm(), problem, options.allow_negative_result);

    const std::vector<std::uint64_t> grid =
        options.grid.empty() ? default_checkpoint_grid(options.horizon) : options.grid;
    RegretLedger ledger(space.size());
    if (options.record_trace) ledger.trace_.reserve(options.horizon);

    RewardStreams rng(options.seed, space.size(), m);
    std::vector<double> rewards(m);
    std::vector<int> arms(m);
    const auto& gaps = env.gaps();
    auto next_checkpoint = grid.begin();

    for (std::uint64_t t = 1; t <= options.horizon; ++t) {
      std::size_t flat = 0;
      for (std::size_t i = 0; i < m; ++i) {
        const int arm = players[i]->select(t);
        if (arm < 1 || arm > space.arms(i)) {
          throw InvalidState("player " + std::to_string(i + 1) + " chose arm " + std::to_string(arm));
        }
        arms[i] = arm;
        flat += static_cast<std::size_t>(arm - 1) * space.stride(i);
      }

      if (problem.variant == Variant::A) {
        for (const auto& p : players) {
          const auto anticipated = p->anticipated_flat();
          if (anticipated && *anticipated != flat) ++ledger.coordination_violations_;
        }
        const double r = env.sample_common(flat, rng);
        std::fill(rewards.begin(), rewards.end(), r);
      } else {
        env.sample_independent(flat, rng, rewards);
      }

      std::optional<ArmTuple> joint;
      if (problem.variant == Variant::BPrime) joint = ArmTuple(arms);
      for (std::size_t i = 0; i < m; ++i) {
        Feedback fb;
        fb.own_reward = rewards[i];
        fb.common = problem.variant == Variant::A;
        fb.joint_action = joint;
        players[i]->observe(fb);
      }

      ledger.record_round(flat, gaps[flat], rewards[0]);
      if (options.record_trace) ledger.trace_.push_back(static_cast<std::uint32_t>(flat));
      while (next_checkpoint != grid.end() && *next_checkpoint < t) ++next_checkpoint;
      if (next_checkpoint != grid.end() && *next_checkpoint == t) {
        ledger.checkpoint(t, gaps, env.mu_star());
        ++next_checkpoint;
      }
    }
    return ledger;
  }
};

RegretLedger run_episode(Environment& env, const ProblemVariant& problem,
                         std::span<const std::unique_ptr<Player>> players, const EpisodeOptions& options) {
  return EpisodeRunner::run(env, problem, players, options);
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.runs == 0) throw ConfigError("runs must be >= 1");
  if (!spec.environment) throw ConfigError("experiment has no environment");
  check_compatibility(spec.algorithm, spec.problem, spec.allow_negative_result);

  ExperimentResult result;
  result.algorithm = spec.algorithm;
  result.variant = spec.problem.variant;
  result.grid = spec.grid.empty() ? default_checkpoint_grid(spec.horizon) : spec.grid;
  for (std::size_t k = 0; k < result.grid.size(); ++k) {
    if (result.grid[k] == 0 || result.grid[k] > spec.horizon || (k > 0 && result.grid[k] <= result.grid[k - 1])) {
      throw ConfigError("checkpoint grid must be strictly increasing within [1, horizon]");
    }
  }
  const std::size_t cols = result.grid.size();
  result.pseudo_regret.reserve(spec.runs * cols);

  EpisodeOptions options;
  options.horizon = spec.horizon;
  options.grid = result.grid;
  options.allow_negative_result = spec.allow_negative_result;
  options.record_trace = spec.record_trace;

  for (std::uint64_t r = 0; r < spec.runs; ++r) {
    const std::uint64_t seed = spec.seed + r;
    options.seed = seed;
    auto env = spec.environment->clone();
    const auto players = make_players(spec.algorithm, env->space(), spec.k_schedule, seed);
    RegretLedger ledger = run_episode(*env, spec.problem, players, options);
    for (const auto& c : ledger.checkpoints()) result.pseudo_regret.push_back(c.pseudo_regret);
    result.seeds.push_back(seed);
    result.ledgers.push_back(std::move(ledger));
  }

  result.mean.resize(cols);
  result.stddev.resize(cols);
  kernels::column_mean_std(result.pseudo_regret, result.runs(), cols, result.mean, result.stddev);
  return result;
}

}  // namespace mpbandit
