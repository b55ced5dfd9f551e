#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mpbandit/arm_space.hpp"
#include "mpbandit/environments.hpp"
#include "mpbandit/feedback.hpp"
#include "mpbandit/policies.hpp"
#include "mpbandit/simulator.hpp"

namespace mpbandit {

struct RandomEnvConfig {
  std::pair<double, double> mean_range{0.1, 0.9};
  std::pair<double, double> std_range{0.0, 0.03};
  std::uint64_t seed = 0;
  bool operator==(const RandomEnvConfig&) const = default;
};

struct ExplicitArmConfig {
  ArmTuple tuple;
  std::variant<Gaussian, Uniform, MarkovChainSpec> model;
  bool operator==(const ExplicitArmConfig&) const = default;
};

struct EnvironmentConfig {
  enum class Kind { Random, Explicit, Counterexample };
  Kind kind = Kind::Random;
  RandomEnvConfig random;
  std::vector<ExplicitArmConfig> arms;
  bool operator==(const EnvironmentConfig&) const = default;
};

/// Everything needed to reproduce one experiment. Defaults are the
/// three-player, two-arm Gaussian protocol: T = 100000, 10 runs.
struct ExperimentConfig {
  Algorithm algorithm = Algorithm::Mucb;
  Variant variant = Variant::A;
  RewardModel reward_model = RewardModel::Iid;
  std::vector<int> arm_counts{2, 2, 2};
  std::uint64_t horizon = 100000;
  std::uint64_t runs = 10;
  std::uint64_t seed = 0;
  EnvironmentConfig environment;
  KSchedule k_schedule = KSchedule::identity();
  /// nullopt selects default_checkpoint_grid(horizon).
  std::optional<std::vector<std::uint64_t>> checkpoint_grid;
  std::string output_path = "results.csv";
  bool allow_negative_result = false;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses a JSON config. Unknown keys, wrong types and rule violations throw
/// ConfigError naming the offending key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Throws ConfigError if the config breaks a validation rule.
void validate(const ExperimentConfig& config);

/// Every field written out explicitly, defaults included; parse_config
/// accepts the result back unchanged.
nlohmann::json to_json(const ExperimentConfig& config);

std::shared_ptr<const Environment> build_environment(const ExperimentConfig& config);
ExperimentSpec to_experiment_spec(const ExperimentConfig& config);

}  // namespace mpbandit
