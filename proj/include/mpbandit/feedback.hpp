#pragma once

#include <optional>
#include <string_view>

#include "mpbandit/arm_space.hpp"

namespace mpbandit {

/// Which information each player gets after a round.
enum class Variant {
  A,       // actions unobserved, common reward
  BPrime,  // actions observed, independent rewards
  B,       // actions unobserved, independent rewards
};

enum class RewardModel { Iid, Markov };

std::string_view to_string(Variant v);
std::string_view to_string(RewardModel m);
/// Accepts "A", "B_prime", "B". Throws InvalidInput otherwise.
Variant parse_variant(std::string_view text);
RewardModel parse_reward_model(std::string_view text);

struct ProblemVariant {
  Variant variant = Variant::A;
  RewardModel reward_model = RewardModel::Iid;

  /// Throws ConfigError for markov rewards outside variant A.
  void validate() const;
};

/// What one player is handed after a round. The shape is the information
/// contract: joint_action is set only in variant B', common only in variant A.
struct Feedback {
  double own_reward = 0.0;
  std::optional<ArmTuple> joint_action;
  bool common = false;
};

}  // namespace mpbandit
