#include "mpbandit/feedback.hpp"

#include <string>

#include "mpbandit/errors.hpp"

namespace mpbandit {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::A:
      return "A";
    case Variant::BPrime:
      return "B_prime";
    case Variant::B:
      return "B";
  }
  return "?";
}

std::string_view to_string(RewardModel m) { return m == RewardModel::Iid ? "iid" : "markov"; }

Variant parse_variant(std::string_view text) {
  if (text == "A") return Variant::A;
  if (text == "B_prime") return Variant::BPrime;
  if (text == "B") return Variant::B;
  throw InvalidInput("unknown variant '" + std::string(text) + "' (expected A, B_prime or B)");
}

RewardModel parse_reward_model(std::string_view text) {
  if (text == "iid") return RewardModel::Iid;
  if (text == "markov") return RewardModel::Markov;
  throw InvalidInput("unknown reward_model '" + std::string(text) + "' (expected iid or markov)");
}

void ProblemVariant::validate() const {
  if (reward_model == RewardModel::Markov && variant != Variant::A) {
    throw ConfigError("markov rewards are only defined for variant A (common reward)");
  }
}

}  // namespace mpbandit
