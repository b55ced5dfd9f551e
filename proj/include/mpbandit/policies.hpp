#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

#include "mpbandit/arm_space.hpp"
#include "mpbandit/feedback.hpp"

namespace mpbandit {

enum class Algorithm { Mucb, Mdsee, AgnosticUcb, Other };

std::string_view to_string(Algorithm a);
/// Accepts "mucb", "mdsee", "agnostic_ucb".
Algorithm parse_algorithm(std::string_view text);

/// UCB score that may be +infinity (unsampled arm). The infinite state is a
/// flag, ordered above every finite value, so no arithmetic ever sees it.
struct UcbIndex {
  bool infinite = false;
  double value = 0.0;

  static UcbIndex infinity() { return {true, 0.0}; }
  static UcbIndex finite(double v) { return {false, v}; }

  std::partial_ordering operator<=>(const UcbIndex& other) const {
    if (infinite || other.infinite) return infinite <=> other.infinite;
    return value <=> other.value;
  }
  bool operator==(const UcbIndex& other) const {
    return infinite == other.infinite && (infinite || value == other.value);
  }
};

/// sqrt(2 ln(1/delta)) squared with delta = 1/t^2, i.e. 4 ln t.
double ucb_bonus_numerator(std::uint64_t t);

/// Pull counts and running means over a set of arms (joint tuples or own arms).
///
/// `round()` is the round currently being played: begin_round() moves it to
/// t, record() folds in that round's reward, so after a completed round the
/// counts sum to round().
class UcbTable {
 public:
  explicit UcbTable(std::size_t arms);

  std::size_t arms() const { return means_.size(); }
  std::uint64_t round() const { return round_; }
  std::uint64_t count(std::size_t arm) const { return static_cast<std::uint64_t>(counts_[arm]); }
  double mean(std::size_t arm) const { return means_[arm]; }
  std::uint64_t total_count() const;

  void begin_round(std::uint64_t t) { round_ = t; }
  /// mean <- mean + (x - mean) / n.
  void record(std::size_t arm, double reward);

  /// Throws InvalidState if no round has started.
  UcbIndex index(std::size_t arm) const;
  /// Arm with the largest index, smallest arm on ties. Throws InvalidState if no round has started.
  std::size_t argmax() const;

  bool operator==(const UcbTable&) const = default;

 private:
  std::vector<double> means_;
  std::vector<double> counts_;  // exact integers; doubles feed the SIMD kernel directly
  std::uint64_t round_ = 0;
};

/// Index of joint tuple `a` in a table over the joint space.
UcbIndex ucb_index(const UcbTable& table, const ArmSpace& space, const ArmTuple& a);

/// A decentralized learner. The simulator calls select(t) then observe() once
/// per round, t = 1, 2, ...; a player never sees anything but its Feedback.
class Player {
 public:
  virtual ~Player() = default;

  virtual Algorithm algorithm() const = 0;
  /// Own arm for round t, 1-based.
  virtual int select(std::uint64_t t) = 0;
  virtual void observe(const Feedback& feedback) = 0;
  /// The joint tuple this player expects everyone to play this round, if it models one.
  virtual std::optional<ArmTuple> anticipated_joint() const { return std::nullopt; }
  /// Flat index of anticipated_joint(); avoids building the tuple every round.
  virtual std::optional<std::size_t> anticipated_flat() const { return std::nullopt; }
};

/// Multi-player UCB over joint tuples.
///
/// Rounds 1..K_max follow the shared round-robin sweep; afterwards every
/// player computes the joint argmax of the index, ties going to the
/// lexicographically smallest tuple, and plays its own component. Rewards are
/// attributed to the observed joint action when the feedback carries one,
/// otherwise to the anticipated tuple.
class MucbPlayer final : public Player {
 public:
  MucbPlayer(std::size_t player, ArmSpace space);
  /// Starts from an existing table (its round() must be the last completed round).
  MucbPlayer(std::size_t player, ArmSpace space, UcbTable table);

  Algorithm algorithm() const override { return Algorithm::Mucb; }
  int select(std::uint64_t t) override;
  void observe(const Feedback& feedback) override;
  std::optional<ArmTuple> anticipated_joint() const override;
  std::optional<std::size_t> anticipated_flat() const override { return anticipated_; }

  /// Index-driven choice for round table().round() + 1; throws InvalidState
  /// while the initial sweep is still running.
  int select_by_index();
  /// Folds `reward` into the selected tuple; throws InvalidState without a prior select.
  void update(double reward);

  std::size_t player_index() const { return player_; }
  const UcbTable& table() const { return table_; }
  const ArmSpace& space() const { return space_; }

 private:
  int own_component();

  std::size_t player_;
  ArmSpace space_;
  UcbTable table_;
  std::optional<std::size_t> anticipated_;
  bool pending_ = false;
};

/// Explore-then-commit with exploration phases restarted at powers of two.
///
/// Phase lambda plays the exploration block with K(lambda) repeats per tuple
/// and records the rewards; the player then commits to the tuple with the
/// best sample mean (uniformly random among ties, own random stream) until the
/// next eligible power of two, t = 2^n with n >= floor(log2(K(1) K_max)) + 1.
/// Boundaries that arrive during an exploration block are skipped.
class DseePlayer final : public Player {
 public:
  DseePlayer(std::size_t player, ArmSpace space, KSchedule k_of_lambda, std::uint64_t seed);

  Algorithm algorithm() const override { return Algorithm::Mdsee; }
  int select(std::uint64_t t) override;
  void observe(const Feedback& feedback) override;

  std::uint64_t phase() const { return phase_; }
  bool exploring() const { return exploring_; }
  std::optional<ArmTuple> committed() const;
  std::uint64_t next_boundary() const { return next_boundary_; }
  std::uint64_t exploration_count(const ArmTuple& a) const { return counts_[space_.flat_index(a)]; }
  double sample_mean(const ArmTuple& a) const { return means_[space_.flat_index(a)]; }
  /// 2^n for the smallest eligible n.
  std::uint64_t first_boundary() const { return first_boundary_; }

 private:
  void commit(std::uint64_t t);

  std::size_t player_;
  ArmSpace space_;
  KSchedule k_of_lambda_;
  std::mt19937_64 tie_break_;
  std::vector<double> means_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t phase_ = 0;
  bool exploring_ = false;
  std::uint64_t block_position_ = 0;
  std::uint64_t block_repeats_ = 1;
  std::size_t committed_ = 0;
  std::uint64_t first_boundary_ = 0;
  std::uint64_t next_boundary_ = 1;
  std::uint64_t last_round_ = 0;
  std::optional<std::size_t> pending_;  // exploration tuple awaiting its reward
  bool awaiting_ = false;
};

/// Single-player UCB over the player's own arms; ignores the others entirely.
class AgnosticUcbPlayer final : public Player {
 public:
  AgnosticUcbPlayer(std::size_t player, int arms);

  Algorithm algorithm() const override { return Algorithm::AgnosticUcb; }
  int select(std::uint64_t t) override;
  void observe(const Feedback& feedback) override;

  const UcbTable& table() const { return table_; }

 private:
  std::size_t player_;
  UcbTable table_;
  std::optional<std::size_t> pending_;
};

/// One player object per seat for `algorithm`. `seed` feeds any
/// player-private randomness (mDSEE tie-breaks), one stream per player.
std::vector<std::unique_ptr<Player>> make_players(Algorithm algorithm, const ArmSpace& space,
                                                  const KSchedule& k_of_lambda, std::uint64_t seed);

}  // namespace mpbandit
