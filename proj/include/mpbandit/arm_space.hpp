#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace mpbandit {

/// One joint action: component i is the arm picked by player i, 1-based.
class ArmTuple {
 public:
  ArmTuple() = default;
  ArmTuple(std::initializer_list<int> components) : components_(components) {}
  explicit ArmTuple(std::vector<int> components) : components_(std::move(components)) {}

  std::size_t size() const { return components_.size(); }
  int operator[](std::size_t player) const { return components_[player]; }
  int& operator[](std::size_t player) { return components_[player]; }
  std::span<const int> components() const { return components_; }

  bool operator==(const ArmTuple&) const = default;

  std::string to_string() const;

 private:
  std::vector<int> components_;
};

/// Strict lexicographic order: the first differing component decides.
/// Throws InvalidInput when the tuples have different lengths.
std::strong_ordering lex_compare(const ArmTuple& x, const ArmTuple& y);

/// The product action set K_1 x ... x K_M shared a priori by all players.
///
/// Tuples are addressed by a flat index in [0, size()) that follows the
/// lexicographic order with the last player's component varying fastest, so
/// comparing flat indices is the same as lex_compare on the tuples.
class ArmSpace {
 public:
  explicit ArmSpace(std::vector<int> arm_counts);
  ArmSpace(std::initializer_list<int> arm_counts)
      : ArmSpace(std::vector<int>(arm_counts)) {}

  std::size_t players() const { return arm_counts_.size(); }
  int arms(std::size_t player) const { return arm_counts_[player]; }
  const std::vector<int>& arm_counts() const { return arm_counts_; }
  /// K_1 * ... * K_M.
  std::size_t size() const { return size_; }

  bool contains(const ArmTuple& a) const;
  /// Throws InvalidInput if `a` is not in the space.
  std::size_t flat_index(const ArmTuple& a) const;
  ArmTuple tuple_at(std::size_t flat) const;
  /// Component `player` (1-based arm) of the tuple at `flat`, without building the tuple.
  int component(std::size_t flat, std::size_t player) const;
  /// Number of consecutive flat indices sharing player's component: K_{i+1} * ... * K_M.
  std::size_t stride(std::size_t player) const { return strides_[player]; }

  bool operator==(const ArmSpace& other) const { return arm_counts_ == other.arm_counts_; }

 private:
  std::vector<int> arm_counts_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

/// Per-phase exploration budget K(lambda) for explore-then-commit.
///
/// Monotone non-decreasing and diverging for the identity and ceil-log2
/// kinds. A table schedule repeats its last entry past the end, so it is only
/// diverging up to the table length.
class KSchedule {
 public:
  enum class Kind { Identity, CeilLog2, Table };

  static KSchedule identity() { return KSchedule(Kind::Identity, {}); }
  static KSchedule ceil_log2() { return KSchedule(Kind::CeilLog2, {}); }
  /// Throws InvalidInput unless the table is non-empty, positive and non-decreasing.
  static KSchedule table(std::vector<std::uint64_t> values);

  Kind kind() const { return kind_; }
  const std::vector<std::uint64_t>& values() const { return table_; }

  /// K(lambda) for lambda >= 1; throws InvalidInput for lambda == 0.
  std::uint64_t operator()(std::uint64_t lambda) const;

  bool operator==(const KSchedule&) const = default;

 private:
  KSchedule(Kind kind, std::vector<std::uint64_t> table)
      : kind_(kind), table_(std::move(table)) {}

  Kind kind_;
  std::vector<std::uint64_t> table_;
};

/// A lazily indexed exploration block: every tuple of the space, in
/// lexicographic order, each held for `repeats` consecutive rounds.
///
/// With repeats == 1 this is the initial round-robin sweep; with repeats ==
/// K(lambda) it is the lambda-th explore-then-commit exploration phase. Both
/// coincide with each player independently following the per-player rule
/// "hold each own arm for repeats * K_{i+1}...K_M rounds, sweep
/// K_1...K_{i-1} times".
class ExplorationBlock {
 public:
  ExplorationBlock(ArmSpace space, std::uint64_t repeats);

  std::uint64_t size() const { return static_cast<std::uint64_t>(space_.size()) * repeats_; }
  std::uint64_t repeats() const { return repeats_; }

  std::size_t flat_at(std::uint64_t position) const {
    return static_cast<std::size_t>(position / repeats_);
  }
  ArmTuple operator[](std::uint64_t position) const { return space_.tuple_at(flat_at(position)); }

  std::vector<ArmTuple> materialize() const;

 private:
  ArmSpace space_;
  std::uint64_t repeats_;
};

ExplorationBlock initial_schedule(const ArmSpace& space);
/// Throws InvalidInput for phase == 0.
ExplorationBlock dsee_schedule(const ArmSpace& space, const KSchedule& k_of_lambda,
                               std::uint64_t phase);

}  // namespace mpbandit
