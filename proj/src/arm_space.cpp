#include "mpbandit/arm_space.hpp"

#include <bit>
#include <limits>

#include "mpbandit/errors.hpp"

namespace mpbandit {

std::string ArmTuple::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i != 0) out += ',';
    out += std::to_string(components_[i]);
  }
  out += ')';
  return out;
}

std::strong_ordering lex_compare(const ArmTuple& x, const ArmTuple& y) {
  if (x.size() != y.size()) {
    throw InvalidInput("lex_compare: tuples of length " + std::to_string(x.size()) + " and " +
                       std::to_string(y.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return x[i] <=> y[i];
  }
  return std::strong_ordering::equal;
}

ArmSpace::ArmSpace(std::vector<int> arm_counts) : arm_counts_(std::move(arm_counts)) {
  if (arm_counts_.empty()) throw InvalidInput("arm space needs at least one player");
  strides_.assign(arm_counts_.size(), 1);
  std::size_t product = 1;
  for (std::size_t i = arm_counts_.size(); i-- > 0;) {
    if (arm_counts_[i] < 1) {
      throw InvalidInput("player " + std::to_string(i + 1) + " has " +
                         std::to_string(arm_counts_[i]) + " arms; need at least 1");
    }
    strides_[i] = product;
    if (product > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(arm_counts_[i])) {
      throw InvalidInput("arm space too large");
    }
    product *= static_cast<std::size_t>(arm_counts_[i]);
  }
  size_ = product;
}

bool ArmSpace::contains(const ArmTuple& a) const {
  if (a.size() != arm_counts_.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 1 || a[i] > arm_counts_[i]) return false;
  }
  return true;
}

std::size_t ArmSpace::flat_index(const ArmTuple& a) const {
  if (!contains(a)) throw InvalidInput("tuple " + a.to_string() + " is not in the arm space");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < a.size(); ++i) flat += static_cast<std::size_t>(a[i] - 1) * strides_[i];
  return flat;
}

int ArmSpace::component(std::size_t flat, std::size_t player) const {
  return static_cast<int>((flat / strides_[player]) % static_cast<std::size_t>(arm_counts_[player])) + 1;
}

ArmTuple ArmSpace::tuple_at(std::size_t flat) const {
  if (flat >= size_) throw InvalidInput("flat index " + std::to_string(flat) + " out of range");
  std::vector<int> c(arm_counts_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = component(flat, i);
  return ArmTuple(std::move(c));
}

KSchedule KSchedule::table(std::vector<std::uint64_t> values) {
  if (values.empty()) throw InvalidInput("K schedule table is empty");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0) throw InvalidInput("K schedule entries must be positive");
    if (i > 0 && values[i] < values[i - 1]) throw InvalidInput("K schedule must be non-decreasing");
  }
  return KSchedule(Kind::Table, std::move(values));
}

std::uint64_t KSchedule::operator()(std::uint64_t lambda) const {
  if (lambda == 0) throw InvalidInput("K(lambda) is defined for lambda >= 1");
  switch (kind_) {
    case Kind::Identity:
      return lambda;
    case Kind::CeilLog2:
      // ceil(log2(lambda + 1))
      return static_cast<std::uint64_t>(std::bit_width(lambda));
    case Kind::Table:
      return lambda <= table_.size() ? table_[lambda - 1] : table_.back();
  }
  return lambda;
}

ExplorationBlock::ExplorationBlock(ArmSpace space, std::uint64_t repeats)
    : space_(std::move(space)), repeats_(repeats) {
  if (repeats == 0) throw InvalidInput("exploration block needs at least one pull per tuple");
}

std::vector<ArmTuple> ExplorationBlock::materialize() const {
  std::vector<ArmTuple> out;
  out.reserve(size());
  for (std::uint64_t p = 0; p < size(); ++p) out.push_back((*this)[p]);
  return out;
}

ExplorationBlock initial_schedule(const ArmSpace& space) { return ExplorationBlock(space, 1); }

ExplorationBlock dsee_schedule(const ArmSpace& space, const KSchedule& k_of_lambda,
                               std::uint64_t phase) {
  if (phase == 0) throw InvalidInput("exploration phases are numbered from 1");
  return ExplorationBlock(space, k_of_lambda(phase));
}

}  // namespace mpbandit
