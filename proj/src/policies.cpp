#include "mpbandit/policies.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "mpbandit/errors.hpp"
#include "mpbandit/kernels.hpp"
#include "mpbandit/rng.hpp"

namespace mpbandit {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Mucb:
      return "mucb";
    case Algorithm::Mdsee:
      return "mdsee";
    case Algorithm::AgnosticUcb:
      return "agnostic_ucb";
    case Algorithm::Other:
      return "other";
  }
  return "other";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "mucb") return Algorithm::Mucb;
  if (text == "mdsee") return Algorithm::Mdsee;
  if (text == "agnostic_ucb") return Algorithm::AgnosticUcb;
  throw InvalidInput("unknown algorithm '" + std::string(text) + "' (expected mucb, mdsee or agnostic_ucb)");
}

double ucb_bonus_numerator(std::uint64_t t) { return 4.0 * std::log(static_cast<double>(t)); }

// ---------------------------------------------------------------------------
// UcbTable

UcbTable::UcbTable(std::size_t arms) : means_(arms, 0.0), counts_(arms, 0.0) {
  if (arms == 0) throw InvalidInput("UCB table needs at least one arm");
}

std::uint64_t UcbTable::total_count() const {
  std::uint64_t total = 0;
  for (double c : counts_) total += static_cast<std::uint64_t>(c);
  return total;
}

void UcbTable::record(std::size_t arm, double reward) {
  counts_[arm] += 1.0;
  means_[arm] += (reward - means_[arm]) / counts_[arm];
}

UcbIndex UcbTable::index(std::size_t arm) const {
  if (round_ == 0) throw InvalidState("UCB index is undefined before the first round");
  if (counts_[arm] == 0.0) return UcbIndex::infinity();
  return UcbIndex::finite(means_[arm] + std::sqrt(ucb_bonus_numerator(round_) / counts_[arm]));
}

std::size_t UcbTable::argmax() const {
  if (round_ == 0) throw InvalidState("UCB index is undefined before the first round");
  return kernels::ucb_argmax(means_, counts_, ucb_bonus_numerator(round_));
}

UcbIndex ucb_index(const UcbTable& table, const ArmSpace& space, const ArmTuple& a) {
  if (table.arms() != space.size()) throw InvalidInput("table does not cover the arm space");
  return table.index(space.flat_index(a));
}

// ---------------------------------------------------------------------------
// MucbPlayer

MucbPlayer::MucbPlayer(std::size_t player, ArmSpace space)
    : MucbPlayer(player, space, UcbTable(space.size())) {}

MucbPlayer::MucbPlayer(std::size_t player, ArmSpace space, UcbTable table)
    : player_(player), space_(std::move(space)), table_(std::move(table)) {
  if (player_ >= space_.players()) throw InvalidInput("player index out of range");
  if (table_.arms() != space_.size()) throw InvalidInput("table does not cover the arm space");
}

int MucbPlayer::own_component() {
  pending_ = true;
  return space_.component(*anticipated_, player_);
}

int MucbPlayer::select(std::uint64_t t) {
  if (pending_) throw InvalidState("select called twice without feedback");
  if (t != table_.round() + 1) {
    throw InvalidState("mUCB expects round " + std::to_string(table_.round() + 1) + ", got " +
                       std::to_string(t));
  }
  if (t <= space_.size()) {
    table_.begin_round(t);
    anticipated_ = static_cast<std::size_t>(t - 1);
    return own_component();
  }
  return select_by_index();
}

int MucbPlayer::select_by_index() {
  if (pending_) throw InvalidState("select called twice without feedback");
  const std::uint64_t t = table_.round() + 1;
  if (t <= space_.size()) throw InvalidState("index selection starts after the initial sweep");
  table_.begin_round(t);
  anticipated_ = table_.argmax();
  return own_component();
}

void MucbPlayer::update(double reward) {
  if (!pending_) throw InvalidState("update without a prior select");
  table_.record(*anticipated_, reward);
  pending_ = false;
}

void MucbPlayer::observe(const Feedback& feedback) {
  if (!pending_) throw InvalidState("feedback without a prior select");
  const std::size_t attributed =
      feedback.joint_action ? space_.flat_index(*feedback.joint_action) : *anticipated_;
  table_.record(attributed, feedback.own_reward);
  pending_ = false;
}

std::optional<ArmTuple> MucbPlayer::anticipated_joint() const {
  if (!anticipated_) return std::nullopt;
  return space_.tuple_at(*anticipated_);
}

// ---------------------------------------------------------------------------
// DseePlayer

DseePlayer::DseePlayer(std::size_t player, ArmSpace space, KSchedule k_of_lambda, std::uint64_t seed)
    : player_(player),
      space_(std::move(space)),
      k_of_lambda_(std::move(k_of_lambda)),
      tie_break_(make_engine(seed, {0x64736565ULL, player})),
      means_(space_.size(), 0.0),
      counts_(space_.size(), 0) {
  if (player_ >= space_.players()) throw InvalidInput("player index out of range");
  const std::uint64_t first_block = k_of_lambda_(1) * static_cast<std::uint64_t>(space_.size());
  // floor(log2(x)) + 1 == bit_width(x)
  const auto exponent = std::bit_width(first_block);
  if (exponent >= 63) throw InvalidInput("first exploration block too long");
  first_boundary_ = std::uint64_t{1} << exponent;
}

int DseePlayer::select(std::uint64_t t) {
  if (awaiting_) throw InvalidState("select called twice without feedback");
  if (t != last_round_ + 1) {
    throw InvalidState("mDSEE expects round " + std::to_string(last_round_ + 1) + ", got " +
                       std::to_string(t));
  }
  last_round_ = t;
  awaiting_ = true;
  if (!exploring_ && t == next_boundary_) {
    ++phase_;
    exploring_ = true;
    block_position_ = 0;
    block_repeats_ = k_of_lambda_(phase_);
  }
  if (exploring_) {
    const auto flat = static_cast<std::size_t>(block_position_ / block_repeats_);
    pending_ = flat;
    return space_.component(flat, player_);
  }
  pending_.reset();
  return space_.component(committed_, player_);
}

void DseePlayer::observe(const Feedback& feedback) {
  if (!awaiting_) throw InvalidState("feedback without a prior select");
  awaiting_ = false;
  if (!pending_) return;
  const std::size_t flat = *pending_;
  pending_.reset();
  counts_[flat] += 1;
  means_[flat] += (feedback.own_reward - means_[flat]) / static_cast<double>(counts_[flat]);
  ++block_position_;
  if (block_position_ == block_repeats_ * static_cast<std::uint64_t>(space_.size())) commit(last_round_);
}

void DseePlayer::commit(std::uint64_t t) {
  exploring_ = false;
  double best = means_[0];
  for (double m : means_) best = std::max(best, m);
  std::vector<std::size_t> maximizers;
  for (std::size_t k = 0; k < means_.size(); ++k) {
    if (means_[k] == best) maximizers.push_back(k);
  }
  if (maximizers.size() == 1) {
    committed_ = maximizers.front();
  } else {
    std::uniform_int_distribution<std::size_t> pick(0, maximizers.size() - 1);
    committed_ = maximizers[pick(tie_break_)];
  }
  std::uint64_t boundary = first_boundary_;
  while (boundary <= t) boundary <<= 1;
  next_boundary_ = boundary;
}

std::optional<ArmTuple> DseePlayer::committed() const {
  if (phase_ == 0 || exploring_) return std::nullopt;
  return space_.tuple_at(committed_);
}

// ---------------------------------------------------------------------------
// AgnosticUcbPlayer

AgnosticUcbPlayer::AgnosticUcbPlayer(std::size_t player, int arms)
    : player_(player), table_(static_cast<std::size_t>(arms > 0 ? arms : 0)) {}

int AgnosticUcbPlayer::select(std::uint64_t t) {
  if (pending_) throw InvalidState("select called twice without feedback");
  if (t != table_.round() + 1) {
    throw InvalidState("UCB expects round " + std::to_string(table_.round() + 1) + ", got " +
                       std::to_string(t));
  }
  table_.begin_round(t);
  pending_ = t <= table_.arms() ? static_cast<std::size_t>(t - 1) : table_.argmax();
  return static_cast<int>(*pending_) + 1;
}

void AgnosticUcbPlayer::observe(const Feedback& feedback) {
  if (!pending_) throw InvalidState("feedback without a prior select");
  table_.record(*pending_, feedback.own_reward);
  pending_.reset();
}

// ---------------------------------------------------------------------------

std::vector<std::unique_ptr<Player>> make_players(Algorithm algorithm, const ArmSpace& space,
                                                  const KSchedule& k_of_lambda, std::uint64_t seed) {
  std::vector<std::unique_ptr<Player>> players;
  players.reserve(space.players());
  for (std::size_t i = 0; i < space.players(); ++i) {
    switch (algorithm) {
      case Algorithm::Mucb:
        players.push_back(std::make_unique<MucbPlayer>(i, space));
        break;
      case Algorithm::Mdsee:
        players.push_back(std::make_unique<DseePlayer>(i, space, k_of_lambda, seed));
        break;
      case Algorithm::AgnosticUcb:
        players.push_back(std::make_unique<AgnosticUcbPlayer>(i, space.arms(i)));
        break;
      case Algorithm::Other:
        throw InvalidInput("no built-in player for algorithm 'other'");
    }
  }
  return players;
}

}  // namespace mpbandit
