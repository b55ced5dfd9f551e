#include "mpbandit/environments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "mpbandit/errors.hpp"
#include "mpbandit/rng.hpp"

namespace mpbandit {

RewardStreams::RewardStreams(std::uint64_t seed, std::size_t tuples, std::size_t players)
    : seed_(seed), players_(players) {
  streams_.reserve(tuples * players);
  for (std::size_t a = 0; a < tuples; ++a) {
    for (std::size_t i = 0; i < players; ++i) streams_.push_back(Stream{make_engine(seed, {a, i}), {}});
  }
}

double distribution_mean(const RewardDistribution& dist) {
  return std::visit([](const auto& d) {
    if constexpr (std::is_same_v<std::decay_t<decltype(d)>, Gaussian>) {
      return d.mean;
    } else {
      return d.center;
    }
  }, dist);
}

double draw(const RewardDistribution& dist, RewardStreams::Stream& stream) {
  if (const auto* g = std::get_if<Gaussian>(&dist)) return g->mean + g->std * stream.normal(stream.engine);
  const auto& u = std::get<Uniform>(dist);
  return u.center + u.half_width * (2.0 * uniform01(stream.engine) - 1.0);
}

Environment::Environment(ArmSpace space, std::vector<double> means)
    : space_(std::move(space)), means_(std::move(means)) {
  if (means_.size() != space_.size()) {
    throw InvalidInput("environment needs exactly one reward model per tuple (" +
                       std::to_string(space_.size()) + " expected, " + std::to_string(means_.size()) +
                       " given)");
  }
  for (double m : means_) {
    if (!std::isfinite(m)) throw InvalidInput("reward means must be finite");
  }
  const auto best = std::max_element(means_.begin(), means_.end());
  optimal_flat_ = static_cast<std::size_t>(best - means_.begin());
  mu_star_ = *best;
  gaps_.resize(means_.size());
  for (std::size_t k = 0; k < means_.size(); ++k) gaps_[k] = mu_star_ - means_[k];
}

std::vector<double> Environment::sample_independent(const ArmTuple& a, RewardStreams& rng) {
  std::vector<double> out(space_.players());
  sample_independent(space_.flat_index(a), rng, out);
  return out;
}

namespace {

std::vector<double> means_of(const std::vector<RewardDistribution>& dists) {
  std::vector<double> m;
  m.reserve(dists.size());
  for (const auto& d : dists) {
    if (const auto* g = std::get_if<Gaussian>(&d)) {
      if (!(g->std >= 0.0) || !std::isfinite(g->std)) throw InvalidInput("gaussian std must be >= 0");
    } else if (const auto* u = std::get_if<Uniform>(&d)) {
      if (!(u->half_width >= 0.0) || !std::isfinite(u->half_width)) {
        throw InvalidInput("uniform half_width must be >= 0");
      }
    }
    m.push_back(distribution_mean(d));
  }
  return m;
}

}  // namespace

IidEnv::IidEnv(ArmSpace space, std::vector<RewardDistribution> dists)
    : Environment(std::move(space), means_of(dists)), dists_(std::move(dists)) {}

double IidEnv::sample_common(std::size_t flat, RewardStreams& rng) {
  return draw(dists_[flat], rng.at(flat, 0));
}

void IidEnv::sample_independent(std::size_t flat, RewardStreams& rng, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = draw(dists_[flat], rng.at(flat, i));
}

IidEnv random_gaussian_env(const ArmSpace& space, std::pair<double, double> mean_range,
                           std::pair<double, double> std_range, std::uint64_t seed) {
  if (!(mean_range.first <= mean_range.second) || !(std_range.first <= std_range.second) ||
      std_range.first < 0.0) {
    throw InvalidInput("random environment ranges must be ordered and std_range non-negative");
  }
  auto engine = make_engine(seed, {0x656e76ULL});
  std::vector<RewardDistribution> dists;
  dists.reserve(space.size());
  for (std::size_t k = 0; k < space.size(); ++k) {
    const double mean = mean_range.first + (mean_range.second - mean_range.first) * uniform01(engine);
    // (lo, hi]: reflect the half-open [0, 1) draw.
    const double std = std_range.second - (std_range.second - std_range.first) * uniform01(engine);
    dists.push_back(Gaussian{mean, std});
  }
  return IidEnv(space, std::move(dists));
}

namespace {

void validate_chain(const MarkovChainSpec& chain, std::size_t which) {
  const std::string where = "markov chain " + std::to_string(which) + ": ";
  const std::size_t n = chain.rewards.size();
  if (n == 0) throw InvalidInput(where + "needs at least one state");
  if (chain.transition.size() != n) throw InvalidInput(where + "transition matrix must be square");
  if (chain.initial_state >= n) throw InvalidInput(where + "initial state out of range");
  for (double r : chain.rewards) {
    if (!(r >= 0.0 && r <= 1.0)) throw InvalidInput(where + "state rewards must lie in [0, 1]");
  }
  for (const auto& row : chain.transition) {
    if (row.size() != n) throw InvalidInput(where + "transition matrix must be square");
    double sum = 0.0;
    for (double p : row) {
      if (!(p >= 0.0)) throw InvalidInput(where + "transition probabilities must be >= 0");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InvalidInput(where + "transition rows must sum to 1");
  }
  // A non-negative matrix is irreducible and aperiodic iff it is primitive,
  // i.e. P^m > 0 entrywise for m = (n - 1)^2 + 1.
  std::vector<std::vector<char>> reach(n, std::vector<char>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) reach[i][j] = chain.transition[i][j] > 0.0;
  }
  const auto step = reach;
  const std::size_t power = (n - 1) * (n - 1) + 1;
  for (std::size_t p = 1; p < power; ++p) {
    std::vector<std::vector<char>> next(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (!reach[i][k]) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] |= step[k][j];
      }
    }
    reach = std::move(next);
  }
  for (const auto& row : reach) {
    for (char c : row) {
      if (!c) throw InvalidInput(where + "chain must be irreducible and aperiodic");
    }
  }
}

std::vector<double> stationary_means(const std::vector<MarkovChainSpec>& chains) {
  std::vector<double> means;
  means.reserve(chains.size());
  for (std::size_t k = 0; k < chains.size(); ++k) {
    validate_chain(chains[k], k);
    const auto pi = stationary_distribution(chains[k].transition);
    double m = 0.0;
    for (std::size_t s = 0; s < pi.size(); ++s) m += pi[s] * chains[k].rewards[s];
    means.push_back(m);
  }
  return means;
}

}  // namespace

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition) {
  const auto n = static_cast<Eigen::Index>(transition.size());
  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = transition[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] - (i == j ? 1.0 : 0.0);
    }
  }
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(b);
  return {pi.data(), pi.data() + n};
}

MarkovEnv::MarkovEnv(ArmSpace space, std::vector<MarkovChainSpec> chains)
    : Environment(std::move(space), stationary_means(chains)), chains_(std::move(chains)) {
  state_.reserve(chains_.size());
  for (const auto& c : chains_) state_.push_back(c.initial_state);
}

double MarkovEnv::sample_common(std::size_t flat, RewardStreams& rng) {
  auto& chain = chains_[flat];
  std::size_t& s = state_[flat];
  const double reward = chain.rewards[s];
  const double u = uniform01(rng.at(flat, 0).engine);
  const auto& row = chain.transition[s];
  double cumulative = 0.0;
  std::size_t next = row.size() - 1;
  for (std::size_t j = 0; j < row.size(); ++j) {
    cumulative += row[j];
    if (u < cumulative) {
      next = j;
      break;
    }
  }
  s = next;
  return reward;
}

void MarkovEnv::sample_independent(std::size_t, RewardStreams&, std::span<double>) {
  throw InvalidInput("markov rewards are defined only for the common-reward variant");
}

std::unique_ptr<Environment> MarkovEnv::clone() const {
  auto copy = std::make_unique<MarkovEnv>(*this);
  for (std::size_t k = 0; k < chains_.size(); ++k) copy->state_[k] = chains_[k].initial_state;
  return copy;
}

namespace {

std::vector<RewardDistribution> counterexample_dists() {
  constexpr double kHalfWidth = 0.05;
  // Flat order: (1,1), (1,2), (2,1), (2,2).
  return {Uniform{0.90, kHalfWidth}, Uniform{0.88, kHalfWidth}, Uniform{0.88, kHalfWidth},
          Uniform{0.30, kHalfWidth}};
}

}  // namespace

CounterexampleEnv::CounterexampleEnv() : IidEnv(ArmSpace{2, 2}, counterexample_dists()) {}

CounterexampleEnv build_counterexample() { return CounterexampleEnv(); }

}  // namespace mpbandit
