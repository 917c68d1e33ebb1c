#pragma once

#include <span>
#include <string>
#include <vector>

#include "blackwell/linalg.hpp"

namespace blackwell {

inline constexpr double kProbRowTol = 1e-12;
inline constexpr double kStationaryResidualTol = 1e-10;
inline constexpr double kStationaryStepTol = 1e-12;
inline constexpr long kStationaryMaxIter = 1'000'000;

/// Per-state probability distribution over one side's actions.
class StationaryStrategy {
 public:
  StationaryStrategy() = default;
  // Validates each row: entries >= 0, sum within kProbRowTol of 1.
  StationaryStrategy(int num_states, int num_actions, Vec probabilities);

  static StationaryStrategy uniform(int num_states, int num_actions);
  static StationaryStrategy pure(int num_states, int num_actions,
                                 const std::vector<int>& action_per_state);

  double prob(int state, int action) const { return p_[static_cast<std::size_t>(state) * actions_ + action]; }
  std::span<const double> row(int state) const {
    return {p_.data() + static_cast<std::size_t>(state) * actions_, static_cast<std::size_t>(actions_)};
  }
  int num_states() const { return states_; }
  int num_actions() const { return actions_; }

  bool operator==(const StationaryStrategy&) const = default;

 private:
  int states_ = 0;
  int actions_ = 0;
  Vec p_;
};

/// Finite controlled Markov game: two action sets, a transition kernel and a
/// vector reward per (state, player action, adversary action).
class GameModel {
 public:
  // kernel is [s][up][ua][s'] flattened, reward is [s][up][ua][d] flattened.
  // Kernel rows must be probability vectors within kProbRowTol; anything else
  // is rejected rather than renormalized.
  GameModel(int states, int player_actions, int adversary_actions, int dim,
            Vec kernel, Vec reward);

  int num_states() const { return states_; }
  int num_player_actions() const { return player_actions_; }
  int num_adversary_actions() const { return adversary_actions_; }
  int dim() const { return dim_; }

  std::span<const double> kernel_data() const { return kernel_; }
  std::span<const double> kernel_row(int s, int up, int ua) const {
    return {kernel_.data() + kernel_offset(s, up, ua), static_cast<std::size_t>(states_)};
  }
  double kernel(int s, int up, int ua, int next) const {
    return kernel_[kernel_offset(s, up, ua) + static_cast<std::size_t>(next)];
  }
  std::span<const double> reward(int s, int up, int ua) const {
    return {reward_.data() + reward_offset(s, up, ua), static_cast<std::size_t>(dim_)};
  }

  // All reward vectors in storage order; their convex hull is the compact
  // reward set.
  std::size_t num_reward_vectors() const { return reward_.size() / dim_; }
  std::span<const double> reward_vector(std::size_t i) const {
    return {reward_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

  // Componentwise bounds over all reward vectors.
  const Vec& reward_lower() const { return reward_lo_; }
  const Vec& reward_upper() const { return reward_hi_; }

 private:
  std::size_t kernel_offset(int s, int up, int ua) const {
    return ((static_cast<std::size_t>(s) * player_actions_ + up) * adversary_actions_ + ua) * states_;
  }
  std::size_t reward_offset(int s, int up, int ua) const {
    return ((static_cast<std::size_t>(s) * player_actions_ + up) * adversary_actions_ + ua) * dim_;
  }

  int states_ = 0;
  int player_actions_ = 0;
  int adversary_actions_ = 0;
  int dim_ = 0;
  Vec kernel_;
  Vec reward_;
  Vec reward_lo_, reward_hi_;
};

/// Row-stochastic state transition matrix under a fixed strategy pair.
class InducedChain {
 public:
  InducedChain(int num_states, Vec row_major);

  int size() const { return n_; }
  double at(int i, int j) const { return m_[static_cast<std::size_t>(i) * n_ + j]; }
  std::span<const double> row(int i) const {
    return {m_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }

 private:
  int n_ = 0;
  Vec m_;
};

struct ErgodicityReport {
  bool pass = false;
  int pivot_state = -1;  // state reachable from everywhere within `horizon` steps
  int horizon = 0;
  double delta = 0.0;  // uniform lower bound on the reach probability
  std::string message;
};

InducedChain induce_chain(const GameModel& model, const StationaryStrategy& player,
                          const StationaryStrategy& adversary);

// Fixed point of eta P = eta by power iteration (step tolerance
// kStationaryStepTol, cap kStationaryMaxIter). Throws SolverError with the
// residual when the chain does not settle (e.g. periodic chains).
Vec stationary_distribution(const InducedChain& chain);

// Long-run average vector reward under a fixed strategy pair, weighted by the
// stationary distribution of the induced chain.
Vec average_reward(const GameModel& model, const StationaryStrategy& player,
                   const StationaryStrategy& adversary);

// Sufficient uniform check: some pivot state is reached from every state
// within |S| steps with probability bounded away from zero no matter which
// actions are played, and the kernel keeps a positive self-loop at the pivot
// under every action pair. PASS implies every induced chain is ergodic;
// anything weaker reports INCONCLUSIVE, never a false PASS.
ErgodicityReport check_ergodicity(const GameModel& model);

}  // namespace blackwell
