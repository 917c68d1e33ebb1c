#include "blackwell/game_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "blackwell/errors.hpp"

namespace blackwell {

namespace {

void validate_rows(const Vec& data, std::size_t row_len, double tol, const char* what) {
  if (row_len == 0 || data.size() % row_len != 0) {
    throw ModelError(std::string(what) + ": storage size does not match row length");
  }
  for (std::size_t off = 0; off < data.size(); off += row_len) {
    double sum = 0.0;
    for (std::size_t j = 0; j < row_len; ++j) {
      const double v = data[off + j];
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream msg;
        msg << what << ": entry " << v << " in row " << off / row_len << " is not a probability";
        throw ModelError(msg.str());
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
      std::ostringstream msg;
      msg << what << ": row " << off / row_len << " sums to " << sum
          << " (|sum-1| > " << tol << "); refusing to renormalize";
      throw ModelError(msg.str());
    }
  }
}

}  // namespace

StationaryStrategy::StationaryStrategy(int num_states, int num_actions, Vec probabilities)
    : states_(num_states), actions_(num_actions), p_(std::move(probabilities)) {
  if (states_ <= 0 || actions_ <= 0) throw ModelError("strategy: empty state or action set");
  if (p_.size() != static_cast<std::size_t>(states_) * actions_) {
    throw ModelError("strategy: probability table has wrong size");
  }
  validate_rows(p_, static_cast<std::size_t>(actions_), kProbRowTol, "strategy");
}

StationaryStrategy StationaryStrategy::uniform(int num_states, int num_actions) {
  Vec p(static_cast<std::size_t>(num_states) * num_actions, 1.0 / num_actions);
  return StationaryStrategy(num_states, num_actions, std::move(p));
}

StationaryStrategy StationaryStrategy::pure(int num_states, int num_actions,
                                            const std::vector<int>& action_per_state) {
  if (static_cast<int>(action_per_state.size()) != num_states) {
    throw ModelError("pure strategy: need one action per state");
  }
  Vec p(static_cast<std::size_t>(num_states) * num_actions, 0.0);
  for (int s = 0; s < num_states; ++s) {
    const int a = action_per_state[s];
    if (a < 0 || a >= num_actions) throw ModelError("pure strategy: action index out of range");
    p[static_cast<std::size_t>(s) * num_actions + a] = 1.0;
  }
  return StationaryStrategy(num_states, num_actions, std::move(p));
}

GameModel::GameModel(int states, int player_actions, int adversary_actions, int dim,
                     Vec kernel, Vec reward)
    : states_(states),
      player_actions_(player_actions),
      adversary_actions_(adversary_actions),
      dim_(dim),
      kernel_(std::move(kernel)),
      reward_(std::move(reward)) {
  if (states_ <= 0 || player_actions_ <= 0 || adversary_actions_ <= 0 || dim_ <= 0) {
    throw ModelError("model: all dimensions must be positive");
  }
  const std::size_t tuples =
      static_cast<std::size_t>(states_) * player_actions_ * adversary_actions_;
  if (kernel_.size() != tuples * states_) throw ModelError("model: kernel has wrong size");
  if (reward_.size() != tuples * dim_) throw ModelError("model: reward table has wrong size");
  validate_rows(kernel_, static_cast<std::size_t>(states_), kProbRowTol, "kernel");
  for (double v : reward_) {
    if (!std::isfinite(v)) throw ModelError("model: non-finite reward entry");
  }
  reward_lo_.assign(dim_, std::numeric_limits<double>::infinity());
  reward_hi_.assign(dim_, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < reward_.size(); ++i) {
    const int k = static_cast<int>(i % dim_);
    reward_lo_[k] = std::min(reward_lo_[k], reward_[i]);
    reward_hi_[k] = std::max(reward_hi_[k], reward_[i]);
  }
}

InducedChain::InducedChain(int num_states, Vec row_major) : n_(num_states), m_(std::move(row_major)) {
  if (n_ <= 0 || m_.size() != static_cast<std::size_t>(n_) * n_) {
    throw ModelError("induced chain: matrix has wrong size");
  }
  validate_rows(m_, static_cast<std::size_t>(n_), kProbRowTol, "induced chain");
}

InducedChain induce_chain(const GameModel& model, const StationaryStrategy& player,
                          const StationaryStrategy& adversary) {
  if (player.num_states() != model.num_states() ||
      player.num_actions() != model.num_player_actions() ||
      adversary.num_states() != model.num_states() ||
      adversary.num_actions() != model.num_adversary_actions()) {
    throw ModelError("induce_chain: strategy dimensions do not match the model");
  }
  const int n = model.num_states();
  Vec m(static_cast<std::size_t>(n) * n, 0.0);
  for (int s = 0; s < n; ++s) {
    for (int up = 0; up < model.num_player_actions(); ++up) {
      const double wp = player.prob(s, up);
      if (wp == 0.0) continue;
      for (int ua = 0; ua < model.num_adversary_actions(); ++ua) {
        const double w = wp * adversary.prob(s, ua);
        if (w == 0.0) continue;
        const auto row = model.kernel_row(s, up, ua);
        for (int t = 0; t < n; ++t) m[static_cast<std::size_t>(s) * n + t] += w * row[t];
      }
    }
  }
  // Scrub accumulation round-off so the row-sum invariant holds exactly enough.
  for (int s = 0; s < n; ++s) {
    double sum = 0.0;
    for (int t = 0; t < n; ++t) sum += m[static_cast<std::size_t>(s) * n + t];
    if (std::abs(sum - 1.0) > 1e-9) throw ModelError("induce_chain: degenerate row sum");
    for (int t = 0; t < n; ++t) m[static_cast<std::size_t>(s) * n + t] /= sum;
  }
  return InducedChain(n, std::move(m));
}

Vec stationary_distribution(const InducedChain& chain) {
  const int n = chain.size();
  Vec eta(n, 1.0 / n);
  Vec next(n, 0.0);
  for (long iter = 0; iter < kStationaryMaxIter; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      const double w = eta[i];
      if (w == 0.0) continue;
      const auto row = chain.row(i);
      for (int j = 0; j < n; ++j) next[j] += w * row[j];
    }
    double step = 0.0;
    double sum = 0.0;
    for (int j = 0; j < n; ++j) {
      step = std::max(step, std::abs(next[j] - eta[j]));
      sum += next[j];
    }
    if (step <= kStationaryStepTol) {
      for (double& v : eta) v = std::max(v, 0.0);
      double s = 0.0;
      for (double v : eta) s += v;
      for (double& v : eta) v /= s;
      return eta;
    }
    for (int j = 0; j < n; ++j) eta[j] = next[j] / sum;
  }
  std::ostringstream msg;
  double residual = 0.0;
  for (int j = 0; j < n; ++j) residual = std::max(residual, std::abs(next[j] - eta[j]));
  msg << "stationary distribution: power iteration did not converge within " << kStationaryMaxIter
      << " iterations (last step " << residual << "); the chain may be periodic";
  throw SolverError(msg.str());
}

Vec average_reward(const GameModel& model, const StationaryStrategy& player,
                   const StationaryStrategy& adversary) {
  const Vec eta = stationary_distribution(induce_chain(model, player, adversary));
  Vec out(model.dim(), 0.0);
  for (int s = 0; s < model.num_states(); ++s) {
    if (eta[s] == 0.0) continue;
    for (int up = 0; up < model.num_player_actions(); ++up) {
      const double wp = eta[s] * player.prob(s, up);
      if (wp == 0.0) continue;
      for (int ua = 0; ua < model.num_adversary_actions(); ++ua) {
        const double w = wp * adversary.prob(s, ua);
        if (w == 0.0) continue;
        const auto r = model.reward(s, up, ua);
        for (int k = 0; k < model.dim(); ++k) out[k] += w * r[k];
      }
    }
  }
  return out;
}

ErgodicityReport check_ergodicity(const GameModel& model) {
  const int n = model.num_states();
  const int np = model.num_player_actions();
  const int na = model.num_adversary_actions();

  for (int pivot = 0; pivot < n; ++pivot) {
    // Positive self-loop at the pivot under every action pair keeps the pivot
    // aperiodic in every induced chain.
    bool self_loop = true;
    for (int up = 0; up < np && self_loop; ++up) {
      for (int ua = 0; ua < na; ++ua) {
        if (model.kernel(pivot, up, ua, pivot) <= 0.0) {
          self_loop = false;
          break;
        }
      }
    }
    if (!self_loop) continue;

    // f[s] = worst-case probability of reaching the pivot within h steps,
    // minimized jointly over both players' action choices.
    Vec f(n, 0.0);
    f[pivot] = 1.0;
    for (int h = 1; h <= n; ++h) {
      Vec next(n, 0.0);
      next[pivot] = 1.0;
      for (int s = 0; s < n; ++s) {
        if (s == pivot) continue;
        double worst = 1.0;
        for (int up = 0; up < np; ++up) {
          for (int ua = 0; ua < na; ++ua) {
            const auto row = model.kernel_row(s, up, ua);
            double reach = 0.0;
            for (int t = 0; t < n; ++t) reach += row[t] * f[t];
            worst = std::min(worst, reach);
          }
        }
        next[s] = worst;
      }
      f = std::move(next);
      double delta = 1.0;
      for (int s = 0; s < n; ++s) delta = std::min(delta, f[s]);
      if (delta > 0.0) {
        ErgodicityReport report;
        report.pass = true;
        report.pivot_state = pivot;
        report.horizon = h;
        report.delta = delta;
        std::ostringstream msg;
        msg << "PASS: state " << pivot << " is reached within " << h
            << " step(s) with probability >= " << delta
            << " under every action sequence, and keeps a positive self-loop";
        report.message = msg.str();
        return report;
      }
    }
  }
  ErgodicityReport report;
  report.message =
      "INCONCLUSIVE: no state combines a guaranteed positive self-loop with "
      "uniform worst-case reachability within |S| steps; ergodicity under every "
      "stationary pair could not be certified";
  return report;
}

}  // namespace blackwell
