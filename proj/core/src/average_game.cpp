#include "blackwell/average_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "blackwell/errors.hpp"

namespace blackwell {

namespace {

constexpr double kDampingFactor = 0.9;
constexpr long kStallWindow = 200;  // iterations without span improvement before damping

// Span seminorm of (w - h).
double update_span(const Vec& w, const Vec& h) {
  double mx = -std::numeric_limits<double>::infinity();
  double mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = w[i] - h[i];
    mx = std::max(mx, d);
    mn = std::min(mn, d);
  }
  return mx - mn;
}

[[noreturn]] void throw_no_convergence(const char* what, long max_iter, double span) {
  std::ostringstream msg;
  msg << what << ": relative value iteration exceeded " << max_iter
      << " iterations (span " << span << ") even with the damping transform";
  throw SolverError(msg.str());
}

}  // namespace

GameModel scalarize(const GameModel& model, const Vec& direction) {
  if (static_cast<int>(direction.size()) != model.dim()) {
    throw std::invalid_argument("scalarize: direction has wrong dimension");
  }
  const double len = norm(direction);
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw std::invalid_argument("scalarize: direction must be nonzero and finite");
  }
  const int s = model.num_states();
  const int np = model.num_player_actions();
  const int na = model.num_adversary_actions();
  Vec kernel(model.kernel_data().begin(), model.kernel_data().end());
  Vec scalar(static_cast<std::size_t>(s) * np * na);
  std::size_t idx = 0;
  for (int st = 0; st < s; ++st) {
    for (int up = 0; up < np; ++up) {
      for (int ua = 0; ua < na; ++ua) scalar[idx++] = dot(model.reward(st, up, ua), direction);
    }
  }
  return GameModel(s, np, na, 1, std::move(kernel), std::move(scalar));
}

AverageGameSolution solve_average_game(const GameModel& model, double tol, long max_iter) {
  if (model.dim() != 1) throw std::invalid_argument("solve_average_game: model must carry scalar rewards");
  const int s = model.num_states();
  const int np = model.num_player_actions();
  const int na = model.num_adversary_actions();

  Vec h(s, 0.0), w(s, 0.0);
  Vec row_mix(static_cast<std::size_t>(s) * np, 0.0);
  Vec col_mix(static_cast<std::size_t>(s) * na, 0.0);
  MatrixGame stage{np, na, Vec(static_cast<std::size_t>(np) * na, 0.0)};

  double alpha = 1.0;  // 1 = undamped
  double best_span = std::numeric_limits<double>::infinity();
  long best_iter = 0;
  double span = std::numeric_limits<double>::infinity();

  for (long iter = 1; iter <= max_iter; ++iter) {
    for (int st = 0; st < s; ++st) {
      for (int up = 0; up < np; ++up) {
        for (int ua = 0; ua < na; ++ua) {
          const auto p = model.kernel_row(st, up, ua);
          double expect = 0.0;
          for (int t = 0; t < s; ++t) expect += p[t] * h[t];
          double entry = model.reward(st, up, ua)[0] + alpha * expect;
          if (alpha != 1.0) entry += (1.0 - alpha) * h[st];
          stage.payoff[static_cast<std::size_t>(up) * na + ua] = entry;
        }
      }
      const GameSolution sol = solve_matrix_game(stage);
      w[st] = sol.value;
      std::copy(sol.row_strategy.begin(), sol.row_strategy.end(),
                row_mix.begin() + static_cast<std::size_t>(st) * np);
      std::copy(sol.col_strategy.begin(), sol.col_strategy.end(),
                col_mix.begin() + static_cast<std::size_t>(st) * na);
    }
    span = update_span(w, h);
    if (span <= tol) {
      AverageGameSolution out;
      out.value = w[0] - h[0];
      out.bias = h;
      out.player = StationaryStrategy(s, np, std::move(row_mix));
      out.adversary = StationaryStrategy(s, na, std::move(col_mix));
      out.iterations = iter;
      out.residual = span;
      return out;
    }
    if (span < best_span - 1e-15) {
      best_span = span;
      best_iter = iter;
    } else if (alpha == 1.0 && iter - best_iter >= kStallWindow) {
      alpha = kDampingFactor;  // span is oscillating; damp out periodicity
      best_span = std::numeric_limits<double>::infinity();
      best_iter = iter;
    }
    const double offset = w[0];
    for (int st = 0; st < s; ++st) h[st] = w[st] - offset;
  }
  throw_no_convergence("solve_average_game", max_iter, span);
}

SeparationResult separating_strategy(const GameModel& model, const ConvexTarget& target,
                                     const Vec& x) {
  if (static_cast<int>(x.size()) != model.dim()) {
    throw std::invalid_argument("separating_strategy: point has wrong dimension");
  }
  const Vec projection = target.project(x);
  Vec gap(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) gap[k] = projection[k] - x[k];
  const double dist = norm(gap);
  if (dist <= ConvexTarget::kMembershipTol) {
    throw std::invalid_argument("separating_strategy: point already lies in the target");
  }
  Vec direction(gap);
  for (double& v : direction) v /= dist;

  const AverageGameSolution sol = solve_average_game(scalarize(model, direction));

  SeparationResult result;
  result.game_value = sol.value;
  result.margin = sol.value * dist - dot(projection, gap);
  result.strategy = sol.player;
  result.status = result.margin > 0.0 ? SeparationStatus::kSeparating
                                      : SeparationStatus::kAssumptionViolated;
  return result;
}

BestResponse adversary_best_response(const GameModel& model, const StationaryStrategy& player,
                                     const Vec& direction) {
  if (player.num_states() != model.num_states() ||
      player.num_actions() != model.num_player_actions()) {
    throw std::invalid_argument("adversary_best_response: strategy does not match the model");
  }
  const GameModel scalar = scalarize(model, direction);
  const int s = scalar.num_states();
  const int np = scalar.num_player_actions();
  const int na = scalar.num_adversary_actions();

  // Average the kernel and reward over the frozen player mix.
  Vec r(static_cast<std::size_t>(s) * na, 0.0);
  Vec p(static_cast<std::size_t>(s) * na * s, 0.0);
  for (int st = 0; st < s; ++st) {
    for (int ua = 0; ua < na; ++ua) {
      const std::size_t ridx = static_cast<std::size_t>(st) * na + ua;
      for (int up = 0; up < np; ++up) {
        const double wp = player.prob(st, up);
        if (wp == 0.0) continue;
        r[ridx] += wp * scalar.reward(st, up, ua)[0];
        const auto row = scalar.kernel_row(st, up, ua);
        for (int t = 0; t < s; ++t) p[ridx * s + t] += wp * row[t];
      }
    }
  }

  Vec h(s, 0.0), w(s, 0.0);
  std::vector<int> choice(s, 0);
  double alpha = 1.0;
  double best_span = std::numeric_limits<double>::infinity();
  long best_iter = 0;
  double span = std::numeric_limits<double>::infinity();

  for (long iter = 1; iter <= kAverageGameMaxIter; ++iter) {
    for (int st = 0; st < s; ++st) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (int ua = 0; ua < na; ++ua) {
        const std::size_t ridx = static_cast<std::size_t>(st) * na + ua;
        double expect = 0.0;
        for (int t = 0; t < s; ++t) expect += p[ridx * s + t] * h[t];
        double v = r[ridx] + alpha * expect;
        if (alpha != 1.0) v += (1.0 - alpha) * h[st];
        if (v < best - 1e-15) {
          best = v;
          arg = ua;
        }
      }
      w[st] = best;
      choice[st] = arg;
    }
    span = update_span(w, h);
    if (span <= kAverageGameTol) {
      BestResponse out;
      out.strategy = StationaryStrategy::pure(s, na, choice);
      out.value = w[0] - h[0];
      out.iterations = iter;
      out.residual = span;
      return out;
    }
    if (span < best_span - 1e-15) {
      best_span = span;
      best_iter = iter;
    } else if (alpha == 1.0 && iter - best_iter >= kStallWindow) {
      alpha = kDampingFactor;
      best_span = std::numeric_limits<double>::infinity();
      best_iter = iter;
    }
    const double offset = w[0];
    for (int st = 0; st < s; ++st) h[st] = w[st] - offset;
  }
  throw_no_convergence("adversary_best_response", kAverageGameMaxIter, span);
}

}  // namespace blackwell
