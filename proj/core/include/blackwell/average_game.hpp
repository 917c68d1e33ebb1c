#pragma once

#include "blackwell/game_model.hpp"
#include "blackwell/linalg.hpp"
#include "blackwell/matrix_game.hpp"
#include "blackwell/target_geometry.hpp"

namespace blackwell {

inline constexpr double kAverageGameTol = 1e-9;
inline constexpr long kAverageGameMaxIter = 100'000;

// Same model with scalar rewards <kappa, direction>. Rejects zero directions.
GameModel scalarize(const GameModel& model, const Vec& direction);

/// Solution of a zero-sum average-reward stochastic game (scalar rewards).
struct AverageGameSolution {
  double value = 0.0;
  StationaryStrategy player;     // per-state optimal row mixes
  StationaryStrategy adversary;  // per-state optimal column mixes
  Vec bias;                      // relative values, zero at the reference state
  long iterations = 0;
  double residual = 0.0;  // span of the last update
};

// Relative value iteration: per state solve the stage game of current scalar
// reward plus expected bias, subtract the reference-state value (state 0),
// stop when the update span falls below tol. A damping transform
// P <- (1-a)I + aP kicks in when the span stalls; it preserves the value and
// the optimal strategies while breaking periodicity.
AverageGameSolution solve_average_game(const GameModel& scalar_model,
                                       double tol = kAverageGameTol,
                                       long max_iter = kAverageGameMaxIter);

enum class SeparationStatus { kSeparating, kAssumptionViolated };

/// Stationary strategy whose forced average rewards sit strictly on the
/// target side of the hyperplane through the projection of x, plus the
/// achieved margin (the worst-case inner product over adversary strategies).
struct SeparationResult {
  SeparationStatus status = SeparationStatus::kAssumptionViolated;
  StationaryStrategy strategy;
  double margin = 0.0;      // inf over adversaries of <avg reward - proj, proj - x>
  double game_value = 0.0;  // value of the scalarized game along the unit direction
};

// Requires x strictly outside the target. A nonpositive margin is reported as
// kAssumptionViolated, not thrown: it means no stationary strategy separates x.
SeparationResult separating_strategy(const GameModel& model, const ConvexTarget& target,
                                     const Vec& x);

struct BestResponse {
  StationaryStrategy strategy;  // pure minimizing adversary policy
  double value = 0.0;           // adversary-optimal average of <kappa, direction>
  long iterations = 0;
  double residual = 0.0;
};

// With the player frozen the adversary faces an average-reward MDP over the
// scalarized rewards; solved by the same relative value iteration with a
// per-state minimum in place of the stage game.
BestResponse adversary_best_response(const GameModel& model, const StationaryStrategy& player,
                                     const Vec& direction);

}  // namespace blackwell
