#pragma once

#include <vector>

#include "blackwell/linalg.hpp"

namespace blackwell {

/// Zero-sum matrix game; the row player maximizes.
struct MatrixGame {
  int rows = 0;
  int cols = 0;
  Vec payoff;  // row-major

  double at(int i, int j) const { return payoff[static_cast<std::size_t>(i) * cols + j]; }
};

struct GameSolution {
  double value = 0.0;
  Vec row_strategy;
  Vec col_strategy;
};

// Exact value and optimal mixed strategies by linear programming: the game is
// shifted positive and the column player's bounded LP is solved by dense
// simplex under Bland's smallest-index rule (deterministic, cycle-free); the
// row strategy falls out of the duals. Ties among optimal bases resolve to the
// lexicographically smallest pivots by the same rule.
GameSolution solve_matrix_game(const MatrixGame& game);

}  // namespace blackwell
