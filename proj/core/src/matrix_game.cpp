#include "blackwell/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "blackwell/errors.hpp"

namespace blackwell {

namespace {

constexpr double kPivotEps = 1e-12;
constexpr long kMaxPivots = 100'000;

// max 1'q  s.t.  A q <= 1, q >= 0, with all entries of A positive.
// Returns the primal optimum in q and the duals (slack reduced costs) in p.
double simplex_positive(const Vec& a, int m, int n, Vec& q, Vec& p) {
  const int cols = n + m + 1;  // structural, slack, rhs
  std::vector<double> t(static_cast<std::size_t>(m + 1) * cols, 0.0);
  std::vector<int> basis(m);
  auto at = [&](int r, int c) -> double& { return t[static_cast<std::size_t>(r) * cols + c]; };

  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) at(i, j) = a[static_cast<std::size_t>(i) * n + j];
    at(i, n + i) = 1.0;
    at(i, cols - 1) = 1.0;
    basis[i] = n + i;
  }
  for (int j = 0; j < n; ++j) at(m, j) = -1.0;

  for (long pivots = 0; pivots < kMaxPivots; ++pivots) {
    // Bland: entering column = smallest index with negative reduced cost.
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (at(m, j) < -kPivotEps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) {
      q.assign(n, 0.0);
      for (int i = 0; i < m; ++i) {
        if (basis[i] < n) q[basis[i]] = std::max(at(i, cols - 1), 0.0);
      }
      p.assign(m, 0.0);
      for (int i = 0; i < m; ++i) p[i] = std::max(at(m, n + i), 0.0);
      return at(m, cols - 1);
    }

    // Ratio test; ties leave by the smallest basis index (Bland).
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      const double coef = at(i, enter);
      if (coef > kPivotEps) {
        const double ratio = at(i, cols - 1) / coef;
        if (ratio < best_ratio - kPivotEps) {
          best_ratio = ratio;
          leave = i;
        } else if (ratio < best_ratio + kPivotEps && (leave < 0 || basis[i] < basis[leave])) {
          best_ratio = std::min(best_ratio, ratio);
          leave = i;
        }
      }
    }
    if (leave < 0) throw SolverError("matrix game LP: unbounded tableau");

    const double pivot = at(leave, enter);
    for (int c = 0; c < cols; ++c) at(leave, c) /= pivot;
    for (int r = 0; r <= m; ++r) {
      if (r == leave) continue;
      const double factor = at(r, enter);
      if (factor == 0.0) continue;
      for (int c = 0; c < cols; ++c) at(r, c) -= factor * at(leave, c);
    }
    basis[leave] = enter;
  }
  throw SolverError("matrix game LP: pivot cap exceeded");
}

void normalize_distribution(Vec& v) {
  double sum = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  if (sum <= 0.0) throw SolverError("matrix game LP: degenerate strategy weights");
  for (double& x : v) x /= sum;
}

}  // namespace

GameSolution solve_matrix_game(const MatrixGame& game) {
  const int m = game.rows;
  const int n = game.cols;
  if (m <= 0 || n <= 0 || game.payoff.size() != static_cast<std::size_t>(m) * n) {
    throw std::invalid_argument("solve_matrix_game: empty or malformed payoff matrix");
  }
  double lo = game.payoff[0];
  for (double v : game.payoff) {
    if (!std::isfinite(v)) throw std::invalid_argument("solve_matrix_game: non-finite payoff");
    lo = std::min(lo, v);
  }
  const double shift = 1.0 - lo;

  Vec shifted(game.payoff.size());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = game.payoff[i] + shift;

  Vec q, p;
  const double reciprocal = simplex_positive(shifted, m, n, q, p);
  if (reciprocal <= 0.0) throw SolverError("matrix game LP: nonpositive objective");
  const double shifted_value = 1.0 / reciprocal;

  GameSolution sol;
  sol.value = shifted_value - shift;
  sol.row_strategy = std::move(p);
  sol.col_strategy = std::move(q);
  normalize_distribution(sol.row_strategy);
  normalize_distribution(sol.col_strategy);

  // Strong duality check on the original payoffs: the row mix must guarantee
  // the value against every pure column and vice versa.
  double maximin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    double v = 0.0;
    for (int i = 0; i < m; ++i) v += sol.row_strategy[i] * game.at(i, j);
    maximin = std::min(maximin, v);
  }
  double minimax = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    double v = 0.0;
    for (int j = 0; j < n; ++j) v += sol.col_strategy[j] * game.at(i, j);
    minimax = std::max(minimax, v);
  }
  if (std::abs(maximin - minimax) > 1e-9) {
    std::ostringstream msg;
    msg << "solve_matrix_game: duality gap " << (minimax - maximin) << " exceeds 1e-9";
    throw SolverError(msg.str());
  }
  return sol;
}

}  // namespace blackwell
