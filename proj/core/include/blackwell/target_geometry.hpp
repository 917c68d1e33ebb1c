#pragma once

#include <optional>
#include <vector>

#include "blackwell/game_model.hpp"
#include "blackwell/linalg.hpp"

namespace blackwell {

enum class TargetShape { kBox, kBall, kHalfspaces };

/// Closed convex target set with exact projection, distance and membership.
/// Boxes clamp, balls rescale radially, halfspace intersections run Dykstra
/// alternating projections (one-shot when at most one constraint is violated).
class ConvexTarget {
 public:
  static constexpr double kMembershipTol = 1e-12;
  static constexpr double kDykstraTol = 1e-12;
  static constexpr long kDykstraMaxCycles = 100'000;

  // Bounds may be +/-infinity per coordinate; lower <= upper required.
  static ConvexTarget box(Vec lower, Vec upper);
  static ConvexTarget ball(Vec center, double radius);
  // Halfspaces a_i . y <= b_i. A feasibility witness is required; when absent
  // one is searched for by cyclic projections and its absence is an error.
  static ConvexTarget halfspaces(std::vector<Vec> normals, Vec offsets,
                                 std::optional<Vec> witness = std::nullopt);

  Vec project(const Vec& x) const;
  double distance(const Vec& x) const;
  bool contains(const Vec& x, double tol = kMembershipTol) const;

  int dim() const { return dim_; }
  TargetShape shape() const { return shape_; }
  const Vec& witness() const { return witness_; }

  // True when the target provably meets the axis-aligned box [lo, hi]; used
  // to warn when a target cannot contain any running average.
  bool intersects_box(const Vec& lo, const Vec& hi) const;

 private:
  ConvexTarget() = default;

  Vec project_halfspaces(const Vec& x) const;

  TargetShape shape_ = TargetShape::kBox;
  int dim_ = 0;
  Vec lower_, upper_;            // box
  Vec center_;                   // ball
  double radius_ = 0.0;          // ball
  std::vector<Vec> normals_;     // halfspaces, unit normals
  Vec offsets_;                  // halfspaces, scaled to unit normals
  Vec witness_;
};

/// Speed bound of the interpolated average: the running average can move by
/// at most v_max per unit of rescaled time.
struct RewardGeometry {
  double v_max = 0.0;
};

// Largest pairwise Euclidean distance among the model's reward vectors. The
// supremum over the convex hull is attained at the vectors themselves.
RewardGeometry compute_vmax(const GameModel& model);

}  // namespace blackwell
