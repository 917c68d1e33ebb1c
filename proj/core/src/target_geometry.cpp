#include "blackwell/target_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "blackwell/errors.hpp"

namespace blackwell {

namespace {

Vec clamp_to_box(const Vec& x, const Vec& lo, const Vec& hi) {
  Vec y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::clamp(x[i], lo[i], hi[i]);
  return y;
}

}  // namespace

ConvexTarget ConvexTarget::box(Vec lower, Vec upper) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw ConfigError("target box: lower/upper must be nonempty and equally sized");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (std::isnan(lower[i]) || std::isnan(upper[i]) || lower[i] > upper[i]) {
      throw ConfigError("target box: need lower <= upper per coordinate");
    }
  }
  ConvexTarget t;
  t.shape_ = TargetShape::kBox;
  t.dim_ = static_cast<int>(lower.size());
  t.lower_ = std::move(lower);
  t.upper_ = std::move(upper);
  t.witness_.resize(t.dim_);
  for (int i = 0; i < t.dim_; ++i) {
    double w = 0.0;
    w = std::clamp(w, t.lower_[i], t.upper_[i]);
    if (!std::isfinite(w)) w = std::isfinite(t.lower_[i]) ? t.lower_[i] : t.upper_[i];
    t.witness_[i] = w;
  }
  return t;
}

ConvexTarget ConvexTarget::ball(Vec center, double radius) {
  if (center.empty()) throw ConfigError("target ball: empty center");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("target ball: radius must be positive");
  for (double c : center) {
    if (!std::isfinite(c)) throw ConfigError("target ball: non-finite center");
  }
  ConvexTarget t;
  t.shape_ = TargetShape::kBall;
  t.dim_ = static_cast<int>(center.size());
  t.witness_ = center;
  t.center_ = std::move(center);
  t.radius_ = radius;
  return t;
}

ConvexTarget ConvexTarget::halfspaces(std::vector<Vec> normals, Vec offsets,
                                      std::optional<Vec> witness) {
  if (normals.empty() || normals.size() != offsets.size()) {
    throw ConfigError("target halfspaces: need one offset per normal");
  }
  const std::size_t d = normals[0].size();
  if (d == 0) throw ConfigError("target halfspaces: empty normal");
  ConvexTarget t;
  t.shape_ = TargetShape::kHalfspaces;
  t.dim_ = static_cast<int>(d);
  t.offsets_.resize(normals.size());
  for (std::size_t i = 0; i < normals.size(); ++i) {
    if (normals[i].size() != d) throw ConfigError("target halfspaces: inconsistent dimensions");
    const double len = norm(normals[i]);
    if (!(len > 0.0) || !std::isfinite(len) || !std::isfinite(offsets[i])) {
      throw ConfigError("target halfspaces: zero or non-finite constraint");
    }
    for (double& v : normals[i]) v /= len;
    t.offsets_[i] = offsets[i] / len;
  }
  t.normals_ = std::move(normals);

  auto violation = [&t](const Vec& y) {
    double worst = 0.0;
    for (std::size_t i = 0; i < t.normals_.size(); ++i) {
      worst = std::max(worst, dot(t.normals_[i], y) - t.offsets_[i]);
    }
    return worst;
  };

  if (witness) {
    if (static_cast<int>(witness->size()) != t.dim_) {
      throw ConfigError("target halfspaces: witness has wrong dimension");
    }
    if (violation(*witness) > 1e-9) {
      throw ConfigError("target halfspaces: supplied witness violates the constraints");
    }
    t.witness_ = std::move(*witness);
    return t;
  }

  // No witness supplied: cyclic projections from the origin converge to a
  // feasible point whenever the intersection is nonempty.
  Vec y(t.dim_, 0.0);
  for (long cycle = 0; cycle < 10'000; ++cycle) {
    for (std::size_t i = 0; i < t.normals_.size(); ++i) {
      const double excess = dot(t.normals_[i], y) - t.offsets_[i];
      if (excess > 0.0) {
        for (int k = 0; k < t.dim_; ++k) y[k] -= excess * t.normals_[i][k];
      }
    }
    if (violation(y) <= 1e-12) {
      t.witness_ = std::move(y);
      return t;
    }
  }
  throw ConfigError(
      "target halfspaces: could not find a feasible point; the intersection "
      "appears empty (supply a witness if it is not)");
}

Vec ConvexTarget::project_halfspaces(const Vec& x) const {
  // At most one violated constraint projects in closed form when the result
  // stays feasible.
  int violated = -1;
  int violated_count = 0;
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    if (dot(normals_[i], x) - offsets_[i] > 0.0) {
      violated = static_cast<int>(i);
      ++violated_count;
    }
  }
  if (violated_count == 0) return x;
  if (violated_count == 1) {
    Vec y = x;
    const double excess = dot(normals_[violated], x) - offsets_[violated];
    for (int k = 0; k < dim_; ++k) y[k] -= excess * normals_[violated][k];
    bool feasible = true;
    for (std::size_t i = 0; i < normals_.size() && feasible; ++i) {
      feasible = dot(normals_[i], y) - offsets_[i] <= kDykstraTol;
    }
    if (feasible) return y;
  }

  // Dykstra with one correction per halfspace.
  Vec y = x;
  std::vector<Vec> corrections(normals_.size(), Vec(dim_, 0.0));
  Vec prev(dim_);
  for (long cycle = 0; cycle < kDykstraMaxCycles; ++cycle) {
    prev = y;
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      Vec z = y;
      for (int k = 0; k < dim_; ++k) z[k] += corrections[i][k];
      const double excess = dot(normals_[i], z) - offsets_[i];
      Vec projected = z;
      if (excess > 0.0) {
        for (int k = 0; k < dim_; ++k) projected[k] -= excess * normals_[i][k];
      }
      for (int k = 0; k < dim_; ++k) corrections[i][k] = z[k] - projected[k];
      y = std::move(projected);
    }
    double cycle_shift = 0.0;
    double worst = 0.0;
    for (int k = 0; k < dim_; ++k) cycle_shift = std::max(cycle_shift, std::abs(y[k] - prev[k]));
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      worst = std::max(worst, dot(normals_[i], y) - offsets_[i]);
    }
    if (cycle_shift <= kDykstraTol && worst <= kDykstraTol) return y;
  }
  std::ostringstream msg;
  double residual = 0.0;
  for (int k = 0; k < dim_; ++k) residual = std::max(residual, std::abs(y[k] - prev[k]));
  msg << "halfspace projection: Dykstra did not converge within " << kDykstraMaxCycles
      << " cycles (last shift " << residual << ")";
  throw GeometryError(msg.str());
}

Vec ConvexTarget::project(const Vec& x) const {
  if (static_cast<int>(x.size()) != dim_) throw ConfigError("project: wrong dimension");
  switch (shape_) {
    case TargetShape::kBox:
      return clamp_to_box(x, lower_, upper_);
    case TargetShape::kBall: {
      const double d = blackwell::distance(x, center_);
      if (d <= radius_) return x;
      Vec y(dim_);
      const double scale = radius_ / d;
      for (int k = 0; k < dim_; ++k) y[k] = center_[k] + scale * (x[k] - center_[k]);
      return y;
    }
    case TargetShape::kHalfspaces:
      return project_halfspaces(x);
  }
  throw ConfigError("project: unknown target shape");
}

double ConvexTarget::distance(const Vec& x) const {
  return blackwell::distance(x, project(x));
}

bool ConvexTarget::contains(const Vec& x, double tol) const {
  return distance(x) <= tol;
}

bool ConvexTarget::intersects_box(const Vec& lo, const Vec& hi) const {
  // Alternate projecting between the target and the box; the gap settles at
  // the distance between the two sets.
  Vec y(dim_);
  for (int k = 0; k < dim_; ++k) {
    const double mid = 0.5 * (lo[k] + hi[k]);
    y[k] = std::isfinite(mid) ? mid : 0.0;
  }
  for (int cycle = 0; cycle < 2'000; ++cycle) {
    const Vec p = project(y);
    y = clamp_to_box(p, lo, hi);
    if (blackwell::distance(p, y) <= 1e-9) return true;
  }
  return false;
}

RewardGeometry compute_vmax(const GameModel& model) {
  const std::size_t n = model.num_reward_vectors();
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto a = model.reward_vector(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      best = std::max(best, squared_distance(a, model.reward_vector(j)));
    }
  }
  return RewardGeometry{std::sqrt(best)};
}

}  // namespace blackwell
