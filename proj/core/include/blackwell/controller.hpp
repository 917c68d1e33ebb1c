#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blackwell/average_game.hpp"
#include "blackwell/game_model.hpp"
#include "blackwell/target_geometry.hpp"

namespace blackwell {

struct ControllerConfig {
  enum class Scheme { kTwoTimeScale, kReturnTime };

  Scheme scheme = Scheme::kTwoTimeScale;
  double beta = 0.5;               // fraction of the target distance a ball may span
  double membership_tol = ConvexTarget::kMembershipTol;
  double solver_tol = kAverageGameTol;
  int reference_state = 0;         // return-time baseline switches at visits here
  double reuse_radius = 0.0;       // return-time baseline: reuse a solve within this radius
};

/// Cover point: a location, its safety radius, the rescaled hold budget, and
/// the separating strategy solved there. Created lazily at observed averages;
/// the insertion index implements the minimal-index selection rule.
struct AnchorEntry {
  Vec point;
  double rho = 0.0;        // ball radius; the open ball avoids the target
  double hold_time = 0.0;  // strictly inside (rho/(4 v_max), rho/(3 v_max))
  StationaryStrategy strategy;
  int index = 0;
  double margin = 0.0;  // separation margin certified at the anchor point
};

struct SwitchRecord {
  std::int64_t step = 0;
  int anchor = -1;   // -1 while inside the target
  double t = 0.0;    // rescaled time at the decision
  double dist = 0.0; // distance of the inspected average to the target
};

struct AbortInfo {
  std::int64_t step = 0;
  Vec point;
  double margin = 0.0;
  std::string message;
};

struct StepDecision {
  // Valid until the next on_step call; null after an abort (see abort()).
  const StationaryStrategy* strategy = nullptr;
  bool switched = false;
  int anchor = -1;
};

// rho(q) = min(margin / (6 v_max), beta * dist(q, target)): the separation
// inequality keeps at least half its margin on the ball, and the ball stays
// clear of the target.
double compute_rho(const ConvexTarget& target, const RewardGeometry& geometry, const Vec& q,
                   double margin, double beta = 0.5);

// Midpoint of the admissible hold interval: T = (7/24) rho / v_max.
double compute_hold_time(double rho, const RewardGeometry& geometry);

// Smallest m with sum_{i=start}^{m-1} 1/i > hold_time (strict), accumulated
// with compensated summation so schedules replay identically everywhere.
std::int64_t next_switch_step(std::int64_t start, double hold_time);

// Index of the lowest-index anchor whose half-radius ball covers x, or -1.
int find_covering_anchor(std::span<const AnchorEntry> anchors, const Vec& x);

class Controller {
 public:
  virtual ~Controller() = default;

  // Decision at step n >= 1. x_prev is the running average over steps < n and
  // t_prev the matching rescaled time.
  virtual StepDecision on_step(std::int64_t n, int state, const Vec& x_prev, double t_prev) = 0;

  virtual std::span<const AnchorEntry> anchors() const = 0;
  virtual std::span<const SwitchRecord> switch_log() const = 0;
  virtual const std::optional<AbortInfo>& abort() const = 0;
};

/// Two-time-scale switching: while the average sits outside the target the
/// strategy of the covering anchor is held for its rescaled budget (holds
/// lengthen in steps as n grows); inside the target a fallback strategy is
/// re-examined every step. Anchors are solved on demand.
class TwoTimeScaleController final : public Controller {
 public:
  TwoTimeScaleController(const GameModel& model, const ConvexTarget& target,
                         const RewardGeometry& geometry, ControllerConfig config);

  StepDecision on_step(std::int64_t n, int state, const Vec& x_prev, double t_prev) override;

  std::span<const AnchorEntry> anchors() const override { return anchors_; }
  std::span<const SwitchRecord> switch_log() const override { return log_; }
  const std::optional<AbortInfo>& abort() const override { return abort_; }

 private:
  // Returns the anchor index, or -1 after recording an abort.
  int lookup_or_create_anchor(std::int64_t n, const Vec& x);
  const StationaryStrategy* active_strategy() const {
    return active_ < 0 ? &fallback_ : &anchors_[active_].strategy;
  }

  const GameModel& model_;
  const ConvexTarget& target_;
  RewardGeometry geometry_;
  ControllerConfig cfg_;
  StationaryStrategy fallback_;
  std::vector<AnchorEntry> anchors_;
  int active_ = -1;
  std::int64_t next_switch_ = 1;
  std::vector<SwitchRecord> log_;
  std::optional<AbortInfo> abort_;
};

/// Baseline that re-solves only when the chain returns to a reference state
/// and holds the strategy in between. No hold-time machinery; optionally
/// reuses the previous solve when the average has barely moved.
class ReturnTimeController final : public Controller {
 public:
  ReturnTimeController(const GameModel& model, const ConvexTarget& target,
                       ControllerConfig config);

  StepDecision on_step(std::int64_t n, int state, const Vec& x_prev, double t_prev) override;

  std::span<const AnchorEntry> anchors() const override { return {}; }
  std::span<const SwitchRecord> switch_log() const override { return log_; }
  const std::optional<AbortInfo>& abort() const override { return abort_; }

 private:
  struct CachedSolve {
    Vec point;
    StationaryStrategy strategy;
  };

  const GameModel& model_;
  const ConvexTarget& target_;
  ControllerConfig cfg_;
  StationaryStrategy fallback_;
  StationaryStrategy held_;
  std::vector<CachedSolve> cache_;  // only populated when reuse_radius > 0
  int active_ = -1;
  int solves_ = 0;
  std::vector<SwitchRecord> log_;
  std::optional<AbortInfo> abort_;
};

}  // namespace blackwell
