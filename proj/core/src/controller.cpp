#include "blackwell/controller.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blackwell/errors.hpp"

namespace blackwell {

double compute_rho(const ConvexTarget& target, const RewardGeometry& geometry, const Vec& q,
                   double margin, double beta) {
  if (!(margin > 0.0)) throw std::invalid_argument("compute_rho: margin must be positive");
  if (!(beta > 0.0) || !(beta < 1.0)) throw std::invalid_argument("compute_rho: beta must lie in (0,1)");
  const double dist = target.distance(q);
  if (!(dist > 0.0)) throw std::invalid_argument("compute_rho: point must lie outside the target");
  const double distance_cap = beta * dist;
  const double c = 3.0 * geometry.v_max;
  if (c <= 0.0) return distance_cap;
  return std::min(margin / (2.0 * c), distance_cap);
}

double compute_hold_time(double rho, const RewardGeometry& geometry) {
  if (!(rho > 0.0)) throw std::invalid_argument("compute_hold_time: rho must be positive");
  if (!(geometry.v_max > 0.0)) {
    throw DegenerateModelError(
        "compute_hold_time: zero reward spread, the hold-time interval is empty");
  }
  return (7.0 / 24.0) * rho / geometry.v_max;
}

std::int64_t next_switch_step(std::int64_t start, double hold_time) {
  if (start < 1) throw std::invalid_argument("next_switch_step: steps are indexed from 1");
  if (!(hold_time > 0.0) || !std::isfinite(hold_time)) {
    throw std::invalid_argument("next_switch_step: hold time must be positive and finite");
  }
  KahanSum sum;
  for (std::int64_t i = start;; ++i) {
    sum.add(1.0 / static_cast<double>(i));
    if (sum.value() > hold_time) return i + 1;
    if (i - start > (std::int64_t{1} << 40)) {
      throw SolverError("next_switch_step: hold window exceeds any practical horizon");
    }
  }
}

int find_covering_anchor(std::span<const AnchorEntry> anchors, const Vec& x) {
  for (const AnchorEntry& a : anchors) {
    if (distance(x, a.point) < 0.5 * a.rho) return a.index;
  }
  return -1;
}

TwoTimeScaleController::TwoTimeScaleController(const GameModel& model, const ConvexTarget& target,
                                               const RewardGeometry& geometry,
                                               ControllerConfig config)
    : model_(model),
      target_(target),
      geometry_(geometry),
      cfg_(config),
      fallback_(StationaryStrategy::uniform(model.num_states(), model.num_player_actions())) {}

int TwoTimeScaleController::lookup_or_create_anchor(std::int64_t n, const Vec& x) {
  const int found = find_covering_anchor(anchors_, x);
  if (found >= 0) return found;

  const SeparationResult sep = separating_strategy(model_, target_, x);
  if (sep.status == SeparationStatus::kAssumptionViolated) {
    std::ostringstream msg;
    msg << "no separating strategy at step " << n << " (margin " << sep.margin
        << " <= 0); the target is not approachable from here";
    abort_ = AbortInfo{n, x, sep.margin, msg.str()};
    return -1;
  }
  const double rho = compute_rho(target_, geometry_, x, sep.margin, cfg_.beta);
  const double hold = compute_hold_time(rho, geometry_);

  const double dist = target_.distance(x);
  if (!(rho <= dist) || !(hold * 4.0 * geometry_.v_max > rho) ||
      !(hold * 3.0 * geometry_.v_max < rho)) {
    throw SolverError("anchor construction violated its radius or hold-time bounds");
  }

  AnchorEntry entry;
  entry.point = x;
  entry.rho = rho;
  entry.hold_time = hold;
  entry.strategy = sep.strategy;
  entry.index = static_cast<int>(anchors_.size());
  entry.margin = sep.margin;
  anchors_.push_back(std::move(entry));
  return anchors_.back().index;
}

StepDecision TwoTimeScaleController::on_step(std::int64_t n, int /*state*/, const Vec& x_prev,
                                             double t_prev) {
  if (n < 1) throw std::invalid_argument("on_step: steps are indexed from 1");
  if (abort_) return {nullptr, false, active_};
  if (n < next_switch_) return {active_strategy(), false, active_};

  const double dist = target_.distance(x_prev);
  if (dist <= cfg_.membership_tol) {
    active_ = -1;
    next_switch_ = n + 1;
    log_.push_back({n, -1, t_prev, dist});
    return {active_strategy(), true, -1};
  }
  const int idx = lookup_or_create_anchor(n, x_prev);
  if (idx < 0) return {nullptr, false, active_};
  active_ = idx;
  next_switch_ = next_switch_step(n, anchors_[idx].hold_time);
  log_.push_back({n, idx, t_prev, dist});
  return {active_strategy(), true, idx};
}

ReturnTimeController::ReturnTimeController(const GameModel& model, const ConvexTarget& target,
                                           ControllerConfig config)
    : model_(model),
      target_(target),
      cfg_(config),
      fallback_(StationaryStrategy::uniform(model.num_states(), model.num_player_actions())),
      held_(fallback_) {
  if (cfg_.reference_state < 0 || cfg_.reference_state >= model.num_states()) {
    throw ConfigError("return-time controller: reference state out of range");
  }
}

StepDecision ReturnTimeController::on_step(std::int64_t n, int state, const Vec& x_prev,
                                           double t_prev) {
  if (n < 1) throw std::invalid_argument("on_step: steps are indexed from 1");
  if (abort_) return {nullptr, false, -1};
  // Between returns the current strategy is held; before the first return
  // that is the fallback.
  if (state != cfg_.reference_state) return {&held_, false, active_};

  const double dist = target_.distance(x_prev);
  if (dist <= cfg_.membership_tol) {
    held_ = fallback_;
    active_ = -1;
    log_.push_back({n, -1, t_prev, dist});
    return {&held_, true, -1};
  }
  if (cfg_.reuse_radius > 0.0) {
    for (std::size_t i = 0; i < cache_.size(); ++i) {
      if (distance(x_prev, cache_[i].point) <= cfg_.reuse_radius) {
        held_ = cache_[i].strategy;
        active_ = static_cast<int>(i);
        log_.push_back({n, active_, t_prev, dist});
        return {&held_, true, active_};
      }
    }
  }
  const SeparationResult sep = separating_strategy(model_, target_, x_prev);
  if (sep.status == SeparationStatus::kAssumptionViolated) {
    std::ostringstream msg;
    msg << "no separating strategy at step " << n << " (margin " << sep.margin
        << " <= 0); the target is not approachable from here";
    abort_ = AbortInfo{n, x_prev, sep.margin, msg.str()};
    return {nullptr, false, -1};
  }
  held_ = sep.strategy;
  const int slot = cfg_.reuse_radius > 0.0 ? static_cast<int>(cache_.size()) : solves_;
  if (cfg_.reuse_radius > 0.0) cache_.push_back({x_prev, sep.strategy});
  ++solves_;
  active_ = slot;
  log_.push_back({n, slot, t_prev, dist});
  return {&held_, true, slot};
}

}  // namespace blackwell
