#pragma once

// Penalty mathematics: Weibull CDF shape function and its inverse, the
// speed/boundary parameter map, curvature composition, the intersection
// turn penalty and the allowable-error bound.

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ldp/penalty_value.hpp"
#include "ldp/road_model.hpp"

namespace ldp {

struct WeibullParams {
  double k = 1.0;       // shape, dimensionless
  double lambda = 1.0;  // scale, meters

  friend bool operator==(const WeibullParams&, const WeibullParams&) = default;
};

inline void validate(const WeibullParams& params) {
  if (!(params.k > 0.0) || !(params.lambda > 0.0)) {
    throw std::domain_error("WeibullParams: k and lambda must be positive");
  }
}

// Everything the static penalty at one boundary depends on.
struct PenaltyContext {
  double speed_limit = 0.0;  // m/s
  BoundaryKind boundary = BoundaryKind::kInner;
  double r_actual = 1.0;  // meters
  double r_min = 1.0;     // meters
};

// Largest double below 1; the CDF codomain is [0, 1) and must stay there
// even when the exponent saturates.
inline constexpr double kLargestBelowOne = 0x1.fffffffffffffp-1;

inline double weibull_cdf(double x, const WeibullParams& params) {
  validate(params);
  if (!(x > 0.0)) return 0.0;
  double t = std::pow(x / params.lambda, params.k);
  double p = -std::expm1(-t);
  return std::min(p, kLargestBelowOne);
}

inline double weibull_quantile(double p, const WeibullParams& params) {
  validate(params);
  if (!(p >= 0.0) || p >= 1.0) {
    throw std::domain_error("weibull_quantile: p must lie in [0, 1)");
  }
  if (p == 0.0) return 0.0;
  return params.lambda * std::pow(-std::log1p(-p), 1.0 / params.k);
}

// Parameter ranges of the speed/boundary map. Outer boundaries harden with
// speed (fast roads punish drifting off the roadway); inner boundaries
// harden as speed drops (slow, dense traffic punishes drifting into the
// neighbor lane).
inline constexpr double kSpeedRangeMin = 5.0;   // m/s
inline constexpr double kSpeedRangeMax = 35.0;  // m/s
inline constexpr double kShapeRangeMin = 0.5;
inline constexpr double kShapeRangeMax = 5.0;
inline constexpr double kScaleRangeMin = 1.0;  // meters
inline constexpr double kScaleRangeMax = 2.0;  // meters

inline WeibullParams params_for(double speed_limit, BoundaryKind boundary) {
  double v = std::clamp(speed_limit, kSpeedRangeMin, kSpeedRangeMax);
  // Affine position in [0, 1]: in V for Outer, in 1/V for Inner, so both
  // endpoints land exactly on the range limits.
  double t = boundary == BoundaryKind::kOuter
                 ? (v - kSpeedRangeMin) / (kSpeedRangeMax - kSpeedRangeMin)
                 : (1.0 / v - 1.0 / kSpeedRangeMax) /
                       (1.0 / kSpeedRangeMin - 1.0 / kSpeedRangeMax);
  return {kShapeRangeMin + t * (kShapeRangeMax - kShapeRangeMin),
          kScaleRangeMin + t * (kScaleRangeMax - kScaleRangeMin)};
}

inline PenaltyValue base_penalty(double x, double speed_limit,
                                 BoundaryKind boundary) {
  return PenaltyValue(weibull_cdf(x, params_for(speed_limit, boundary)));
}

// The published ratio lowers the penalty on curves tighter than the design
// minimum; the reciprocal raises it there. Literal is the default, the
// reciprocal reading stays selectable.
enum class CurvatureFactorMode { kLiteral, kReciprocal };

inline double curvature_factor(
    double r_actual, double r_min,
    CurvatureFactorMode mode = CurvatureFactorMode::kLiteral) {
  if (!(r_actual > 0.0) || !(r_min > 0.0)) {
    throw std::domain_error("curvature_factor: radii must be positive");
  }
  return mode == CurvatureFactorMode::kLiteral ? r_actual / r_min
                                               : r_min / r_actual;
}

inline PenaltyValue penalty_with_curvature(
    double x, const PenaltyContext& ctx,
    CurvatureFactorMode mode = CurvatureFactorMode::kLiteral) {
  double fac = curvature_factor(ctx.r_actual, ctx.r_min, mode);
  return fac * base_penalty(x, ctx.speed_limit, ctx.boundary);
}

// Intersection turns keep a constant sharp shape and scale with the inverse
// turn speed; slower turns tolerate more deviation from the mean arc.
inline constexpr double kIntersectionShape = 5.0;
inline constexpr double kTurnSpeedRangeMin = 2.0;   // m/s
inline constexpr double kTurnSpeedRangeMax = 15.0;  // m/s

// Lateral distance from the mean turn arc at which an adjacent turning
// lane begins: half the default lane width.
inline constexpr double kAdjacentTurnLaneOffset = 1.5;  // meters

inline double intersection_scale(double turn_speed) {
  double v = std::clamp(turn_speed, kTurnSpeedRangeMin, kTurnSpeedRangeMax);
  double t = (1.0 / v - 1.0 / kTurnSpeedRangeMax) /
             (1.0 / kTurnSpeedRangeMin - 1.0 / kTurnSpeedRangeMax);
  return kScaleRangeMin + t * (kScaleRangeMax - kScaleRangeMin);
}

// d is the signed lateral offset from the mean turn arc: positive toward
// the outer curb, negative toward the inner curb. Beyond a curb, or into
// an adjacent turning lane, the penalty is Infinite.
inline PenaltyValue intersection_penalty(double d,
                                         const IntersectionTurnSpec& spec) {
  double magnitude = std::abs(d);
  double curb = d >= 0.0 ? spec.curb_offset_outer : spec.curb_offset_inner;
  bool adjacent_lane = d >= 0.0 ? spec.has_adjacent_turn_lane_outer
                                : spec.has_adjacent_turn_lane_inner;
  double limit = adjacent_lane ? std::min(curb, kAdjacentTurnLaneOffset) : curb;
  if (magnitude > limit) return PenaltyValue::infinite();
  WeibullParams params{kIntersectionShape, intersection_scale(spec.turn_speed)};
  return PenaltyValue(weibull_cdf(magnitude, params));
}

inline constexpr double kQuantileEpsilon = 1e-12;

// Largest deviation whose scaled penalty stays at or below the threshold.
// When even the saturated penalty cannot reach the threshold the bound is
// the (1 - epsilon) quantile.
inline double allowable_error(double p_threshold, double total_multiplier,
                              const WeibullParams& params) {
  validate(params);
  if (!(total_multiplier > 0.0)) {
    throw std::domain_error("allowable_error: multiplier must be positive");
  }
  if (!(p_threshold > 0.0)) return 0.0;
  double p = std::min(p_threshold / total_multiplier, 1.0 - kQuantileEpsilon);
  return weibull_quantile(p, params);
}

}  // namespace ldp
