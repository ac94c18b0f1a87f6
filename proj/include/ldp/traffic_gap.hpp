#pragma once

// Dynamic penalty component: the longitudinal gap the ego vehicle faces in
// an adjacent lane and the multiplicative factor it imposes.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "ldp/errors.hpp"
#include "ldp/penalty_core.hpp"
#include "ldp/penalty_value.hpp"

namespace ldp {

inline constexpr double kDefaultGapMax = 50.0;  // meters

struct AdjacentTrack {
  std::string lane_id;
  double s_rear = 0.0;   // meters, rear bumper station
  double s_front = 0.0;  // meters, front bumper station
  double speed = 0.0;    // m/s

  friend bool operator==(const AdjacentTrack&, const AdjacentTrack&) = default;
};

class GapObservation {
 public:
  // Clamps the actual gap into [0, gap_max] so the factor below never
  // drops under 1.
  GapObservation(double gap_actual, double gap_max)
      : gap_actual_(clamped(gap_actual, gap_max)), gap_max_(gap_max) {}

  double gap_actual() const { return gap_actual_; }
  double gap_max() const { return gap_max_; }

  friend bool operator==(const GapObservation&, const GapObservation&) = default;

 private:
  static double clamped(double gap_actual, double gap_max) {
    if (!(gap_max > 0.0)) {
      throw ValidationError("GapObservation: gap_max must be > 0");
    }
    if (std::isnan(gap_actual)) {
      throw ValidationError("GapObservation: gap_actual must be a number");
    }
    return std::clamp(gap_actual, 0.0, gap_max);
  }

  double gap_actual_;
  double gap_max_;
};

// Free longitudinal distance in one adjacent lane: from the front bumper of
// the nearest track behind the ego's rear to the rear bumper of the nearest
// track ahead of the ego's front. A track overlapping the ego's own station
// interval closes the gap entirely; an empty lane leaves it wide open.
inline GapObservation observe_gap(double ego_s_rear, double ego_s_front,
                                  std::span<const AdjacentTrack> tracks,
                                  double gap_max = kDefaultGapMax) {
  if (!(ego_s_front > ego_s_rear)) {
    throw ValidationError("observe_gap: ego s_front must exceed s_rear");
  }
  for (const AdjacentTrack& track : tracks) {
    if (!(track.s_front > track.s_rear)) {
      throw ValidationError("observe_gap: track in lane '" + track.lane_id +
                            "' has s_front <= s_rear");
    }
    if (track.lane_id != tracks.front().lane_id) {
      throw ValidationError("observe_gap: tracks span more than one lane");
    }
  }
  double behind_front = -std::numeric_limits<double>::infinity();
  double ahead_rear = std::numeric_limits<double>::infinity();
  for (const AdjacentTrack& track : tracks) {
    if (track.s_rear < ego_s_front && track.s_front > ego_s_rear) {
      return GapObservation(0.0, gap_max);
    }
    if (track.s_rear >= ego_s_front) {
      ahead_rear = std::min(ahead_rear, track.s_rear);
    } else {
      behind_front = std::max(behind_front, track.s_front);
    }
  }
  return GapObservation(ahead_rear - behind_front, gap_max);
}

inline PenaltyValue gap_factor(const GapObservation& obs) {
  if (obs.gap_actual() == 0.0) return PenaltyValue::infinite();
  return PenaltyValue(obs.gap_max() / obs.gap_actual());
}

// Full composition: gap factor on top of the curvature-scaled static
// penalty. Infinite * 0 stays 0, so a closed adjacent lane costs nothing
// until the boundary is actually crossed.
inline PenaltyValue total_penalty(double x, const PenaltyContext& ctx,
                                  const GapObservation& obs) {
  return gap_factor(obs) * penalty_with_curvature(x, ctx);
}

}  // namespace ldp
