#pragma once

// Online safety filter. The deviation penalty becomes a barrier
// h = threshold - penalty over single-integrator lateral kinematics
// (lateral rate is the control input), and a closed-form one-dimensional
// QP minimally edits the nominal command to keep h nonnegative.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>

#include "ldp/errors.hpp"
#include "ldp/penalty_value.hpp"

namespace ldp {

struct LateralState {
  double lateral = 0.0;             // meters, signed, positive left
  double station = 0.0;             // meters
  double longitudinal_speed = 0.0;  // m/s

  friend bool operator==(const LateralState&, const LateralState&) = default;
};

struct ControlInput {
  double lateral_velocity_command = 0.0;  // m/s

  friend bool operator==(const ControlInput&, const ControlInput&) = default;
};

struct BarrierConfig {
  double penalty_threshold = 0.5;  // dimensionless
  double alpha0 = 1.0;             // 1/s, gain of the linear class-K alpha
  double u_max = 2.0;              // m/s
  double derivative_step = 1e-4;   // meters

  friend bool operator==(const BarrierConfig&, const BarrierConfig&) = default;
};

inline void validate(const BarrierConfig& config) {
  if (!(config.penalty_threshold > 0.0) || !(config.alpha0 > 0.0) ||
      !(config.u_max > 0.0) || !(config.derivative_step > 0.0)) {
    throw ValidationError("BarrierConfig: all fields must be positive");
  }
}

// Stand-in for an Infinite penalty when probing the numeric derivative;
// keeps the slope finite while dwarfing every legal finite penalty.
inline constexpr double kDerivativeProbeCap = 1e12;

template <typename PenaltyFn>
double barrier_value(const LateralState& state, PenaltyFn&& penalty_eval,
                     const BarrierConfig& config) {
  validate(config);
  PenaltyValue penalty = penalty_eval(state.lateral);
  if (penalty.is_infinite()) {
    return -std::numeric_limits<double>::infinity();
  }
  return config.penalty_threshold - penalty.value();
}

struct SafeControlResult {
  ControlInput control;
  bool infeasible = false;
};

// min (u - u_nom)^2  s.t.  a*u >= b,  |u| <= u_max.  When the constraint
// cannot be met within bounds, returns the bound that violates it least
// and sets the flag; the filter always outputs a command.
inline SafeControlResult clamped_min_deviation_control(double a, double b,
                                                       double u_nom,
                                                       double u_max) {
  if (!(u_max > 0.0)) {
    throw std::domain_error("clamped_min_deviation_control: u_max must be > 0");
  }
  if (a == 0.0) {
    bool feasible = b <= 0.0;
    return {{std::clamp(u_nom, -u_max, u_max)}, !feasible};
  }
  double threshold = b / a;
  if (a > 0.0) {
    if (threshold > u_max) return {{u_max}, true};
    return {{std::clamp(u_nom, std::max(threshold, -u_max), u_max)}, false};
  }
  if (threshold < -u_max) return {{-u_max}, true};
  return {{std::clamp(u_nom, -u_max, std::min(threshold, u_max))}, false};
}

// Filters one command. The barrier derivative along the input direction is
// a = -dP/dy by central difference; the class-K condition gives the bound
// a*u >= -alpha0*h.
template <typename PenaltyFn>
SafeControlResult safe_control(const ControlInput& u_nom,
                               const LateralState& state,
                               PenaltyFn&& penalty_eval,
                               const BarrierConfig& config) {
  validate(config);
  auto probe = [&](double lateral) {
    PenaltyValue penalty = penalty_eval(lateral);
    return penalty.is_infinite() ? kDerivativeProbeCap : penalty.value();
  };
  double step = config.derivative_step;
  double slope =
      (probe(state.lateral + step) - probe(state.lateral - step)) / (2.0 * step);
  double h = barrier_value(state, penalty_eval, config);
  double a = -slope;
  double b = -config.alpha0 * h;
  return clamped_min_deviation_control(a, b, u_nom.lateral_velocity_command,
                                       config.u_max);
}

struct BarrierSample {
  LateralState state;
  double h = 0.0;
};

struct InvarianceReport {
  double min_h = 0.0;
  std::size_t violation_count = 0;
  std::optional<std::size_t> first_violation_index;
};

inline InvarianceReport check_invariance(std::span<const BarrierSample> trace,
                                         double tolerance = 1e-3) {
  if (trace.empty()) {
    throw ValidationError("check_invariance: trace must not be empty");
  }
  InvarianceReport report;
  report.min_h = trace.front().h;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    report.min_h = std::min(report.min_h, trace[i].h);
    if (trace[i].h < -tolerance) {
      if (!report.first_violation_index) report.first_violation_index = i;
      ++report.violation_count;
    }
  }
  return report;
}

}  // namespace ldp
