#pragma once

// Time-stepped lane-keeping scenario: ego under a proportional nominal
// controller plus an injected disturbance pulse, constant-speed adjacent
// traffic, per-step gap observation, the safety filter, and trace logging.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ldp/cbf_filter.hpp"
#include "ldp/errors.hpp"
#include "ldp/penalty_core.hpp"
#include "ldp/penalty_map.hpp"
#include "ldp/penalty_value.hpp"
#include "ldp/road_model.hpp"
#include "ldp/traffic_gap.hpp"

namespace ldp {

struct DisturbancePulse {
  double amplitude = 0.0;  // m/s, added to the nominal command
  double start = 0.0;      // seconds
  double duration = 0.0;   // seconds

  friend bool operator==(const DisturbancePulse&, const DisturbancePulse&) = default;

  bool active(double t) const { return t >= start && t < start + duration; }
};

struct EgoInit {
  double station = 0.0;  // meters
  double lateral = 0.0;  // meters from the ego-lane centerline
  std::optional<double> speed;  // m/s; absent = segment design speed
  double half_width = 1.0;  // meters
  double length = 4.0;      // meters

  friend bool operator==(const EgoInit&, const EgoInit&) = default;
};

struct Scenario {
  std::string network_path;
  std::string segment_id;
  std::string ego_lane_id;
  EgoInit ego;
  std::vector<AdjacentTrack> adjacent_traffic;
  double gap_max = kDefaultGapMax;
  BarrierConfig barrier;
  DisturbancePulse disturbance;
  double dt = 0.01;       // seconds
  double duration = 10.0;  // seconds
  double nominal_gain = 1.0;  // 1/s
  bool filter_enabled = true;
  // Constant boundary shift (construction, encroaching vehicles): moves the
  // lane boundaries without touching the penalty shape.
  double boundary_lateral_shift = 0.0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct TraceRecord {
  double t = 0.0;
  double station = 0.0;
  double lateral = 0.0;
  double encroachment_left = 0.0;
  double encroachment_right = 0.0;
  double gap_actual = 0.0;
  PenaltyValue gap_factor;
  PenaltyValue penalty_total;
  double h = 0.0;
  double u_nominal = 0.0;
  double u_filtered = 0.0;
  bool infeasible = false;
};

inline void validate(const Scenario& scenario) {
  if (!(scenario.dt > 0.0)) throw ValidationError("scenario: dt must be > 0");
  if (!(scenario.duration >= scenario.dt)) {
    throw ValidationError("scenario: duration must be >= dt");
  }
  if (!(scenario.ego.half_width > 0.0)) {
    throw ValidationError("scenario: ego half_width must be > 0");
  }
  if (!(scenario.ego.length > 0.0)) {
    throw ValidationError("scenario: ego length must be > 0");
  }
  if (scenario.ego.speed && !(*scenario.ego.speed >= 0.0)) {
    throw ValidationError("scenario: ego speed must be >= 0");
  }
  if (!(scenario.gap_max > 0.0)) {
    throw ValidationError("scenario: gap_max must be > 0");
  }
  for (const AdjacentTrack& track : scenario.adjacent_traffic) {
    if (!(track.speed >= 0.0)) {
      throw ValidationError("scenario: track speeds must be >= 0");
    }
    if (!(track.s_front > track.s_rear)) {
      throw ValidationError("scenario: track s_front must exceed s_rear");
    }
  }
  validate(scenario.barrier);
}

namespace detail {

// Static penalty geometry frozen for one scenario run: boundary kinds and
// curvature context per side of the ego lane.
struct EgoLanePenaltyModel {
  double lane_half_width = 0.0;
  double half_width = 0.0;
  double shift = 0.0;
  PenaltyContext left;
  PenaltyContext right;

  double encroachment_left(double lateral) const {
    return std::max(0.0, (lateral - shift) + half_width - lane_half_width);
  }
  double encroachment_right(double lateral) const {
    return std::max(0.0, half_width - (lateral - shift) - lane_half_width);
  }

  PenaltyValue evaluate(double lateral, const PenaltyValue& left_factor,
                        const PenaltyValue& right_factor) const {
    PenaltyValue p_left =
        left_factor * penalty_with_curvature(encroachment_left(lateral), left);
    PenaltyValue p_right = right_factor *
                           penalty_with_curvature(encroachment_right(lateral), right);
    return std::max(p_left, p_right);
  }
};

inline EgoLanePenaltyModel make_penalty_model(const RoadSegment& segment,
                                              const LaneRef& ego_lane,
                                              const Scenario& scenario) {
  double r_min = segment_min_radius(segment);
  double r_actual = effective_curvature_radius(segment);
  EgoLanePenaltyModel model;
  model.lane_half_width = ego_lane.lane->width / 2.0;
  model.half_width = scenario.ego.half_width;
  model.shift = scenario.boundary_lateral_shift;
  model.left = {segment.design_speed, ego_lane.lane->left_boundary, r_actual,
                r_min};
  model.right = {segment.design_speed, ego_lane.lane->right_boundary, r_actual,
                 r_min};
  return model;
}

}  // namespace detail

inline std::vector<TraceRecord> run(const Scenario& scenario,
                                    const RoadNetwork& network) {
  validate(scenario);
  const RoadSegment& segment = find_segment(network, scenario.segment_id);
  LaneRef ego_lane = find_lane(segment, scenario.ego_lane_id);
  for (const AdjacentTrack& track : scenario.adjacent_traffic) {
    find_lane(network, track.lane_id);
  }

  detail::EgoLanePenaltyModel model =
      detail::make_penalty_model(segment, ego_lane, scenario);
  std::optional<std::string> left_neighbor_id;
  std::optional<std::string> right_neighbor_id;
  if (ego_lane.index > 0) {
    left_neighbor_id = segment.lanes[ego_lane.index - 1].id;
  }
  if (ego_lane.index + 1 < segment.lanes.size()) {
    right_neighbor_id = segment.lanes[ego_lane.index + 1].id;
  }

  double ego_speed = scenario.ego.speed.value_or(segment.design_speed);
  double station = scenario.ego.station;
  double lateral = scenario.ego.lateral;
  std::vector<AdjacentTrack> tracks = scenario.adjacent_traffic;

  auto side_observation = [&](const std::optional<std::string>& neighbor_id,
                              double ego_rear, double ego_front) {
    std::vector<AdjacentTrack> in_lane;
    if (neighbor_id) {
      for (const AdjacentTrack& track : tracks) {
        if (track.lane_id == *neighbor_id) in_lane.push_back(track);
      }
    }
    return observe_gap(ego_rear, ego_front, in_lane, scenario.gap_max);
  };

  std::size_t steps = static_cast<std::size_t>(
      std::floor(scenario.duration / scenario.dt + 1e-9));
  std::vector<TraceRecord> trace;
  trace.reserve(steps);

  for (std::size_t i = 1; i <= steps; ++i) {
    double t = static_cast<double>(i) * scenario.dt;
    station += ego_speed * scenario.dt;
    for (AdjacentTrack& track : tracks) {
      track.s_rear += track.speed * scenario.dt;
      track.s_front += track.speed * scenario.dt;
    }

    double ego_rear = station - scenario.ego.length / 2.0;
    double ego_front = station + scenario.ego.length / 2.0;
    GapObservation left_obs =
        side_observation(left_neighbor_id, ego_rear, ego_front);
    GapObservation right_obs =
        side_observation(right_neighbor_id, ego_rear, ego_front);
    PenaltyValue left_factor = left_neighbor_id ? gap_factor(left_obs)
                                                : PenaltyValue(1.0);
    PenaltyValue right_factor = right_neighbor_id ? gap_factor(right_obs)
                                                  : PenaltyValue(1.0);

    auto penalty_eval = [&](double y) {
      return model.evaluate(y, left_factor, right_factor);
    };

    LateralState state{lateral, station, ego_speed};
    PenaltyValue penalty = penalty_eval(lateral);
    double h = barrier_value(state, penalty_eval, scenario.barrier);
    double u_nominal = -scenario.nominal_gain * lateral +
                       (scenario.disturbance.active(t)
                            ? scenario.disturbance.amplitude
                            : 0.0);
    SafeControlResult result =
        scenario.filter_enabled
            ? safe_control(ControlInput{u_nominal}, state, penalty_eval,
                           scenario.barrier)
            : SafeControlResult{{std::clamp(u_nominal, -scenario.barrier.u_max,
                                            scenario.barrier.u_max)},
                                false};

    // The trace row records the side whose factor governs.
    bool left_governs = left_factor >= right_factor;
    TraceRecord record;
    record.t = t;
    record.station = station;
    record.lateral = lateral;
    record.encroachment_left = model.encroachment_left(lateral);
    record.encroachment_right = model.encroachment_right(lateral);
    record.gap_actual =
        left_governs ? left_obs.gap_actual() : right_obs.gap_actual();
    record.gap_factor = left_governs ? left_factor : right_factor;
    record.penalty_total = penalty;
    record.h = h;
    record.u_nominal = u_nominal;
    record.u_filtered = result.control.lateral_velocity_command;
    record.infeasible = result.infeasible;
    trace.push_back(record);

    lateral += result.control.lateral_velocity_command * scenario.dt;
  }
  return trace;
}

inline std::vector<TraceRecord> run(const Scenario& scenario) {
  return run(scenario, load_road_network(scenario.network_path));
}

// ---------------------------------------------------------------------------
// Lateral cross-section of the penalty layers at one station, mirroring the
// static map plus a caller-chosen gap factor on inner-boundary sides.

struct CrossSectionSample {
  double lateral = 0.0;
  PenaltyValue p_vb;  // speed/boundary penalty
  PenaltyValue p_c;   // with curvature factor
  PenaltyValue p_lg;  // with gap factor
};

inline std::vector<CrossSectionSample> cross_section(
    const RoadNetwork& network, const std::string& segment_id,
    const std::string& ego_lane_id, double station, double gap_factor_value,
    double lateral_step = kDefaultLateralStep) {
  const RoadSegment& segment = find_segment(network, segment_id);
  find_lane(segment, ego_lane_id);
  if (std::isnan(gap_factor_value) || gap_factor_value < 1.0) {
    throw ValidationError("cross_section: gap factor must be >= 1");
  }
  if (!(lateral_step > 0.0)) {
    throw ValidationError("cross_section: lateral_step must be > 0");
  }
  if (station < 0.0 || station > segment.length) {
    throw std::out_of_range("cross_section: station outside segment");
  }
  PenaltyValue factor(gap_factor_value);

  double r_min = segment_min_radius(segment);
  double r_actual = effective_curvature_radius(segment);
  LateralExtent extent = lateral_extent(segment);
  std::size_t count = detail::grid_count(extent.max - extent.min, lateral_step);

  std::vector<CrossSectionSample> samples;
  samples.reserve(count);
  for (std::size_t j = 0; j < count; ++j) {
    double lateral = extent.min + static_cast<double>(j) * lateral_step;
    BoundaryDistance dist = ego_lane_distance(segment, ego_lane_id, lateral);
    PenaltyContext ctx{segment.design_speed, dist.kind, r_actual, r_min};
    CrossSectionSample sample;
    sample.lateral = lateral;
    sample.p_vb = base_penalty(dist.encroachment, ctx.speed_limit, ctx.boundary);
    sample.p_c = penalty_with_curvature(dist.encroachment, ctx);
    sample.p_lg = dist.kind == BoundaryKind::kInner ? factor * sample.p_c
                                                    : PenaltyValue(1.0) * sample.p_c;
    samples.push_back(std::move(sample));
  }
  return samples;
}

// ---------------------------------------------------------------------------
// Trace CSV: header row, one record per line, floats with 9 significant
// digits, Infinite written as "inf".

namespace detail {

inline std::string format_g9(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

inline std::string format_g9(const PenaltyValue& value) {
  return value.is_infinite() ? "inf" : format_g9(value.value());
}

}  // namespace detail

inline constexpr const char* kTraceCsvHeader =
    "t,station,lateral,encroachment_left,encroachment_right,gap_actual,"
    "gap_factor,penalty_total,h,u_nominal,u_filtered,infeasible";

inline void write_trace_csv(const std::vector<TraceRecord>& trace,
                            std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const TraceRecord& r : trace) {
    out << detail::format_g9(r.t) << ',' << detail::format_g9(r.station) << ','
        << detail::format_g9(r.lateral) << ','
        << detail::format_g9(r.encroachment_left) << ','
        << detail::format_g9(r.encroachment_right) << ','
        << detail::format_g9(r.gap_actual) << ','
        << detail::format_g9(r.gap_factor) << ','
        << detail::format_g9(r.penalty_total) << ',' << detail::format_g9(r.h)
        << ',' << detail::format_g9(r.u_nominal) << ','
        << detail::format_g9(r.u_filtered) << ',' << (r.infeasible ? 1 : 0)
        << '\n';
  }
}

inline void write_trace_csv(const std::vector<TraceRecord>& trace,
                            const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_trace_csv(trace, out);
}

// ---------------------------------------------------------------------------
// Scenario JSON file. Relative network paths resolve against the scenario
// file's own directory.

inline Scenario scenario_from_json(const nlohmann::json& root) {
  using detail::json;
  detail::check_fields(
      root, "scenario",
      {"network", "segment_id", "ego_lane_id", "ego", "adjacent_traffic",
       "gap_max", "barrier", "disturbance", "dt", "duration", "nominal_gain",
       "filter_enabled", "boundary_lateral_shift"});
  Scenario scenario;
  scenario.network_path = detail::require_string(root, "scenario", "network");
  scenario.segment_id = detail::require_string(root, "scenario", "segment_id");
  scenario.ego_lane_id = detail::require_string(root, "scenario", "ego_lane_id");

  const json& ego = detail::require_field(root, "scenario", "ego");
  detail::check_fields(ego, "scenario.ego",
                       {"station", "lateral", "speed", "half_width", "length"});
  scenario.ego.station = detail::number_or(ego, "scenario.ego", "station", 0.0);
  scenario.ego.lateral = detail::number_or(ego, "scenario.ego", "lateral", 0.0);
  if (ego.contains("speed")) {
    scenario.ego.speed = detail::as_number(ego["speed"], "scenario.ego.speed");
  }
  scenario.ego.half_width =
      detail::require_number(ego, "scenario.ego", "half_width");
  scenario.ego.length = detail::number_or(ego, "scenario.ego", "length", 4.0);

  if (root.contains("adjacent_traffic")) {
    const json& tracks = root["adjacent_traffic"];
    if (!tracks.is_array()) {
      throw ParseError("scenario.adjacent_traffic: expected an array");
    }
    for (const json& track_json : tracks) {
      detail::check_fields(track_json, "scenario track",
                           {"lane_id", "s_rear", "s_front", "speed"});
      AdjacentTrack track;
      track.lane_id = detail::require_string(track_json, "scenario track", "lane_id");
      track.s_rear = detail::require_number(track_json, "scenario track", "s_rear");
      track.s_front = detail::require_number(track_json, "scenario track", "s_front");
      track.speed = detail::require_number(track_json, "scenario track", "speed");
      scenario.adjacent_traffic.push_back(std::move(track));
    }
  }

  scenario.gap_max =
      detail::number_or(root, "scenario", "gap_max", kDefaultGapMax);

  if (root.contains("barrier")) {
    const json& barrier = root["barrier"];
    detail::check_fields(barrier, "scenario.barrier",
                         {"penalty_threshold", "alpha0", "u_max",
                          "derivative_step"});
    BarrierConfig defaults;
    scenario.barrier.penalty_threshold =
        detail::number_or(barrier, "scenario.barrier", "penalty_threshold",
                          defaults.penalty_threshold);
    scenario.barrier.alpha0 =
        detail::number_or(barrier, "scenario.barrier", "alpha0", defaults.alpha0);
    scenario.barrier.u_max =
        detail::number_or(barrier, "scenario.barrier", "u_max", defaults.u_max);
    scenario.barrier.derivative_step = detail::number_or(
        barrier, "scenario.barrier", "derivative_step", defaults.derivative_step);
  }

  if (root.contains("disturbance")) {
    const json& disturbance = root["disturbance"];
    detail::check_fields(disturbance, "scenario.disturbance",
                         {"amplitude", "start", "duration"});
    scenario.disturbance.amplitude = detail::number_or(
        disturbance, "scenario.disturbance", "amplitude", 0.0);
    scenario.disturbance.start =
        detail::number_or(disturbance, "scenario.disturbance", "start", 0.0);
    scenario.disturbance.duration = detail::number_or(
        disturbance, "scenario.disturbance", "duration", 0.0);
  }

  scenario.dt = detail::require_number(root, "scenario", "dt");
  scenario.duration = detail::require_number(root, "scenario", "duration");
  scenario.nominal_gain =
      detail::number_or(root, "scenario", "nominal_gain", 1.0);
  scenario.filter_enabled =
      detail::bool_or(root, "scenario", "filter_enabled", true);
  scenario.boundary_lateral_shift =
      detail::number_or(root, "scenario", "boundary_lateral_shift", 0.0);

  validate(scenario);
  return scenario;
}

inline Scenario load_scenario(const std::string& path) {
  Scenario scenario = scenario_from_json(detail::load_json_file(path));
  std::filesystem::path network_path(scenario.network_path);
  if (network_path.is_relative()) {
    scenario.network_path =
        (std::filesystem::path(path).parent_path() / network_path).string();
  }
  return scenario;
}

}  // namespace ldp
