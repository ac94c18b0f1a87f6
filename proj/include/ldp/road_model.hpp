#pragma once

// Lane-level road network: segments, lanes, boundary classification,
// turn geometry for intersections, encroachment measurement and the
// AASHTO minimum-curve-radius formula. Station/lateral coordinates only;
// positive lateral points left.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ldp/errors.hpp"

namespace ldp {

enum class BoundaryKind { kInner, kOuter };
enum class LaneSide { kLeft, kRight };
enum class TurnDirection { kLeft, kRight };

struct LaneSpec {
  std::string id;
  double width = 3.0;  // meters
  BoundaryKind left_boundary = BoundaryKind::kInner;
  BoundaryKind right_boundary = BoundaryKind::kInner;
  double shoulder_width_if_outer = 0.0;  // meters, used when an edge is Outer

  friend bool operator==(const LaneSpec&, const LaneSpec&) = default;
};

struct RoadSegment {
  std::string id;
  double design_speed = 0.0;  // m/s
  std::vector<LaneSpec> lanes;  // leftmost first
  std::optional<double> curvature_radius_actual;  // meters; absent = straight
  double superelevation_max = 8.0;   // percent
  double side_friction_max = 0.14;   // dimensionless
  double length = 0.0;  // meters

  friend bool operator==(const RoadSegment&, const RoadSegment&) = default;
};

struct IntersectionTurnSpec {
  std::string id;
  TurnDirection turn_direction = TurnDirection::kLeft;
  double entry_heading = 0.0;  // radians
  double exit_heading = 0.0;   // radians
  double mean_turn_radius = 0.0;  // meters
  double curb_offset_inner = 0.0;  // meters from mean turn arc to inner curb
  double curb_offset_outer = 0.0;  // meters from mean turn arc to outer curb
  bool has_adjacent_turn_lane_inner = false;
  bool has_adjacent_turn_lane_outer = false;
  double turn_speed = 0.0;  // m/s

  friend bool operator==(const IntersectionTurnSpec&, const IntersectionTurnSpec&) = default;
};

struct RoadNetwork {
  std::vector<RoadSegment> segments;
  std::vector<IntersectionTurnSpec> intersections;
  int schema_version = 1;

  friend bool operator==(const RoadNetwork&, const RoadNetwork&) = default;
};

// Ego pose within a lane. lateral is signed meters from the ego-lane
// centerline, positive left; encroachment is measured from the vehicle
// edge at lateral +/- half_width.
struct VehiclePose {
  double station = 0.0;
  double lateral = 0.0;
  double heading_error = 0.0;
  double half_width = 1.0;
};

inline constexpr int kRoadSchemaVersion = 1;
inline constexpr double kDefaultLaneWidth = 3.0;        // meters
inline constexpr double kDefaultSuperelevationMax = 8.0;  // percent
inline constexpr double kDefaultSideFrictionMax = 0.14;
inline constexpr double kMetersPerSecondPerMph = 0.44704;
inline constexpr double kMetersPerFoot = 0.3048;

// ---------------------------------------------------------------------------
// AASHTO horizontal-curve minimum radius.
//
// The published formula works in mph and feet with constants 15 and 0.01;
// inputs and the result here are metric, converted at the boundary.
inline double min_curve_radius(double design_speed, double e_max_percent,
                               double f_max) {
  if (design_speed < 0.0) {
    throw std::domain_error("min_curve_radius: design_speed must be >= 0");
  }
  double denom = 15.0 * (0.01 * e_max_percent + f_max);
  if (denom <= 0.0) {
    throw std::domain_error(
        "min_curve_radius: 0.01*e_max + f_max must be positive");
  }
  double v_mph = design_speed / kMetersPerSecondPerMph;
  double radius_ft = v_mph * v_mph / denom;
  return radius_ft * kMetersPerFoot;
}

inline double segment_min_radius(const RoadSegment& segment) {
  return min_curve_radius(segment.design_speed, segment.superelevation_max,
                          segment.side_friction_max);
}

// Straight segments behave as if driven exactly at the design minimum, so
// the curvature factor degenerates to 1.
inline double effective_curvature_radius(const RoadSegment& segment) {
  return segment.curvature_radius_actual.value_or(segment_min_radius(segment));
}

// ---------------------------------------------------------------------------
// Lookup and geometry helpers.

inline const RoadSegment& find_segment(const RoadNetwork& network,
                                       const std::string& segment_id) {
  for (const auto& segment : network.segments) {
    if (segment.id == segment_id) return segment;
  }
  throw ValidationError("unknown segment id '" + segment_id + "'");
}

struct LaneRef {
  const RoadSegment* segment = nullptr;
  const LaneSpec* lane = nullptr;
  std::size_t index = 0;  // 0 = leftmost lane of the segment
};

inline LaneRef find_lane(const RoadSegment& segment, const std::string& lane_id) {
  for (std::size_t i = 0; i < segment.lanes.size(); ++i) {
    if (segment.lanes[i].id == lane_id) return {&segment, &segment.lanes[i], i};
  }
  throw ValidationError("unknown lane id '" + lane_id + "' in segment '" +
                        segment.id + "'");
}

inline LaneRef find_lane(const RoadNetwork& network, const std::string& lane_id) {
  for (const auto& segment : network.segments) {
    for (std::size_t i = 0; i < segment.lanes.size(); ++i) {
      if (segment.lanes[i].id == lane_id) return {&segment, &segment.lanes[i], i};
    }
  }
  throw ValidationError("unknown lane id '" + lane_id + "'");
}

inline double total_width(const RoadSegment& segment) {
  double w = 0.0;
  for (const auto& lane : segment.lanes) w += lane.width;
  return w;
}

// Lateral coordinates of a lane's edges about the road centerline
// (middle of the total paved width), positive left.
struct LaneBounds {
  double left = 0.0;
  double right = 0.0;
};

inline LaneBounds lane_bounds(const RoadSegment& segment,
                              const std::string& lane_id) {
  LaneRef ref = find_lane(segment, lane_id);
  double left = total_width(segment) / 2.0;
  for (std::size_t i = 0; i < ref.index; ++i) left -= segment.lanes[i].width;
  return {left, left - ref.lane->width};
}

// Full lateral span of the roadway including outer shoulders.
struct LateralExtent {
  double min = 0.0;
  double max = 0.0;
};

inline LateralExtent lateral_extent(const RoadSegment& segment) {
  double half = total_width(segment) / 2.0;
  double left_shoulder = segment.lanes.front().left_boundary == BoundaryKind::kOuter
                             ? segment.lanes.front().shoulder_width_if_outer
                             : 0.0;
  double right_shoulder = segment.lanes.back().right_boundary == BoundaryKind::kOuter
                              ? segment.lanes.back().shoulder_width_if_outer
                              : 0.0;
  return {-half - right_shoulder, half + left_shoulder};
}

// ---------------------------------------------------------------------------
// Encroachment: how far the nearer vehicle edge extends beyond the given
// lane boundary. Zero while the edge stays inside the lane.
inline double encroachment(const RoadNetwork& network, const std::string& lane_id,
                           LaneSide side, const VehiclePose& pose) {
  if (pose.half_width <= 0.0) {
    throw ValidationError("vehicle half_width must be > 0");
  }
  LaneRef ref = find_lane(network, lane_id);
  double half_lane = ref.lane->width / 2.0;
  double edge = side == LaneSide::kLeft ? pose.lateral + pose.half_width
                                        : -(pose.lateral - pose.half_width);
  return std::max(0.0, edge - half_lane);
}

// ---------------------------------------------------------------------------
// JSON road-map file. Field names match the type definitions; unknown
// fields are rejected.

namespace detail {

using json = nlohmann::json;

inline void check_fields(const json& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ParseError(where + ": expected a JSON object");
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* name : allowed) {
      if (key == name) {
        known = true;
        break;
      }
    }
    if (!known) throw ParseError(where + ": unknown field '" + key + "'");
  }
}

inline const json& require_field(const json& obj, const std::string& where,
                                 const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(where + ": missing field '" + std::string(key) + "'");
  }
  return *it;
}

inline double as_number(const json& value, const std::string& where) {
  if (!value.is_number()) throw ParseError(where + ": expected a number");
  return value.get<double>();
}

inline double require_number(const json& obj, const std::string& where,
                             const char* key) {
  return as_number(require_field(obj, where, key), where + "." + key);
}

inline double number_or(const json& obj, const std::string& where,
                        const char* key, double fallback) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, where + "." + key);
}

inline std::string require_string(const json& obj, const std::string& where,
                                  const char* key) {
  const json& value = require_field(obj, where, key);
  if (!value.is_string()) {
    throw ParseError(where + "." + key + ": expected a string");
  }
  return value.get<std::string>();
}

inline bool bool_or(const json& obj, const std::string& where, const char* key,
                    bool fallback) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) {
    throw ParseError(where + "." + key + ": expected a boolean");
  }
  return it->get<bool>();
}

inline BoundaryKind parse_boundary_kind(const json& value,
                                        const std::string& where) {
  if (value.is_string()) {
    std::string s = value.get<std::string>();
    if (s == "inner") return BoundaryKind::kInner;
    if (s == "outer") return BoundaryKind::kOuter;
  }
  throw ParseError(where + ": expected \"inner\" or \"outer\"");
}

inline const char* boundary_kind_name(BoundaryKind kind) {
  return kind == BoundaryKind::kInner ? "inner" : "outer";
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace detail

inline void validate(const RoadNetwork& network) {
  std::vector<std::string> segment_ids;
  std::vector<std::string> lane_ids;
  for (const auto& segment : network.segments) {
    if (std::find(segment_ids.begin(), segment_ids.end(), segment.id) !=
        segment_ids.end()) {
      throw ValidationError("duplicate segment id '" + segment.id + "'");
    }
    segment_ids.push_back(segment.id);
    if (!(segment.design_speed > 0.0 && segment.design_speed < 100.0)) {
      throw ValidationError("segment '" + segment.id +
                            "': design_speed must be in (0, 100) m/s");
    }
    if (segment.lanes.empty()) {
      throw ValidationError("segment '" + segment.id +
                            "': must have at least one lane");
    }
    if (segment.curvature_radius_actual &&
        *segment.curvature_radius_actual <= 0.0) {
      throw ValidationError("segment '" + segment.id +
                            "': curvature_radius_actual must be > 0");
    }
    if (segment.length <= 0.0) {
      throw ValidationError("segment '" + segment.id + "': length must be > 0");
    }
    for (std::size_t i = 0; i < segment.lanes.size(); ++i) {
      const LaneSpec& lane = segment.lanes[i];
      if (std::find(lane_ids.begin(), lane_ids.end(), lane.id) !=
          lane_ids.end()) {
        throw ValidationError("duplicate lane id '" + lane.id + "'");
      }
      lane_ids.push_back(lane.id);
      if (lane.width <= 0.0) {
        throw ValidationError("lane '" + lane.id + "': width must be > 0");
      }
      if (lane.shoulder_width_if_outer < 0.0) {
        throw ValidationError("lane '" + lane.id +
                              "': shoulder_width_if_outer must be >= 0");
      }
      // Only the outermost edges of the outermost lanes may be Outer.
      if (i > 0 && lane.left_boundary == BoundaryKind::kOuter) {
        throw ValidationError("lane '" + lane.id +
                              "': left boundary of a non-leftmost lane must be inner");
      }
      if (i + 1 < segment.lanes.size() &&
          lane.right_boundary == BoundaryKind::kOuter) {
        throw ValidationError("lane '" + lane.id +
                              "': right boundary of a non-rightmost lane must be inner");
      }
    }
  }
  for (const auto& turn : network.intersections) {
    if (turn.mean_turn_radius <= 0.0) {
      throw ValidationError("intersection '" + turn.id +
                            "': mean_turn_radius must be > 0");
    }
    if (turn.curb_offset_inner <= 0.0 || turn.curb_offset_outer <= 0.0) {
      throw ValidationError("intersection '" + turn.id +
                            "': curb offsets must be > 0");
    }
    if (turn.turn_speed <= 0.0) {
      throw ValidationError("intersection '" + turn.id +
                            "': turn_speed must be > 0");
    }
  }
}

inline RoadNetwork road_network_from_json(const nlohmann::json& root) {
  using detail::json;
  detail::check_fields(root, "road map",
                       {"schema_version", "segments", "intersections"});
  RoadNetwork network;
  const json& version = detail::require_field(root, "road map", "schema_version");
  if (!version.is_number_integer() ||
      version.get<int>() != kRoadSchemaVersion) {
    throw ParseError("road map: unsupported schema_version (expected " +
                     std::to_string(kRoadSchemaVersion) + ")");
  }
  network.schema_version = version.get<int>();

  const json& segments = detail::require_field(root, "road map", "segments");
  if (!segments.is_array()) throw ParseError("road map.segments: expected an array");
  for (const json& seg_json : segments) {
    std::string where = "segment";
    detail::check_fields(seg_json, where,
                         {"id", "design_speed", "lanes", "curvature_radius_actual",
                          "superelevation_max", "side_friction_max", "length"});
    RoadSegment segment;
    segment.id = detail::require_string(seg_json, where, "id");
    where = "segment '" + segment.id + "'";
    segment.design_speed = detail::require_number(seg_json, where, "design_speed");
    segment.length = detail::require_number(seg_json, where, "length");
    segment.superelevation_max = detail::number_or(
        seg_json, where, "superelevation_max", kDefaultSuperelevationMax);
    segment.side_friction_max = detail::number_or(
        seg_json, where, "side_friction_max", kDefaultSideFrictionMax);
    if (seg_json.contains("curvature_radius_actual")) {
      segment.curvature_radius_actual = detail::as_number(
          seg_json["curvature_radius_actual"], where + ".curvature_radius_actual");
    }
    const json& lanes = detail::require_field(seg_json, where, "lanes");
    if (!lanes.is_array()) throw ParseError(where + ".lanes: expected an array");
    for (const json& lane_json : lanes) {
      std::string lane_where = where + " lane";
      detail::check_fields(lane_json, lane_where,
                           {"id", "width", "left_boundary", "right_boundary",
                            "shoulder_width_if_outer"});
      LaneSpec lane;
      lane.id = detail::require_string(lane_json, lane_where, "id");
      lane_where = "lane '" + lane.id + "'";
      lane.width = detail::number_or(lane_json, lane_where, "width",
                                     kDefaultLaneWidth);
      lane.left_boundary = detail::parse_boundary_kind(
          detail::require_field(lane_json, lane_where, "left_boundary"),
          lane_where + ".left_boundary");
      lane.right_boundary = detail::parse_boundary_kind(
          detail::require_field(lane_json, lane_where, "right_boundary"),
          lane_where + ".right_boundary");
      lane.shoulder_width_if_outer = detail::number_or(
          lane_json, lane_where, "shoulder_width_if_outer", 0.0);
      segment.lanes.push_back(std::move(lane));
    }
    network.segments.push_back(std::move(segment));
  }

  if (root.contains("intersections")) {
    const json& turns = root["intersections"];
    if (!turns.is_array()) {
      throw ParseError("road map.intersections: expected an array");
    }
    for (const json& turn_json : turns) {
      std::string where = "intersection";
      detail::check_fields(turn_json, where,
                           {"id", "turn_direction", "entry_heading", "exit_heading",
                            "mean_turn_radius", "curb_offset_inner",
                            "curb_offset_outer", "has_adjacent_turn_lane",
                            "turn_speed"});
      IntersectionTurnSpec turn;
      turn.id = detail::require_string(turn_json, where, "id");
      where = "intersection '" + turn.id + "'";
      std::string direction = detail::require_string(turn_json, where, "turn_direction");
      if (direction == "left") {
        turn.turn_direction = TurnDirection::kLeft;
      } else if (direction == "right") {
        turn.turn_direction = TurnDirection::kRight;
      } else {
        throw ParseError(where + ".turn_direction: expected \"left\" or \"right\"");
      }
      turn.entry_heading = detail::require_number(turn_json, where, "entry_heading");
      turn.exit_heading = detail::require_number(turn_json, where, "exit_heading");
      turn.mean_turn_radius = detail::require_number(turn_json, where, "mean_turn_radius");
      turn.curb_offset_inner = detail::require_number(turn_json, where, "curb_offset_inner");
      turn.curb_offset_outer = detail::require_number(turn_json, where, "curb_offset_outer");
      turn.turn_speed = detail::require_number(turn_json, where, "turn_speed");
      if (turn_json.contains("has_adjacent_turn_lane")) {
        const json& sides = turn_json["has_adjacent_turn_lane"];
        detail::check_fields(sides, where + ".has_adjacent_turn_lane",
                             {"inner", "outer"});
        turn.has_adjacent_turn_lane_inner =
            detail::bool_or(sides, where, "inner", false);
        turn.has_adjacent_turn_lane_outer =
            detail::bool_or(sides, where, "outer", false);
      }
      network.intersections.push_back(std::move(turn));
    }
  }

  validate(network);
  return network;
}

inline nlohmann::json road_network_to_json(const RoadNetwork& network) {
  using detail::json;
  json root;
  root["schema_version"] = network.schema_version;
  root["segments"] = json::array();
  for (const auto& segment : network.segments) {
    json seg_json;
    seg_json["id"] = segment.id;
    seg_json["design_speed"] = segment.design_speed;
    seg_json["length"] = segment.length;
    seg_json["superelevation_max"] = segment.superelevation_max;
    seg_json["side_friction_max"] = segment.side_friction_max;
    if (segment.curvature_radius_actual) {
      seg_json["curvature_radius_actual"] = *segment.curvature_radius_actual;
    }
    seg_json["lanes"] = json::array();
    for (const auto& lane : segment.lanes) {
      json lane_json;
      lane_json["id"] = lane.id;
      lane_json["width"] = lane.width;
      lane_json["left_boundary"] = detail::boundary_kind_name(lane.left_boundary);
      lane_json["right_boundary"] = detail::boundary_kind_name(lane.right_boundary);
      lane_json["shoulder_width_if_outer"] = lane.shoulder_width_if_outer;
      seg_json["lanes"].push_back(std::move(lane_json));
    }
    root["segments"].push_back(std::move(seg_json));
  }
  root["intersections"] = json::array();
  for (const auto& turn : network.intersections) {
    json turn_json;
    turn_json["id"] = turn.id;
    turn_json["turn_direction"] =
        turn.turn_direction == TurnDirection::kLeft ? "left" : "right";
    turn_json["entry_heading"] = turn.entry_heading;
    turn_json["exit_heading"] = turn.exit_heading;
    turn_json["mean_turn_radius"] = turn.mean_turn_radius;
    turn_json["curb_offset_inner"] = turn.curb_offset_inner;
    turn_json["curb_offset_outer"] = turn.curb_offset_outer;
    turn_json["has_adjacent_turn_lane"] = {
        {"inner", turn.has_adjacent_turn_lane_inner},
        {"outer", turn.has_adjacent_turn_lane_outer}};
    turn_json["turn_speed"] = turn.turn_speed;
    root["intersections"].push_back(std::move(turn_json));
  }
  return root;
}

inline RoadNetwork load_road_network(const std::string& path) {
  return road_network_from_json(detail::load_json_file(path));
}

inline void save_road_network(const RoadNetwork& network, const std::string& path) {
  validate(network);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << road_network_to_json(network).dump(2) << '\n';
}

}  // namespace ldp
