#pragma once

// Precomputed static penalty grid for one segment and one ego lane:
// everything the map and design speed determine ahead of time, leaving only
// the per-step gap factor for the online side.

#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ldp/errors.hpp"
#include "ldp/penalty_core.hpp"
#include "ldp/penalty_value.hpp"
#include "ldp/road_model.hpp"

namespace ldp {

inline constexpr int kMapSchemaVersion = 1;
inline constexpr double kDefaultStationStep = 1.0;   // meters
inline constexpr double kDefaultLateralStep = 0.05;  // meters

struct StaticSample {
  PenaltyValue static_penalty;
  std::optional<std::string> governing_boundary;  // "<lane_id>/left|right"
  double encroachment = 0.0;  // meters

  friend bool operator==(const StaticSample&, const StaticSample&) = default;
};

struct LateralRange {
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const LateralRange&, const LateralRange&) = default;
};

// Grid of static penalties, stations outer and laterals inner. Encroachment
// and the governing boundary depend only on the lateral offset, so they are
// stored once per column.
class StaticPenaltyMap {
 public:
  struct Column {
    double encroachment = 0.0;
    std::optional<std::string> governing_boundary;

    friend bool operator==(const Column&, const Column&) = default;
  };

  StaticPenaltyMap(std::string segment_id, std::string ego_lane_id,
                   double station_step, double lateral_step,
                   LateralRange lateral_range, std::size_t station_count,
                   std::vector<Column> columns, std::vector<PenaltyValue> cells)
      : segment_id_(std::move(segment_id)),
        ego_lane_id_(std::move(ego_lane_id)),
        station_step_(station_step),
        lateral_step_(lateral_step),
        lateral_range_(lateral_range),
        station_count_(station_count),
        columns_(std::move(columns)),
        cells_(std::move(cells)) {
    if (!(station_step_ > 0.0) || !(lateral_step_ > 0.0)) {
      throw ValidationError("StaticPenaltyMap: steps must be > 0");
    }
    if (station_count_ == 0 || columns_.empty()) {
      throw ValidationError("StaticPenaltyMap: grid must not be empty");
    }
    if (cells_.size() != station_count_ * columns_.size()) {
      throw ValidationError("StaticPenaltyMap: cell count does not match grid");
    }
  }

  const std::string& segment_id() const { return segment_id_; }
  const std::string& ego_lane_id() const { return ego_lane_id_; }
  double station_step() const { return station_step_; }
  double lateral_step() const { return lateral_step_; }
  const LateralRange& lateral_range() const { return lateral_range_; }
  std::size_t station_count() const { return station_count_; }
  std::size_t lateral_count() const { return columns_.size(); }
  const std::vector<Column>& columns() const { return columns_; }
  const std::vector<PenaltyValue>& cells() const { return cells_; }

  double station_at(std::size_t i) const {
    return static_cast<double>(i) * station_step_;
  }
  double lateral_at(std::size_t j) const {
    return lateral_range_.min + static_cast<double>(j) * lateral_step_;
  }

  StaticSample at(std::size_t station_index, std::size_t lateral_index) const {
    const Column& column = columns_.at(lateral_index);
    return {cells_.at(station_index * columns_.size() + lateral_index),
            column.governing_boundary, column.encroachment};
  }

  friend bool operator==(const StaticPenaltyMap&,
                         const StaticPenaltyMap&) = default;

 private:
  std::string segment_id_;
  std::string ego_lane_id_;
  double station_step_;
  double lateral_step_;
  LateralRange lateral_range_;
  std::size_t station_count_;
  std::vector<Column> columns_;
  std::vector<PenaltyValue> cells_;
};

namespace detail {

// Node count covering [0, span] at the given step, tolerant of the usual
// floating-point shortfall in span/step.
inline std::size_t grid_count(double span, double step) {
  return static_cast<std::size_t>(std::floor(span / step + 1e-9)) + 1;
}

}  // namespace detail

// Point-based encroachment of a grid lateral against the ego lane: the left
// boundary governs offsets to its left, the right boundary to its right.
struct BoundaryDistance {
  double encroachment = 0.0;
  std::optional<std::string> governing_boundary;
  BoundaryKind kind = BoundaryKind::kInner;
};

inline BoundaryDistance ego_lane_distance(const RoadSegment& segment,
                                          const std::string& ego_lane_id,
                                          double lateral) {
  LaneRef ref = find_lane(segment, ego_lane_id);
  LaneBounds bounds = lane_bounds(segment, ego_lane_id);
  if (lateral > bounds.left) {
    return {lateral - bounds.left, ref.lane->id + "/left",
            ref.lane->left_boundary};
  }
  if (lateral < bounds.right) {
    return {bounds.right - lateral, ref.lane->id + "/right",
            ref.lane->right_boundary};
  }
  return {0.0, std::nullopt, BoundaryKind::kInner};
}

inline StaticPenaltyMap build_static_map(const RoadNetwork& network,
                                         const std::string& segment_id,
                                         const std::string& ego_lane_id,
                                         double station_step = kDefaultStationStep,
                                         double lateral_step = kDefaultLateralStep) {
  const RoadSegment& segment = find_segment(network, segment_id);
  LaneRef ego = find_lane(segment, ego_lane_id);
  if (!(station_step > 0.0) || !(lateral_step > 0.0)) {
    throw ValidationError("build_static_map: steps must be > 0");
  }
  if (lateral_step > ego.lane->width) {
    throw ValidationError("build_static_map: lateral_step exceeds lane width");
  }

  LateralExtent extent = lateral_extent(segment);
  LateralRange range{extent.min, extent.max};
  std::size_t station_count = detail::grid_count(segment.length, station_step);
  std::size_t lateral_count =
      detail::grid_count(range.max - range.min, lateral_step);

  double r_min = segment_min_radius(segment);
  double r_actual = effective_curvature_radius(segment);

  std::vector<StaticPenaltyMap::Column> columns;
  std::vector<PenaltyValue> first_row;
  columns.reserve(lateral_count);
  first_row.reserve(lateral_count);
  for (std::size_t j = 0; j < lateral_count; ++j) {
    double lateral =
        range.min + static_cast<double>(j) * lateral_step;
    BoundaryDistance dist = ego_lane_distance(segment, ego_lane_id, lateral);
    columns.push_back({dist.encroachment, dist.governing_boundary});
    PenaltyContext ctx{segment.design_speed, dist.kind, r_actual, r_min};
    first_row.push_back(penalty_with_curvature(dist.encroachment, ctx));
  }

  // The static penalty is station-invariant on a uniform segment; every row
  // repeats the first.
  std::vector<PenaltyValue> cells;
  cells.reserve(station_count * lateral_count);
  for (std::size_t i = 0; i < station_count; ++i) {
    cells.insert(cells.end(), first_row.begin(), first_row.end());
  }

  return StaticPenaltyMap(segment.id, ego.lane->id, station_step, lateral_step,
                          range, station_count, std::move(columns),
                          std::move(cells));
}

namespace detail {

// Nearest grid index with ties toward the smaller index.
inline std::size_t nearest_index(double offset, double step, std::size_t count,
                                 const char* what) {
  double position = offset / step;
  if (position < -0.5 ||
      position > static_cast<double>(count - 1) + 0.5) {
    throw std::out_of_range(std::string(what) + " outside map range");
  }
  double index = std::ceil(position - 0.5);
  if (index < 0.0) index = 0.0;
  std::size_t i = static_cast<std::size_t>(index);
  return i >= count ? count - 1 : i;
}

}  // namespace detail

inline StaticSample query_static(const StaticPenaltyMap& map, double station,
                                 double lateral) {
  if (station < 0.0 ||
      station > map.station_at(map.station_count() - 1)) {
    throw std::out_of_range("station outside map range");
  }
  if (lateral < map.lateral_range().min || lateral > map.lateral_range().max) {
    throw std::out_of_range("lateral outside map range");
  }
  std::size_t i = detail::nearest_index(station, map.station_step(),
                                        map.station_count(), "station");
  std::size_t j =
      detail::nearest_index(lateral - map.lateral_range().min,
                            map.lateral_step(), map.lateral_count(), "lateral");
  return map.at(i, j);
}

inline PenaltyValue apply_dynamic(const StaticSample& sample,
                                  const PenaltyValue& factor) {
  if (!factor.is_infinite() && factor.value() < 1.0) {
    throw ValidationError("apply_dynamic: factor must be >= 1");
  }
  return factor * sample.static_penalty;
}

inline nlohmann::json static_map_to_json(const StaticPenaltyMap& map) {
  using nlohmann::json;
  json root;
  root["schema_version"] = kMapSchemaVersion;
  root["segment_id"] = map.segment_id();
  root["ego_lane_id"] = map.ego_lane_id();
  root["station_step"] = map.station_step();
  root["lateral_step"] = map.lateral_step();
  root["lateral_range"] = {map.lateral_range().min, map.lateral_range().max};
  json columns = json::array();
  for (const auto& column : map.columns()) {
    json c;
    c["encroachment"] = detail::format_double(column.encroachment);
    if (column.governing_boundary) {
      c["governing_boundary"] = *column.governing_boundary;
    }
    columns.push_back(std::move(c));
  }
  root["columns"] = std::move(columns);
  json rows = json::array();
  for (std::size_t i = 0; i < map.station_count(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < map.lateral_count(); ++j) {
      row.push_back(map.cells()[i * map.lateral_count() + j].to_string());
    }
    rows.push_back(std::move(row));
  }
  root["rows"] = std::move(rows);
  return root;
}

inline StaticPenaltyMap static_map_from_json(const nlohmann::json& root) {
  using nlohmann::json;
  detail::check_fields(root, "penalty map",
                       {"schema_version", "segment_id", "ego_lane_id",
                        "station_step", "lateral_step", "lateral_range",
                        "columns", "rows"});
  const json& version =
      detail::require_field(root, "penalty map", "schema_version");
  if (!version.is_number_integer() || version.get<int>() != kMapSchemaVersion) {
    throw ParseError("penalty map: unsupported schema_version (expected " +
                     std::to_string(kMapSchemaVersion) + ")");
  }
  std::string segment_id =
      detail::require_string(root, "penalty map", "segment_id");
  std::string ego_lane_id =
      detail::require_string(root, "penalty map", "ego_lane_id");
  double station_step =
      detail::require_number(root, "penalty map", "station_step");
  double lateral_step =
      detail::require_number(root, "penalty map", "lateral_step");
  const json& range_json =
      detail::require_field(root, "penalty map", "lateral_range");
  if (!range_json.is_array() || range_json.size() != 2) {
    throw ParseError("penalty map.lateral_range: expected [min, max]");
  }
  LateralRange range{detail::as_number(range_json[0], "lateral_range.min"),
                     detail::as_number(range_json[1], "lateral_range.max")};

  const json& columns_json =
      detail::require_field(root, "penalty map", "columns");
  if (!columns_json.is_array() || columns_json.empty()) {
    throw ParseError("penalty map.columns: expected a nonempty array");
  }
  std::vector<StaticPenaltyMap::Column> columns;
  columns.reserve(columns_json.size());
  for (const json& c : columns_json) {
    detail::check_fields(c, "penalty map column",
                         {"encroachment", "governing_boundary"});
    StaticPenaltyMap::Column column;
    const json& enc = detail::require_field(c, "penalty map column", "encroachment");
    if (!enc.is_string()) {
      throw ParseError("penalty map column.encroachment: expected a string");
    }
    column.encroachment =
        detail::parse_double(enc.get<std::string>(), "column encroachment");
    if (c.contains("governing_boundary")) {
      if (!c["governing_boundary"].is_string()) {
        throw ParseError("penalty map column.governing_boundary: expected a string");
      }
      column.governing_boundary = c["governing_boundary"].get<std::string>();
    }
    columns.push_back(std::move(column));
  }

  const json& rows = detail::require_field(root, "penalty map", "rows");
  if (!rows.is_array() || rows.empty()) {
    throw ParseError("penalty map.rows: expected a nonempty array");
  }
  std::vector<PenaltyValue> cells;
  cells.reserve(rows.size() * columns.size());
  for (const json& row : rows) {
    if (!row.is_array() || row.size() != columns.size()) {
      throw ParseError("penalty map row: length does not match columns");
    }
    for (const json& cell : row) {
      if (!cell.is_string()) {
        throw ParseError("penalty map cell: expected a string");
      }
      cells.push_back(PenaltyValue::parse(cell.get<std::string>()));
    }
  }

  return StaticPenaltyMap(std::move(segment_id), std::move(ego_lane_id),
                          station_step, lateral_step, range, rows.size(),
                          std::move(columns), std::move(cells));
}

inline void save_map(const StaticPenaltyMap& map, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << static_map_to_json(map).dump(1) << '\n';
}

inline StaticPenaltyMap load_map(const std::string& path) {
  return static_map_from_json(detail::load_json_file(path));
}

}  // namespace ldp
