#include "ldp/penalty_map.hpp"

#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "ldp/errors.hpp"
#include "ldp/penalty_core.hpp"
#include "ldp/road_model.hpp"

namespace ldp {
namespace {

RoadNetwork two_lane_network() {
  RoadNetwork network;
  RoadSegment segment;
  segment.id = "seg";
  segment.design_speed = 35.0;
  segment.length = 100.0;
  segment.lanes = {
      {"seg/left", 3.0, BoundaryKind::kOuter, BoundaryKind::kInner, 2.0},
      {"seg/ego", 3.0, BoundaryKind::kInner, BoundaryKind::kOuter, 2.0},
  };
  network.segments.push_back(segment);
  return network;
}

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + name;
}

TEST(BuildStaticMapTest, GridDimensionsCoverSegmentAndShoulders) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 1.0, 0.05);
  EXPECT_EQ(map.station_count(), 101u);
  EXPECT_EQ(map.lateral_count(), 201u);
  EXPECT_EQ(map.lateral_range().min, -5.0);
  EXPECT_EQ(map.lateral_range().max, 5.0);
  EXPECT_EQ(map.cells().size(), 101u * 201u);
}

TEST(BuildStaticMapTest, MatchesPointwiseEvaluationEverywhere) {
  RoadNetwork network = two_lane_network();
  const RoadSegment& segment = network.segments[0];
  StaticPenaltyMap map = build_static_map(network, "seg", "seg/ego", 5.0, 0.05);

  LaneBounds bounds = lane_bounds(segment, "seg/ego");
  double r_min = segment_min_radius(segment);
  for (std::size_t i = 0; i < map.station_count(); ++i) {
    for (std::size_t j = 0; j < map.lateral_count(); ++j) {
      double lateral = map.lateral_at(j);
      double encroachment = 0.0;
      BoundaryKind kind = BoundaryKind::kInner;
      if (lateral > bounds.left) {
        encroachment = lateral - bounds.left;
        kind = segment.lanes[1].left_boundary;
      } else if (lateral < bounds.right) {
        encroachment = bounds.right - lateral;
        kind = segment.lanes[1].right_boundary;
      }
      PenaltyContext ctx{segment.design_speed, kind, r_min, r_min};
      StaticSample sample = map.at(i, j);
      EXPECT_EQ(sample.static_penalty, penalty_with_curvature(encroachment, ctx))
          << "station " << i << " lateral " << lateral;
      EXPECT_EQ(sample.encroachment, encroachment);
    }
  }
}

TEST(BuildStaticMapTest, InLaneSamplesAreZeroWithNoGoverningBoundary) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 10.0, 0.05);
  for (std::size_t j = 0; j < map.lateral_count(); ++j) {
    double lateral = map.lateral_at(j);
    StaticSample sample = map.at(0, j);
    if (lateral >= -3.0 && lateral <= 0.0) {
      EXPECT_EQ(sample.static_penalty.value(), 0.0);
      EXPECT_EQ(sample.encroachment, 0.0);
      EXPECT_FALSE(sample.governing_boundary.has_value());
    } else {
      EXPECT_GT(sample.encroachment, 0.0);
      ASSERT_TRUE(sample.governing_boundary.has_value());
      EXPECT_EQ(*sample.governing_boundary,
                lateral > 0.0 ? "seg/ego/left" : "seg/ego/right");
    }
  }
}

TEST(BuildStaticMapTest, PenaltyGrowsAwayFromTheLaneOnEachSide) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 10.0, 0.05);
  PenaltyValue previous;
  for (std::size_t j = 0; j < map.lateral_count(); ++j) {
    if (map.lateral_at(j) < 0.0) continue;
    PenaltyValue penalty = map.at(0, j).static_penalty;
    EXPECT_GE(penalty, previous);
    previous = penalty;
  }
  previous = PenaltyValue();
  for (std::size_t j = map.lateral_count(); j-- > 0;) {
    if (map.lateral_at(j) > -3.0) continue;
    PenaltyValue penalty = map.at(0, j).static_penalty;
    EXPECT_GE(penalty, previous);
    previous = penalty;
  }
}

TEST(BuildStaticMapTest, CurvatureScalesMapsPointwise) {
  RoadNetwork straight = two_lane_network();
  RoadNetwork curved = two_lane_network();
  double r_min = segment_min_radius(straight.segments[0]);
  curved.segments[0].curvature_radius_actual = 2.0 * r_min;

  StaticPenaltyMap base = build_static_map(straight, "seg", "seg/ego", 10.0, 0.1);
  StaticPenaltyMap scaled = build_static_map(curved, "seg", "seg/ego", 10.0, 0.1);
  ASSERT_EQ(base.cells().size(), scaled.cells().size());
  for (std::size_t i = 0; i < base.cells().size(); ++i) {
    EXPECT_EQ(scaled.cells()[i].value(), 2.0 * base.cells()[i].value());
  }
}

TEST(BuildStaticMapTest, RejectsBadArguments) {
  RoadNetwork network = two_lane_network();
  EXPECT_THROW(build_static_map(network, "nope", "seg/ego"), ValidationError);
  EXPECT_THROW(build_static_map(network, "seg", "nope"), ValidationError);
  EXPECT_THROW(build_static_map(network, "seg", "seg/ego", 0.0, 0.05),
               ValidationError);
  EXPECT_THROW(build_static_map(network, "seg", "seg/ego", 1.0, -0.1),
               ValidationError);
  EXPECT_THROW(build_static_map(network, "seg", "seg/ego", 1.0, 3.5),
               ValidationError);
}

TEST(QueryStaticTest, SnapsToTheNearestNode) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 1.0, 0.05);
  StaticSample node = query_static(map, 50.0, 1.0);
  EXPECT_NEAR(node.encroachment, 1.0, 1e-9);

  StaticSample nearest = query_static(map, 50.4, 1.02);
  EXPECT_EQ(nearest.encroachment, node.encroachment);
}

TEST(NearestIndexTest, TiesResolveToTheSmallerIndex) {
  EXPECT_EQ(detail::nearest_index(0.5, 1.0, 101, "station"), 0u);
  EXPECT_EQ(detail::nearest_index(50.5, 1.0, 101, "station"), 50u);
  EXPECT_EQ(detail::nearest_index(50.500001, 1.0, 101, "station"), 51u);
  EXPECT_EQ(detail::nearest_index(100.4, 1.0, 101, "station"), 100u);
  EXPECT_THROW(detail::nearest_index(100.6, 1.0, 101, "station"),
               std::out_of_range);
  EXPECT_THROW(detail::nearest_index(-0.6, 1.0, 101, "station"),
               std::out_of_range);
}

TEST(QueryStaticTest, TieBetweenLateralNodesResolvesToSmallerIndex) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 10.0, 0.5);
  // Columns at ..., 0.5, 1.0, ...; 0.75 is equidistant.
  StaticSample tie = query_static(map, 0.0, 0.75);
  StaticSample lower = query_static(map, 0.0, 0.5);
  EXPECT_EQ(tie.encroachment, lower.encroachment);
}

TEST(QueryStaticTest, RejectsOutOfRangeQueries) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 1.0, 0.05);
  EXPECT_THROW(query_static(map, -1.0, 0.0), std::out_of_range);
  EXPECT_THROW(query_static(map, 101.0, 0.0), std::out_of_range);
  EXPECT_THROW(query_static(map, 50.0, 5.1), std::out_of_range);
  EXPECT_THROW(query_static(map, 50.0, -5.1), std::out_of_range);
}

TEST(ApplyDynamicTest, ScalesStaticPenalty) {
  StaticSample sample{PenaltyValue(0.632120558828557678), "seg/ego/left", 1.0};
  EXPECT_EQ(apply_dynamic(sample, PenaltyValue(1.0)), sample.static_penalty);
  EXPECT_NEAR(apply_dynamic(sample, PenaltyValue(2.0)).value(),
              1.264241117657115357, 1e-12);
}

TEST(ApplyDynamicTest, InfiniteFactorOnZeroStaysZero) {
  StaticSample in_lane{PenaltyValue(), std::nullopt, 0.0};
  EXPECT_EQ(apply_dynamic(in_lane, PenaltyValue::infinite()).value(), 0.0);
  StaticSample outside{PenaltyValue(0.25), "seg/ego/left", 0.5};
  EXPECT_TRUE(apply_dynamic(outside, PenaltyValue::infinite()).is_infinite());
}

TEST(ApplyDynamicTest, RejectsFactorBelowOne) {
  StaticSample sample{PenaltyValue(0.25), std::nullopt, 0.5};
  EXPECT_THROW(apply_dynamic(sample, PenaltyValue(0.5)), ValidationError);
}

TEST(MapSerializationTest, SaveLoadRoundTripsLosslessly) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 2.5, 0.05);
  std::string path = temp_path("map_round_trip.json");
  save_map(map, path);
  StaticPenaltyMap reloaded = load_map(path);
  EXPECT_EQ(map, reloaded);
}

TEST(MapSerializationTest, InfiniteCellsSurviveTheRoundTrip) {
  std::vector<StaticPenaltyMap::Column> columns = {
      {0.0, std::nullopt}, {0.5, "seg/ego/left"}};
  std::vector<PenaltyValue> cells = {PenaltyValue(), PenaltyValue::infinite(),
                                     PenaltyValue(0.125), PenaltyValue(1.0)};
  StaticPenaltyMap map("seg", "seg/ego", 1.0, 0.5, {-0.5, 0.0}, 2, columns,
                       cells);
  std::string path = temp_path("map_inf.json");
  save_map(map, path);
  StaticPenaltyMap reloaded = load_map(path);
  EXPECT_EQ(map, reloaded);
  EXPECT_TRUE(reloaded.cells()[1].is_infinite());
}

TEST(MapSerializationTest, RejectsEmptyGrid) {
  std::vector<StaticPenaltyMap::Column> no_columns;
  std::vector<PenaltyValue> no_cells;
  EXPECT_THROW(StaticPenaltyMap("seg", "seg/ego", 1.0, 0.5, {-1.0, 1.0}, 0,
                                no_columns, no_cells),
               ValidationError);
}

TEST(MapSerializationTest, RejectsWrongSchemaVersion) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 10.0, 0.5);
  nlohmann::json doc = static_map_to_json(map);
  doc["schema_version"] = 9;
  EXPECT_THROW(static_map_from_json(doc), ParseError);
}

TEST(MapSerializationTest, RejectsStructuralDamage) {
  StaticPenaltyMap map =
      build_static_map(two_lane_network(), "seg", "seg/ego", 10.0, 0.5);
  nlohmann::json doc = static_map_to_json(map);

  nlohmann::json extra = doc;
  extra["surprise"] = 1;
  EXPECT_THROW(static_map_from_json(extra), ParseError);

  nlohmann::json short_row = doc;
  short_row["rows"][0].erase(0);
  EXPECT_THROW(static_map_from_json(short_row), ParseError);

  nlohmann::json bad_cell = doc;
  bad_cell["rows"][0][0] = "-0.25";
  EXPECT_THROW(static_map_from_json(bad_cell), ParseError);

  nlohmann::json numeric_cell = doc;
  numeric_cell["rows"][0][0] = 0.25;
  EXPECT_THROW(static_map_from_json(numeric_cell), ParseError);
}

}  // namespace
}  // namespace ldp
