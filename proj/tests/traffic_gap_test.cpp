#include "ldp/traffic_gap.hpp"

#include <algorithm>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ldp/errors.hpp"
#include "ldp/penalty_core.hpp"

namespace ldp {
namespace {

constexpr double kOneMinusInvE = 0.63212055882855767840447622983854;
constexpr double kTwiceOneMinusInvE = 1.26424111765711535680895245967708;
constexpr double kCdfAtOneK5L2 = 0.03076676552365591815189080675365;

TEST(GapObservationTest, ClampsIntoLegalRange) {
  EXPECT_EQ(GapObservation(60.0, 50.0).gap_actual(), 50.0);
  EXPECT_EQ(GapObservation(-3.0, 50.0).gap_actual(), 0.0);
  EXPECT_EQ(GapObservation(35.0, 50.0).gap_actual(), 35.0);
}

TEST(GapObservationTest, RejectsBadInputs) {
  EXPECT_THROW(GapObservation(10.0, 0.0), ValidationError);
  EXPECT_THROW(GapObservation(10.0, -5.0), ValidationError);
  EXPECT_THROW(GapObservation(std::nan(""), 50.0), ValidationError);
}

TEST(ObserveGapTest, EmptyLaneLeavesMaximumGap) {
  EXPECT_EQ(observe_gap(95.0, 100.0, {}, 50.0).gap_actual(), 50.0);
}

TEST(ObserveGapTest, BoundedByNearestTracksFrontAndRear) {
  std::vector<AdjacentTrack> tracks = {
      {"lane", 80.0, 85.0, 30.0},
      {"lane", 120.0, 124.0, 30.0},
  };
  EXPECT_EQ(observe_gap(95.0, 100.0, tracks, 50.0).gap_actual(), 35.0);
}

TEST(ObserveGapTest, OverlappingTrackClosesTheGap) {
  std::vector<AdjacentTrack> tracks = {{"lane", 98.0, 103.0, 30.0}};
  EXPECT_EQ(observe_gap(95.0, 100.0, tracks, 50.0).gap_actual(), 0.0);
}

TEST(ObserveGapTest, TouchingTrackCountsAsAhead) {
  std::vector<AdjacentTrack> tracks = {{"lane", 100.0, 104.0, 30.0},
                                       {"lane", 90.0, 95.0, 30.0}};
  EXPECT_EQ(observe_gap(95.0, 100.0, tracks, 50.0).gap_actual(), 5.0);
}

TEST(ObserveGapTest, OneSidedTrafficLeavesGapUnbounded) {
  std::vector<AdjacentTrack> ahead_only = {{"lane", 120.0, 124.0, 30.0}};
  EXPECT_EQ(observe_gap(95.0, 100.0, ahead_only, 50.0).gap_actual(), 50.0);
  std::vector<AdjacentTrack> behind_only = {{"lane", 60.0, 70.0, 30.0}};
  EXPECT_EQ(observe_gap(95.0, 100.0, behind_only, 50.0).gap_actual(), 50.0);
}

TEST(ObserveGapTest, InvariantUnderReorderingAndOuterTracks) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> pos(0.0, 200.0);
  std::uniform_real_distribution<double> len(2.0, 8.0);
  for (int trial = 0; trial < 100; ++trial) {
    double ego_rear = pos(rng);
    double ego_front = ego_rear + 5.0;
    std::vector<AdjacentTrack> tracks;
    for (int i = 0; i < 6; ++i) {
      double rear = pos(rng);
      tracks.push_back({"lane", rear, rear + len(rng), 0.0});
    }
    double baseline =
        observe_gap(ego_rear, ego_front, tracks, 50.0).gap_actual();

    std::shuffle(tracks.begin(), tracks.end(), rng);
    EXPECT_EQ(observe_gap(ego_rear, ego_front, tracks, 50.0).gap_actual(),
              baseline);

    // Tracks strictly outside the bounding pair change nothing.
    std::vector<AdjacentTrack> padded = tracks;
    padded.push_back({"lane", -500.0, -490.0, 0.0});
    padded.push_back({"lane", 900.0, 905.0, 0.0});
    EXPECT_EQ(observe_gap(ego_rear, ego_front, padded, 50.0).gap_actual(),
              baseline);
  }
}

TEST(ObserveGapTest, RejectsIllFormedInputs) {
  std::vector<AdjacentTrack> inverted = {{"lane", 100.0, 90.0, 30.0}};
  EXPECT_THROW(observe_gap(95.0, 100.0, inverted, 50.0), ValidationError);
  std::vector<AdjacentTrack> mixed = {{"a", 80.0, 85.0, 30.0},
                                      {"b", 120.0, 124.0, 30.0}};
  EXPECT_THROW(observe_gap(95.0, 100.0, mixed, 50.0), ValidationError);
  EXPECT_THROW(observe_gap(100.0, 95.0, {}, 50.0), ValidationError);
}

TEST(GapFactorTest, UnityAtTheMaximumGap) {
  EXPECT_EQ(gap_factor(GapObservation(50.0, 50.0)).value(), 1.0);
}

TEST(GapFactorTest, DoublesAtHalfTheGap) {
  EXPECT_EQ(gap_factor(GapObservation(25.0, 50.0)).value(), 2.0);
}

TEST(GapFactorTest, InfiniteAtZeroGap) {
  EXPECT_TRUE(gap_factor(GapObservation(0.0, 50.0)).is_infinite());
}

TEST(GapFactorTest, NonincreasingInActualGap) {
  double previous = gap_factor(GapObservation(0.5, 50.0)).value();
  for (double gap = 1.0; gap <= 50.0; gap += 0.5) {
    double factor = gap_factor(GapObservation(gap, 50.0)).value();
    EXPECT_LE(factor, previous);
    EXPECT_GE(factor, 1.0);
    previous = factor;
  }
}

TEST(TotalPenaltyTest, ZeroEncroachmentCostsNothingEvenBesideClosedLane) {
  PenaltyContext ctx{35.0, BoundaryKind::kInner, 300.0, 300.0};
  GapObservation closed(0.0, 50.0);
  EXPECT_EQ(total_penalty(0.0, ctx, closed).value(), 0.0);
  EXPECT_TRUE(total_penalty(0.5, ctx, closed).is_infinite());
}

TEST(TotalPenaltyTest, InnerBoundaryDoublesAtHalfGap) {
  PenaltyContext ctx{35.0, BoundaryKind::kInner, 300.0, 300.0};
  GapObservation half(25.0, 50.0);
  EXPECT_NEAR(total_penalty(1.0, ctx, half).value(), kTwiceOneMinusInvE, 1e-12);
}

TEST(TotalPenaltyTest, OuterBoundaryAtFullGapIsTheBasePenalty) {
  PenaltyContext ctx{35.0, BoundaryKind::kOuter, 300.0, 300.0};
  GapObservation full(50.0, 50.0);
  EXPECT_NEAR(total_penalty(1.0, ctx, full).value(), kCdfAtOneK5L2, 1e-12);
  EXPECT_NEAR(base_penalty(1.0, 35.0, BoundaryKind::kInner).value(),
              kOneMinusInvE, 1e-12);
}

TEST(TotalPenaltyTest, HalvingTheGapExactlyDoublesThePenalty) {
  std::mt19937_64 rng(515151);
  std::uniform_real_distribution<double> x_dist(0.01, 3.0);
  std::uniform_real_distribution<double> gap_dist(0.5, 25.0);
  std::uniform_real_distribution<double> v_dist(5.0, 35.0);
  std::uniform_real_distribution<double> r_dist(100.0, 800.0);
  for (int i = 0; i < 50; ++i) {
    PenaltyContext ctx{v_dist(rng),
                       i % 2 == 0 ? BoundaryKind::kInner : BoundaryKind::kOuter,
                       r_dist(rng), r_dist(rng)};
    double gap = gap_dist(rng);
    double x = x_dist(rng);
    PenaltyValue whole = total_penalty(x, ctx, GapObservation(gap, 50.0));
    PenaltyValue halved = total_penalty(x, ctx, GapObservation(gap / 2.0, 50.0));
    EXPECT_EQ(halved.value(), 2.0 * whole.value());
  }
}

TEST(TotalPenaltyTest, NeverBelowTheCurvaturePenalty) {
  std::mt19937_64 rng(616161);
  std::uniform_real_distribution<double> x_dist(0.0, 3.0);
  std::uniform_real_distribution<double> gap_dist(0.0, 50.0);
  PenaltyContext ctx{20.0, BoundaryKind::kInner, 400.0, 300.0};
  for (int i = 0; i < 300; ++i) {
    double x = x_dist(rng);
    GapObservation obs(gap_dist(rng), 50.0);
    EXPECT_GE(total_penalty(x, ctx, obs), penalty_with_curvature(x, ctx));
  }
}

}  // namespace
}  // namespace ldp
