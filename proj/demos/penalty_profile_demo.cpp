// Builds a two-lane road in code and prints the penalty layers across the
// ego lane: base speed/boundary penalty, curvature scaling, and the gap
// factor doubling the inner side.

#include <cstdio>

#include "ldp/penalty_core.hpp"
#include "ldp/road_model.hpp"
#include "ldp/simulator.hpp"
#include "ldp/traffic_gap.hpp"

int main() {
  ldp::RoadNetwork network;
  ldp::RoadSegment segment;
  segment.id = "demo";
  segment.design_speed = 35.0;
  segment.length = 500.0;
  segment.lanes = {
      {"demo/left", 3.0, ldp::BoundaryKind::kOuter, ldp::BoundaryKind::kInner, 2.0},
      {"demo/ego", 3.0, ldp::BoundaryKind::kInner, ldp::BoundaryKind::kOuter, 2.0},
  };
  network.segments.push_back(segment);
  ldp::validate(network);

  ldp::GapObservation half_gap(25.0, 50.0);
  std::printf("gap factor at half the maximum gap: %s\n",
              ldp::gap_factor(half_gap).to_string().c_str());

  std::printf("%8s %12s %12s %12s\n", "lateral", "p_vb", "p_c", "p_lg");
  for (const ldp::CrossSectionSample& s :
       ldp::cross_section(network, "demo", "demo/ego", 0.0,
                          ldp::gap_factor(half_gap).value(), 0.5)) {
    std::printf("%8.2f %12.6f %12.6f %12.6f\n", s.lateral, s.p_vb.value(),
                s.p_c.value(), s.p_lg.value());
  }

  ldp::WeibullParams params = ldp::params_for(35.0, ldp::BoundaryKind::kInner);
  std::printf("\nallowable error at threshold 0.5, factor 2: %.6f m\n",
              ldp::allowable_error(0.5, 2.0, params));
  return 0;
}
