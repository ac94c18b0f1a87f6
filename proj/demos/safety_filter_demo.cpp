// Runs the bundled disturbance scenario twice, with the safety filter on
// and off, and prints the barrier floor each run reaches.

#include <cstdio>
#include <vector>

#include "ldp/cbf_filter.hpp"
#include "ldp/simulator.hpp"

#ifndef DEMO_DATA_DIR
#define DEMO_DATA_DIR "data"
#endif

namespace {

void report(const char* label, const std::vector<ldp::TraceRecord>& trace) {
  std::vector<ldp::BarrierSample> samples;
  samples.reserve(trace.size());
  ldp::PenaltyValue max_penalty;
  for (const ldp::TraceRecord& r : trace) {
    samples.push_back({{r.lateral, r.station, 0.0}, r.h});
    max_penalty = std::max(max_penalty, r.penalty_total);
  }
  ldp::InvarianceReport rep = ldp::check_invariance(samples);
  std::printf("%-10s min_h=%+.6f violations=%zu max_penalty=%s\n", label,
              rep.min_h, rep.violation_count, max_penalty.to_string().c_str());
}

}  // namespace

int main() {
  ldp::Scenario scenario =
      ldp::load_scenario(DEMO_DATA_DIR "/disturbance_scenario.json");

  report("filtered", ldp::run(scenario));

  scenario.filter_enabled = false;
  report("raw", ldp::run(scenario));
  return 0;
}
