// Command-line surface: static-map building, lateral penalty profiles, and
// scenario simulation. Exit codes: 0 success, 1 runtime failure (I/O),
// 2 usage or validation error.

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "ldp/cbf_filter.hpp"
#include "ldp/errors.hpp"
#include "ldp/penalty_map.hpp"
#include "ldp/road_model.hpp"
#include "ldp/simulator.hpp"

namespace {

bool debug_logging() {
  const char* level = std::getenv("LDP_LOG");
  return level != nullptr && std::string_view(level) == "debug";
}

void log_debug(const std::string& message) {
  if (debug_logging()) std::cerr << "[ldp] " << message << '\n';
}

int run_build_map(const std::string& map_path, const std::string& segment,
                  const std::string& lane, const std::string& out,
                  double station_step, double lateral_step) {
  ldp::RoadNetwork network = ldp::load_road_network(map_path);
  log_debug("loaded road network with " +
            std::to_string(network.segments.size()) + " segment(s)");
  ldp::StaticPenaltyMap map =
      ldp::build_static_map(network, segment, lane, station_step, lateral_step);
  ldp::save_map(map, out);
  log_debug("wrote map artifact to " + out);
  std::cout << "wrote " << out << " (" << map.station_count() << " stations x "
            << map.lateral_count() << " laterals)\n";
  return 0;
}

int run_profile(const std::string& map_path, const std::string& segment,
                const std::string& lane, double station, double gap_factor,
                double lateral_step, const std::string& out) {
  ldp::RoadNetwork network = ldp::load_road_network(map_path);
  std::vector<ldp::CrossSectionSample> samples =
      ldp::cross_section(network, segment, lane, station, gap_factor,
                         lateral_step);
  std::ofstream stream(out);
  if (!stream) throw std::runtime_error("cannot write '" + out + "'");
  stream << "lateral,p_vb,p_c,p_lg\n";
  for (const ldp::CrossSectionSample& s : samples) {
    stream << ldp::detail::format_g9(s.lateral) << ','
           << ldp::detail::format_g9(s.p_vb) << ','
           << ldp::detail::format_g9(s.p_c) << ','
           << ldp::detail::format_g9(s.p_lg) << '\n';
  }
  log_debug("wrote profile to " + out);
  std::cout << "wrote " << out << " (" << samples.size() << " samples)\n";
  return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& out,
                 const std::optional<double>& gap_max,
                 const std::optional<double>& alpha0,
                 const std::optional<double>& threshold) {
  ldp::Scenario scenario = ldp::load_scenario(scenario_path);
  if (gap_max) scenario.gap_max = *gap_max;
  if (alpha0) scenario.barrier.alpha0 = *alpha0;
  if (threshold) scenario.barrier.penalty_threshold = *threshold;
  ldp::validate(scenario);
  log_debug("running scenario on segment '" + scenario.segment_id + "'");

  std::vector<ldp::TraceRecord> trace = ldp::run(scenario);
  ldp::write_trace_csv(trace, out);

  std::vector<ldp::BarrierSample> samples;
  samples.reserve(trace.size());
  ldp::PenaltyValue max_penalty;
  for (const ldp::TraceRecord& record : trace) {
    samples.push_back(
        {{record.lateral, record.station, scenario.ego.speed.value_or(0.0)},
         record.h});
    max_penalty = std::max(max_penalty, record.penalty_total);
  }
  ldp::InvarianceReport report = ldp::check_invariance(samples);
  std::cout << "min_h=" << ldp::detail::format_g9(report.min_h)
            << " violations=" << report.violation_count
            << " max_penalty=" << ldp::detail::format_g9(max_penalty) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Localization deviation penalty toolkit"};
  app.require_subcommand(1);

  std::string map_path;
  std::string segment;
  std::string lane;
  std::string out;
  std::string scenario_path;
  double station = 0.0;
  double gap_factor = 1.0;
  double station_step = ldp::kDefaultStationStep;
  double lateral_step = ldp::kDefaultLateralStep;
  std::optional<double> gap_max_override;
  std::optional<double> alpha0_override;
  std::optional<double> threshold_override;

  CLI::App* build_map = app.add_subcommand(
      "build-map", "Precompute the static penalty grid for one ego lane");
  build_map->add_option("--map", map_path, "road network JSON file")->required();
  build_map->add_option("--segment", segment, "segment id")->required();
  build_map->add_option("--lane", lane, "ego lane id")->required();
  build_map->add_option("--out", out, "output map artifact path")->required();
  build_map->add_option("--station-step", station_step, "grid step along the road, meters");
  build_map->add_option("--lateral-step", lateral_step, "grid step across the road, meters");

  CLI::App* profile = app.add_subcommand(
      "profile", "Emit the lateral penalty cross-section at one station");
  profile->add_option("--map", map_path, "road network JSON file")->required();
  profile->add_option("--segment", segment, "segment id")->required();
  profile->add_option("--lane", lane, "ego lane id")->required();
  profile->add_option("--station", station, "station along the segment, meters")->required();
  profile->add_option("--gap-factor", gap_factor, "gap factor applied across inner boundaries (>= 1)");
  profile->add_option("--lateral-step", lateral_step, "sample step across the road, meters");
  profile->add_option("--out", out, "output CSV path")->required();

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run a lane-keeping scenario and write the trace CSV");
  simulate->add_option("--scenario", scenario_path, "scenario JSON file")->required();
  simulate->add_option("--out", out, "output trace CSV path")->required();
  simulate->add_option("--gap-max", gap_max_override, "override the scenario gap_max, meters");
  simulate->add_option("--alpha0", alpha0_override, "override the barrier gain, 1/s");
  simulate->add_option("--threshold", threshold_override, "override the penalty threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (build_map->parsed()) {
      return run_build_map(map_path, segment, lane, out, station_step,
                           lateral_step);
    }
    if (profile->parsed()) {
      return run_profile(map_path, segment, lane, station, gap_factor,
                         lateral_step, out);
    }
    return run_simulate(scenario_path, out, gap_max_override, alpha0_override,
                        threshold_override);
  } catch (const ldp::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ldp::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
