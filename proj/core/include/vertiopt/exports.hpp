#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "vertiopt/optimizer.hpp"
#include "vertiopt/scenario.hpp"
#include "vertiopt/simulator.hpp"

namespace vertiopt {

// Shortest decimal text that round-trips the value.
std::string format_number(double value);

// iteration,total_travel_time_s,total_travel_distance_m,mean_score,uam_legs
void write_stats_csv(std::ostream& out, const std::vector<IterationStats>& stats);
// site_id,demand
void write_demand_csv(std::ostream& out, const std::map<SiteId, std::int64_t>& demand);
// genome_bits,f1,f2,f1_normalized,is_extreme_f1,is_extreme_f2,is_knee
void write_front_csv(std::ostream& out, const ParetoFront& front);
// generation,best_f1,min_f2,hypervolume
void write_generation_log_csv(std::ostream& out, const std::vector<GenerationLog>& log);
// site_id,order,gain
void write_selection_csv(std::ostream& out, const std::vector<SiteId>& order,
                         const std::vector<std::int64_t>& gains);

// Candidate sites as points (with an `active` flag) plus one line per
// station pair the eVTOL can serve.
std::string network_geojson(const Scenario& scenario, const Genome& genome, const EvtolParams& evtol);

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool lines = false;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

// Self-contained SVG scatter/line chart.
std::string render_svg(const PlotSpec& plot);

struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::string config_path;
  std::map<std::string, std::uint64_t> seeds;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string scenario_hash;
  double wall_time_s = 0.0;
};

std::string manifest_json(const RunManifest& manifest);

// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace vertiopt
