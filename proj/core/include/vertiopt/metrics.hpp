#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vertiopt/optimizer.hpp"
#include "vertiopt/simulator.hpp"

namespace vertiopt {

// Last-iteration total distance minus first-iteration total distance (m).
double ptds(const std::vector<IterationStats>& stats);

// Percentage reduction of total travel time relative to the reference run.
double ttts(double total_time_with_uam, double total_time_without);

double normalize_demand(double f1, double f1_max);

struct MethodResult {
  std::string name;
  Genome genome;
  double demand = 0.0;
  double demand_percent = 0.0;  // of f1_max
  double ttts_percent = 0.0;
  int ports = 0;
  double total_travel_time = 0.0;  // s, last iteration
  std::map<SiteId, std::int64_t> station_demand;
};

struct ComparisonReport {
  MethodResult ab_ndp;
  MethodResult hcm;
  double f1_max = 0.0;
  double no_uam_travel_time = 0.0;
  std::uint64_t seed = 0;
  std::string sim_config_hash;
  std::string scenario_hash;
  std::vector<AuditReport> audits;  // every audited iteration, with config.audit
};

// Three paired inner-loop runs with one seed: no uam, the AB-NDP genome and
// the HCM genome. f1_max defaults to the larger of the two demands.
ComparisonReport build_comparison(const Scenario& scenario, const Genome& ab_genome,
                                  const Genome& hcm_genome, const SimConfig& config,
                                  std::uint64_t seed, std::optional<double> f1_max = std::nullopt,
                                  const std::vector<Plan>* initial_plans = nullptr);

// Rows ab_ndp and hcm; columns method,demand_percent,ttts_percent,ports.
void write_comparison_csv(std::ostream& out, const ComparisonReport& report);
std::string comparison_json(const ComparisonReport& report);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

}  // namespace vertiopt
