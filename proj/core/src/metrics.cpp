#include "vertiopt/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "vertiopt/config.hpp"
#include "vertiopt/exports.hpp"

namespace vertiopt {

double ptds(const std::vector<IterationStats>& stats) {
  if (stats.size() < 2) throw ValidationError("ptds needs at least two iterations");
  return stats.back().total_travel_distance - stats.front().total_travel_distance;
}

double ttts(double total_time_with_uam, double total_time_without) {
  if (!(total_time_without > 0.0)) throw ValidationError("ttts reference travel time must be > 0");
  return 100.0 * (total_time_without - total_time_with_uam) / total_time_without;
}

double normalize_demand(double f1, double f1_max) {
  if (!(f1_max > 0.0)) throw ValidationError("f1_max must be > 0");
  return f1 / f1_max;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

ComparisonReport build_comparison(const Scenario& scenario, const Genome& ab_genome,
                                  const Genome& hcm_genome, const SimConfig& config,
                                  std::uint64_t seed, std::optional<double> f1_max,
                                  const std::vector<Plan>* initial_plans) {
  const std::size_t n = scenario.candidate_sites.size();
  if (ab_genome.size() != n || hcm_genome.size() != n) {
    throw ValidationError("comparison genomes must have one bit per candidate site");
  }
  std::vector<Plan> own_initial;
  if (!initial_plans) {
    own_initial = build_initial_plans(scenario, config);
    initial_plans = &own_initial;
  }
  const EquilibriumResult base = run_inner_loop(scenario, {}, config, seed, initial_plans);

  ComparisonReport report;
  report.seed = seed;
  report.audits = base.audits;
  report.no_uam_travel_time = base.stats.back().total_travel_time;
  report.sim_config_hash = hex64(fnv1a64(sim_config_to_json(config)));
  report.scenario_hash = hex64(fnv1a64(scenario_to_json(scenario)));

  auto run = [&](const std::string& name, const Genome& g) {
    MethodResult m;
    m.name = name;
    m.genome = g;
    m.ports = popcount(g);
    const std::vector<SiteId> active = active_sites(g);
    const EquilibriumResult eq =
        active.empty() ? base : run_inner_loop(scenario, active, config, seed, initial_plans);
    if (!active.empty()) report.audits.insert(report.audits.end(), eq.audits.begin(), eq.audits.end());
    m.station_demand = eq.station_demand;
    for (const auto& [site, d] : eq.station_demand) m.demand += static_cast<double>(d);
    m.total_travel_time = eq.stats.back().total_travel_time;
    m.ttts_percent = ttts(m.total_travel_time, report.no_uam_travel_time);
    return m;
  };
  report.ab_ndp = run("ab_ndp", ab_genome);
  if (hcm_genome == ab_genome) {
    report.hcm = report.ab_ndp;
    report.hcm.name = "hcm";
  } else {
    report.hcm = run("hcm", hcm_genome);
  }
  report.f1_max = f1_max.value_or(std::max(report.ab_ndp.demand, report.hcm.demand));
  for (MethodResult* m : {&report.ab_ndp, &report.hcm}) {
    m->demand_percent = report.f1_max > 0.0 ? 100.0 * normalize_demand(m->demand, report.f1_max) : 0.0;
  }
  return report;
}

void write_comparison_csv(std::ostream& out, const ComparisonReport& report) {
  out << "method,demand_percent,ttts_percent,ports\n";
  for (const MethodResult* m : {&report.ab_ndp, &report.hcm}) {
    out << m->name << ',' << format_number(m->demand_percent) << ',' << format_number(m->ttts_percent)
        << ',' << m->ports << '\n';
  }
}

std::string comparison_json(const ComparisonReport& report) {
  using nlohmann::json;
  auto method = [](const MethodResult& m) {
    json demand = json::object();
    for (const auto& [site, d] : m.station_demand) demand[std::to_string(site)] = d;
    return json{{"genome", genome_to_string(m.genome)},
                {"demand", m.demand},
                {"demand_percent", m.demand_percent},
                {"ttts_percent", m.ttts_percent},
                {"ports", m.ports},
                {"total_travel_time_s", m.total_travel_time},
                {"station_demand", demand}};
  };
  json doc = {{"ab_ndp", method(report.ab_ndp)},
              {"hcm", method(report.hcm)},
              {"f1_max", report.f1_max},
              {"no_uam_total_travel_time_s", report.no_uam_travel_time},
              {"provenance",
               {{"seed", report.seed},
                {"sim_config_hash", report.sim_config_hash},
                {"scenario_hash", report.scenario_hash}}}};
  return doc.dump(2);
}

}  // namespace vertiopt
