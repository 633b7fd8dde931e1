#include <algorithm>
#include <stdexcept>
#include <string>

#include "vertiopt/baseline.hpp"
#include "vertiopt/optimizer.hpp"

namespace vertiopt {

Objectives Evaluator::evaluate(const Genome& genome) {
  if (genome.size() != site_count_) {
    throw ValidationError("genome has " + std::to_string(genome.size()) + " bits, expected " +
                          std::to_string(site_count_));
  }
  if (auto it = cache_.find(genome); it != cache_.end()) return it->second;
  const int f2 = popcount(genome);
  max_popcount_ = std::max(max_popcount_, f2);
  Objectives o;
  o.f2 = f2;
  if (f2 > 0) {
    try {
      o.f1 = demand(genome);
    } catch (const ValidationError& e) {
      throw ValidationError("evaluating genome " + genome_to_string(genome) + ": " + e.what());
    } catch (const std::exception& e) {
      throw std::runtime_error("evaluating genome " + genome_to_string(genome) + ": " + e.what());
    }
  }
  cache_.emplace(genome, o);
  return o;
}

SimulationEvaluator::SimulationEvaluator(const Scenario& scenario, SimConfig config,
                                         std::uint64_t seed, int replications)
    : Evaluator(scenario.candidate_sites.size()),
      scenario_(scenario),
      config_(std::move(config)),
      seed_(seed),
      replications_(replications) {
  if (replications_ < 1) throw ValidationError("replications must be >= 1");
  config_.validate();
  initial_plans_ = build_initial_plans(scenario_, config_);
}

EquilibriumResult SimulationEvaluator::simulate(const Genome& genome, int replication) const {
  const std::uint64_t seed =
      replication == 0 ? seed_ : mix_seed(seed_, static_cast<std::uint64_t>(replication));
  const std::vector<SiteId> active = active_sites(genome);
  return run_inner_loop(scenario_, active, config_, seed, &initial_plans_);
}

double SimulationEvaluator::demand(const Genome& genome) {
  double total = 0.0;
  for (int r = 0; r < replications_; ++r) {
    const EquilibriumResult eq = simulate(genome, r);
    for (const AuditReport& a : eq.audits) {
      ++audited_iterations_;
      if (!a.ok()) audit_failures_.push_back(genome_to_string(genome) + ": " + a.detail);
    }
    for (const auto& [site, d] : eq.station_demand) total += static_cast<double>(d);
  }
  return total / replications_;
}

CoverageEvaluator::CoverageEvaluator(std::vector<Coord> sites, std::vector<Coord> homes, double radius)
    : Evaluator(sites.size()), covers_(cover_sets(sites, homes, radius)), home_count_(homes.size()) {
  if (!(radius > 0.0)) throw ValidationError("covering distance must be > 0");
}

double CoverageEvaluator::demand(const Genome& genome) {
  std::vector<bool> covered(home_count_, false);
  std::int64_t count = 0;
  for (std::size_t j = 0; j < genome.size(); ++j) {
    if (!genome[j]) continue;
    for (std::uint32_t h : covers_[j]) {
      if (!covered[h]) {
        covered[h] = true;
        ++count;
      }
    }
  }
  return static_cast<double>(count);
}

}  // namespace vertiopt
