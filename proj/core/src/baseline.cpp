#include "vertiopt/baseline.hpp"

#include <algorithm>
#include <string>

namespace vertiopt {

void CoverageInstance::validate() const {
  if (!(covering_distance > 0.0)) throw ValidationError("covering distance must be > 0");
  if (p < 0) throw ValidationError("p must be >= 0");
  if (static_cast<std::size_t>(p) > sites.size()) {
    throw ValidationError("p = " + std::to_string(p) + " exceeds the " +
                          std::to_string(sites.size()) + " candidate sites");
  }
}

CoverageInstance coverage_instance(const Scenario& scenario, int p, double covering_distance) {
  CoverageInstance inst;
  inst.covering_distance = covering_distance;
  inst.p = p;
  for (const CandidateSite& s : scenario.candidate_sites.sites) inst.sites.push_back(s.coord);
  for (const Agent& a : scenario.agents) inst.homes.push_back(a.home);
  return inst;
}

std::vector<std::vector<std::uint32_t>> cover_sets(std::span<const Coord> sites,
                                                   std::span<const Coord> homes, double radius) {
  const double r2 = radius * radius;
  std::vector<std::vector<std::uint32_t>> sets(sites.size());
  for (std::size_t s = 0; s < sites.size(); ++s) {
    for (std::size_t h = 0; h < homes.size(); ++h) {
      if (squared_distance(sites[s], homes[h]) <= r2) sets[s].push_back(static_cast<std::uint32_t>(h));
    }
  }
  return sets;
}

std::int64_t coverage(std::span<const SiteId> selected, std::span<const Coord> sites,
                      std::span<const Coord> homes, double radius) {
  const double r2 = radius * radius;
  std::int64_t covered = 0;
  for (SiteId s : selected) {
    if (s < 0 || static_cast<std::size_t>(s) >= sites.size()) {
      throw ValidationError("selected site " + std::to_string(s) + " is not a candidate site");
    }
  }
  for (const Coord& h : homes) {
    for (SiteId s : selected) {
      if (squared_distance(sites[static_cast<std::size_t>(s)], h) <= r2) {
        ++covered;
        break;
      }
    }
  }
  return covered;
}

GreedyCover greedy_max_cover(const CoverageInstance& instance) {
  instance.validate();
  const auto sets = cover_sets(instance.sites, instance.homes, instance.covering_distance);
  std::vector<bool> covered(instance.homes.size(), false);
  std::vector<bool> open(instance.sites.size(), false);
  GreedyCover out;
  for (int pick = 0; pick < instance.p; ++pick) {
    std::size_t best = instance.sites.size();
    std::int64_t best_gain = -1;
    for (std::size_t s = 0; s < instance.sites.size(); ++s) {
      if (open[s]) continue;
      std::int64_t gain = 0;
      for (std::uint32_t h : sets[s]) gain += covered[h] ? 0 : 1;
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    open[best] = true;
    for (std::uint32_t h : sets[best]) covered[h] = true;
    out.order.push_back(static_cast<SiteId>(best));
    out.gains.push_back(best_gain);
    out.covered += best_gain;
  }
  return out;
}

Genome hcm_solution_to_genome(std::span<const SiteId> selected, std::size_t site_count) {
  Genome g(site_count, 0);
  for (SiteId s : selected) {
    if (s < 0 || static_cast<std::size_t>(s) >= site_count) {
      throw ValidationError("selected site " + std::to_string(s) + " is not a candidate site");
    }
    g[static_cast<std::size_t>(s)] = 1;
  }
  return g;
}

}  // namespace vertiopt
