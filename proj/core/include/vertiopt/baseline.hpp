#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vertiopt/geometry.hpp"
#include "vertiopt/optimizer.hpp"
#include "vertiopt/scenario.hpp"

namespace vertiopt {

struct CoverageInstance {
  std::vector<Coord> sites;
  std::vector<Coord> homes;
  double covering_distance = 10000.0;
  int p = 0;

  void validate() const;
};

// Candidate sites and agent homes of a scenario.
CoverageInstance coverage_instance(const Scenario& scenario, int p,
                                   double covering_distance = 10000.0);

// Per site, the indices of homes within `radius` (inclusive), ascending.
std::vector<std::vector<std::uint32_t>> cover_sets(std::span<const Coord> sites,
                                                   std::span<const Coord> homes, double radius);

// Homes within radius of at least one selected site.
std::int64_t coverage(std::span<const SiteId> selected, std::span<const Coord> sites,
                      std::span<const Coord> homes, double radius);

struct GreedyCover {
  std::vector<SiteId> order;        // selection order
  std::vector<std::int64_t> gains;  // newly covered homes per pick
  std::int64_t covered = 0;
};

// Adds the site covering most uncovered homes (ties to the lowest id) until
// p sites are open.
GreedyCover greedy_max_cover(const CoverageInstance& instance);

Genome hcm_solution_to_genome(std::span<const SiteId> selected, std::size_t site_count);

}  // namespace vertiopt
