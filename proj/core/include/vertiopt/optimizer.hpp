#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vertiopt/rng.hpp"
#include "vertiopt/scenario.hpp"
#include "vertiopt/simulator.hpp"

namespace vertiopt {

// One bit per candidate site, in site-id order.
using Genome = std::vector<std::uint8_t>;

int popcount(const Genome& genome);
std::vector<SiteId> active_sites(const Genome& genome);
// "0110..." with bit j at position j.
std::string genome_to_string(const Genome& genome);
Genome genome_from_string(const std::string& bits);

// f1 is maximized, f2 minimized.
struct Objectives {
  double f1 = 0.0;  // UAM demand
  int f2 = 0;       // active vertiports

  friend bool operator==(const Objectives&, const Objectives&) = default;
};

// Both components minimized: (-f1, f2).
struct MinPoint {
  double a = 0.0;
  double b = 0.0;
};

inline MinPoint to_min(const Objectives& o) { return {-o.f1, static_cast<double>(o.f2)}; }

bool dominates(const MinPoint& p, const MinPoint& q);

// Fast non-dominated sort; fronts hold indices in ascending order.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const MinPoint> points);

// Crowding distance of each point of one front. Boundary points are +inf.
std::vector<double> crowding_distance(std::span<const MinPoint> front);

// Area dominated by the points w.r.t. the reference (f1 = 0, f2 = ref_f2).
double hypervolume(std::span<const Objectives> points, double ref_f2);

// Clears uniformly random set bits until popcount <= max_active, and sets one
// random bit in an empty genome. Feasible genomes are returned unchanged.
Genome repair(Genome genome, int max_active, Rng& rng);

// ------------------------------------------------------------- evaluators

// Memoizing genome evaluator. Subclasses supply the demand model.
class Evaluator {
 public:
  virtual ~Evaluator() = default;

  Objectives evaluate(const Genome& genome);
  std::size_t site_count() const { return site_count_; }
  std::size_t distinct_evaluations() const { return cache_.size(); }
  int max_popcount_seen() const { return max_popcount_; }
  const std::map<Genome, Objectives>& cache() const { return cache_; }

 protected:
  explicit Evaluator(std::size_t site_count) : site_count_(site_count) {}
  virtual double demand(const Genome& genome) = 0;

 private:
  std::size_t site_count_;
  std::map<Genome, Objectives> cache_;
  int max_popcount_ = 0;
};

// f1 = boarded uam legs at equilibrium of the inner loop. Every genome is
// simulated with the same seed; replication r > 0 uses mix_seed(seed, r) and
// f1 is the mean.
class SimulationEvaluator final : public Evaluator {
 public:
  SimulationEvaluator(const Scenario& scenario, SimConfig config, std::uint64_t seed,
                      int replications = 1);

  EquilibriumResult simulate(const Genome& genome, int replication = 0) const;
  const std::vector<Plan>& initial_plans() const { return initial_plans_; }
  // With config.audit: iterations audited so far, and the failures found.
  std::size_t audited_iterations() const { return audited_iterations_; }
  const std::vector<std::string>& audit_failures() const { return audit_failures_; }

 protected:
  double demand(const Genome& genome) override;

 private:
  const Scenario& scenario_;
  SimConfig config_;
  std::uint64_t seed_;
  int replications_;
  std::vector<Plan> initial_plans_;
  std::size_t audited_iterations_ = 0;
  std::vector<std::string> audit_failures_;
};

// f1 = homes within `radius` of an active site.
class CoverageEvaluator final : public Evaluator {
 public:
  CoverageEvaluator(std::vector<Coord> sites, std::vector<Coord> homes, double radius);

 protected:
  double demand(const Genome& genome) override;

 private:
  std::vector<std::vector<std::uint32_t>> covers_;  // per site, home indices
  std::size_t home_count_;
};

// ---------------------------------------------------------------- NSGA-II

struct NsgaConfig {
  int generations = 50;
  int population = 10;
  double crossover_rate = 0.9;
  // Per-bit flip probability; <= 0 means 1/|N|.
  double mutation_rate = 0.0;
  int tournament_size = 2;
  int max_active = 25;  // P
  std::uint64_t seed = 1;
  std::uint64_t evaluation_seed = 1;
  int replications = 1;

  void validate() const;
};

struct Individual {
  Genome genome;
  Objectives objectives;
  int rank = 0;
  double crowding = 0.0;
};

struct GenerationLog {
  int generation = 0;
  double best_f1 = 0.0;
  int min_f2 = 0;
  double hypervolume = 0.0;
};

struct FrontMember {
  Genome genome;
  double f1 = 0.0;
  int f2 = 0;
  double f1_normalized = 0.0;
};

struct ParetoFront {
  std::vector<FrontMember> members;  // by f2 ascending, then f1 descending
  std::size_t extreme_f1 = 0;        // max f1
  std::size_t extreme_f2 = 0;        // min f2
  std::size_t knee = 0;
  double f1_max = 0.0;
};

// Non-dominated subset of the candidates (duplicate genomes dropped) with
// extremes and knee. f1_max defaults to the largest f1 on the front.
ParetoFront build_front(std::span<const Individual> candidates,
                        std::optional<double> f1_max = std::nullopt);

// Index of the member farthest on the favourable side of the chord between
// the extremes, in objectives min-max normalized over the front. Fronts of
// at most two points, and ties, go to the larger f1.
std::size_t knee_point(std::span<const FrontMember> front);

struct NsgaResult {
  // Non-dominated set of every genome evaluated during the run.
  ParetoFront front;
  std::vector<Individual> population;
  // Generation 0 is the initial population. Values describe the front
  // found so far, so hypervolume never decreases.
  std::vector<GenerationLog> log;
  int max_popcount_evaluated = 0;
  std::size_t evaluations = 0;
};

using GenerationCallback = std::function<void(const GenerationLog&)>;

// Elitist (mu + lambda) NSGA-II over genomes of evaluator.site_count() bits.
NsgaResult run_nsga2(Evaluator& evaluator, const NsgaConfig& config,
                     const GenerationCallback& on_generation = {});

}  // namespace vertiopt
