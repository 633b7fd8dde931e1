#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "vertiopt/events.hpp"
#include "vertiopt/plan.hpp"
#include "vertiopt/rng.hpp"
#include "vertiopt/router.hpp"
#include "vertiopt/scenario.hpp"
#include "vertiopt/uam.hpp"

namespace vertiopt {

// ---------------------------------------------------------------- scoring

struct ModeUtility {
  double travel_time = 0.0;  // utils/hour, <= 0
  double constant = 0.0;     // utils
};

struct ScoringParams {
  double performing = 6.0;  // utils/hour, > 0
  std::array<ModeUtility, kModeCount> modes{};
  double uam_fare_per_km = -0.06;  // utils per flown km

  // Per-mode utilities copied from the scenario's mode table.
  static ScoringParams from_modes(const ModeTable& table, double performing,
                                  double uam_fare_per_km);
  const ModeUtility& operator[](ModeTag t) const { return modes[static_cast<std::size_t>(t)]; }
  void validate() const;
};

// Mode constant plus travel-time disutility, plus the fare for uam legs.
double leg_utility(const Leg& leg, const ScoringParams& params);

// Log-form activity utility plus linear leg disutility. The first and last
// home activities are scored as one overnight activity. Legs must carry
// executed times; a negative leg time throws ValidationError.
double score_plan(const Plan& plan, const ScoringParams& params);

// ----------------------------------------------------------------- config

struct StrategyWeights {
  double mode_mutation = 0.4;
  double time_mutation = 0.2;
  double reroute = 0.4;
};

struct SimConfig {
  int inner_iterations = 10;
  double replanning_share = 0.3;
  StrategyWeights strategy;
  int memory_capacity = 4;
  double beta_best = 0.8;
  double performing_utility = 6.0;
  double uam_fare_per_km = -0.06;
  double time_mutation_range = 1800.0;  // s, uniform +/- shift
  double walk_max_distance = 3000.0;    // crow-fly m for walk to be a choice
  double bike_max_distance = 10000.0;   // crow-fly m for bike to be a choice
  double ttf_bin = 900.0;
  EvtolParams evtol;
  // Check event conservation and per-link flow bounds on every iteration.
  bool audit = false;

  void validate() const;
};

// ----------------------------------------------------------------- mobsim

struct MobsimResult {
  std::vector<Event> events;  // empty unless recorded
  std::vector<TravelTimeField::Traversal> traversals;
};

// Event-driven point-queue simulation of one day. plans[i] belongs to agent
// i. Car vehicles spend at least length/freespeed on a link and leave it in
// FIFO order no closer than 3600/flow_capacity seconds apart, and never more
// than floor(flow_capacity) times in any half-open hour. Teleported and uam
// legs take their analytic times. Executed departure, time and distance are
// written back into the legs.
MobsimResult execute_mobsim(std::span<Plan* const> plans, const Network& network,
                            const ModeTable& modes, bool record_events = true);

struct AuditReport {
  bool conservation_ok = true;
  bool flow_bound_ok = true;
  std::string detail;

  bool ok() const { return conservation_ok && flow_bound_ok; }
};

// Per agent: departures match arrivals one to one, event times never go
// backwards and, given plans, the last arrival is on the last activity's
// link. Per link: link_leave count in every half-open hour window is at most
// max(1, floor(flow_capacity)).
AuditReport audit_events(const std::vector<Event>& events, const Network& network,
                         std::size_t agent_count, std::span<Plan* const> plans = {});

// ------------------------------------------------------------- replanning

enum class Strategy : std::uint8_t { kModeMutation, kTimeMutation, kReroute };

struct ReplanContext {
  const Scenario& scenario;
  std::span<const SiteId> active_sites;  // sorted, unique
  const TravelTimeField& ttf;
  const SimConfig& config;
};

// Expected departure of leg `index`: the planned end of the preceding
// activity, or the previous leg's arrival if that is later.
double planned_departure(const Plan& plan, std::size_t index);

// Modes an agent may choose for the trip from -> to, in tag order: car when
// owned, walk and bike within their distance limits, pt always, uam whenever
// stations are active (the trip builder still has to accept it).
std::vector<ModeTag> candidate_modes(const Agent& agent, const Activity& from,
                                     const Activity& to, const ReplanContext& ctx);

// Builds leg `index` of `plan` with `mode` departing at the planned end of
// the preceding activity. Car legs are routed by travel time under ctx.ttf.
// Returns false (leaving the leg untouched) when a uam trip is rejected.
bool assign_leg(Plan& plan, std::size_t index, ModeTag mode, const Agent& agent,
                const ReplanContext& ctx);

// Mutates a copy of `selected` with the given strategy. An infeasible
// mutation yields a reroute of `selected`. Result is unscored.
Plan apply_strategy(Strategy strategy, const Agent& agent, const Plan& selected,
                    const ReplanContext& ctx, Rng& rng);

// Draws a strategy by weight, then apply_strategy.
Plan replan(const Agent& agent, const Plan& selected, const ReplanContext& ctx, Rng& rng);

// Unscored plans first (lowest index); otherwise with probability beta_best
// the best score (ties to the lowest index), else uniform over memory.
std::size_t select_plan(std::span<const Plan> memory, double beta_best, Rng& rng);

// Removes plans beyond `capacity`, worst score first. Unscored plans and the
// best-scored plan are never removed. Returns the new index of `keep`.
std::size_t enforce_memory(std::vector<Plan>& memory, std::size_t capacity, std::size_t keep);

// ------------------------------------------------------------- inner loop

struct IterationStats {
  int iteration = 0;
  double total_travel_time = 0.0;      // s, all executed legs
  double total_travel_distance = 0.0;  // m, all executed legs
  double mean_score = 0.0;
  std::int64_t uam_legs = 0;
};

struct EquilibriumResult {
  std::vector<IterationStats> stats;
  std::map<SiteId, std::int64_t> station_demand;
  std::int64_t uam_leg_count = 0;
  std::vector<Plan> final_plans;  // executed in the last iteration, per agent
  std::vector<Event> events;      // last iteration
  std::vector<AuditReport> audits;  // per iteration when config.audit
  int peak_concurrent_flights = 0;
  int vehicles_required = 0;  // ceil(peak concurrent flights / seats)
  // Relative distance change below 1% over the last three iterations.
  bool distance_saturated = false;
};

// Iteration-0 plans: default modes (best free-flow utility among car, walk,
// bike and pt) with distance-shortest car routes. They depend only on the
// scenario and config, so callers evaluating many designs can build them once.
std::vector<Plan> build_initial_plans(const Scenario& scenario, const SimConfig& config);

// Co-evolutionary loop: select, execute, score, and (except in the last
// iteration) let a share of agents innovate. The last iteration executes
// every agent's best plan. Deterministic in (scenario, active, config, seed).
EquilibriumResult run_inner_loop(const Scenario& scenario, std::span<const SiteId> active_sites,
                                 const SimConfig& config, std::uint64_t seed,
                                 const std::vector<Plan>* initial_plans = nullptr);

// Relative change of total distance over the last `window` iterations < tol.
bool distance_saturated(const std::vector<IterationStats>& stats, std::size_t window = 3,
                        double tolerance = 0.01);

}  // namespace vertiopt
