#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vertiopt/simulator.hpp"

namespace vertiopt {

void SimConfig::validate() const {
  if (inner_iterations < 1) throw ValidationError("sim config: inner_iterations must be >= 1");
  if (!(replanning_share > 0.0 && replanning_share < 1.0)) {
    throw ValidationError("sim config: replanning_share must lie in (0, 1)");
  }
  const double sum = strategy.mode_mutation + strategy.time_mutation + strategy.reroute;
  if (strategy.mode_mutation < 0.0 || strategy.time_mutation < 0.0 || strategy.reroute < 0.0 ||
      std::abs(sum - 1.0) > 1e-9) {
    throw ValidationError("sim config: strategy weights must be non-negative and sum to 1");
  }
  if (memory_capacity < 1) throw ValidationError("sim config: memory_capacity must be >= 1");
  if (beta_best < 0.0 || beta_best > 1.0) throw ValidationError("sim config: beta_best outside [0, 1]");
  if (!(performing_utility > 0.0)) throw ValidationError("sim config: performing utility must be > 0");
  if (time_mutation_range < 0.0) throw ValidationError("sim config: negative time mutation range");
  if (!(ttf_bin > 0.0)) throw ValidationError("sim config: ttf_bin must be > 0");
  evtol.validate();
}

std::vector<Plan> build_initial_plans(const Scenario& scenario, const SimConfig& config) {
  const ScoringParams params = ScoringParams::from_modes(
      scenario.modes, config.performing_utility, config.uam_fare_per_km);
  const TravelTimeField freespeed(scenario.network, config.ttf_bin);
  const ReplanContext ctx{scenario, {}, freespeed, config};
  std::vector<Plan> plans;
  plans.reserve(scenario.agents.size());
  for (const Agent& agent : scenario.agents) {
    Plan plan;
    plan.activities = agent.activities;
    plan.legs.resize(plan.activities.size() - 1);
    for (std::size_t i = 0; i < plan.legs.size(); ++i) {
      const Activity& from = plan.activities[i];
      const Activity& to = plan.activities[i + 1];
      const double dep = planned_departure(plan, i);
      Leg best;
      double best_utility = -std::numeric_limits<double>::infinity();
      for (ModeTag mode : candidate_modes(agent, from, to, ctx)) {
        Leg leg;
        leg.mode = mode;
        leg.departure_time = dep;
        if (mode == ModeTag::kCar) {
          Route r = route_astar(scenario.network, mode, from.link, to.link, dep,
                                CostModel::distance());
          leg.route = std::move(r.links);
          leg.travel_time = r.travel_time;
          leg.distance = r.distance;
        } else {
          const TeleportResult r = teleport_leg(scenario.modes[mode], from.location, to.location);
          leg.travel_time = r.travel_time;
          leg.distance = r.distance;
        }
        // Time spent travelling is also time not spent performing.
        const double utility =
            params[mode].constant +
            (params[mode].travel_time - params.performing) * leg.travel_time / 3600.0;
        if (utility > best_utility) {
          best_utility = utility;
          best = std::move(leg);
        }
      }
      plan.legs[i] = std::move(best);
    }
    plans.push_back(std::move(plan));
  }
  return plans;
}

bool distance_saturated(const std::vector<IterationStats>& stats, std::size_t window,
                        double tolerance) {
  if (stats.size() <= window) return false;
  const double now = stats.back().total_travel_distance;
  const double then = stats[stats.size() - 1 - window].total_travel_distance;
  if (then <= 0.0) return now == then;
  return std::abs(now - then) / then < tolerance;
}

EquilibriumResult run_inner_loop(const Scenario& scenario, std::span<const SiteId> active_sites,
                                 const SimConfig& config, std::uint64_t seed,
                                 const std::vector<Plan>* initial_plans) {
  config.validate();
  std::vector<SiteId> active(active_sites.begin(), active_sites.end());
  std::sort(active.begin(), active.end());
  active.erase(std::unique(active.begin(), active.end()), active.end());
  for (SiteId s : active) {
    if (s < 0 || static_cast<std::size_t>(s) >= scenario.candidate_sites.size()) {
      throw ValidationError("active site " + std::to_string(s) + " is not a candidate site");
    }
  }
  const ScoringParams params = ScoringParams::from_modes(
      scenario.modes, config.performing_utility, config.uam_fare_per_km);

  const std::size_t n_agents = scenario.agents.size();
  std::vector<std::vector<Plan>> memory(n_agents);
  std::vector<std::size_t> selected(n_agents, 0);
  {
    std::vector<Plan> initial = initial_plans ? *initial_plans : build_initial_plans(scenario, config);
    if (initial.size() != n_agents) throw ValidationError("initial plans do not match the agents");
    for (std::size_t a = 0; a < n_agents; ++a) memory[a].push_back(std::move(initial[a]));
  }

  EquilibriumResult result;
  TravelTimeField ttf(scenario.network, config.ttf_bin);
  const auto capacity = static_cast<std::size_t>(config.memory_capacity);
  std::vector<Plan*> executed(n_agents, nullptr);

  for (int it = 0; it < config.inner_iterations; ++it) {
    const bool last = it + 1 == config.inner_iterations;
    if (it > 0) {
      const ReplanContext ctx{scenario, active, ttf, config};
      for (std::size_t a = 0; a < n_agents; ++a) {
        Rng rng(mix_seed(mix_seed(seed, static_cast<std::uint64_t>(it)), a));
        std::vector<Plan>& mem = memory[a];
        if (!last && rng.bernoulli(config.replanning_share)) {
          Plan fresh = replan(scenario.agents[a], mem[selected[a]], ctx, rng);
          mem.push_back(std::move(fresh));
          selected[a] = enforce_memory(mem, capacity, mem.size() - 1);
        } else {
          selected[a] = select_plan(mem, last ? 1.0 : config.beta_best, rng);
        }
      }
    }
    for (std::size_t a = 0; a < n_agents; ++a) executed[a] = &memory[a][selected[a]];

    const bool record = last || config.audit;
    MobsimResult sim = execute_mobsim(executed, scenario.network, scenario.modes, record);

    IterationStats st;
    st.iteration = it;
    double score_sum = 0.0;
    for (Plan* p : executed) {
      p->score = score_plan(*p, params);
      score_sum += *p->score;
      for (const Leg& leg : p->legs) {
        st.total_travel_time += leg.travel_time;
        st.total_travel_distance += leg.distance;
        if (leg.mode == ModeTag::kUam) ++st.uam_legs;
      }
    }
    st.mean_score = n_agents > 0 ? score_sum / static_cast<double>(n_agents) : 0.0;
    result.stats.push_back(st);

    if (config.audit) result.audits.push_back(audit_events(sim.events, scenario.network, n_agents, executed));
    if (last) {
      result.station_demand = count_station_demand(sim.events, active);
      result.uam_leg_count = st.uam_legs;
      int in_flight = 0;
      for (const Event& e : sim.events) {
        if (e.kind == EventKind::kUamBoard) {
          result.peak_concurrent_flights = std::max(result.peak_concurrent_flights, ++in_flight);
        } else if (e.kind == EventKind::kUamAlight) {
          --in_flight;
        }
      }
      const int seats = config.evtol.seats;
      result.vehicles_required = (result.peak_concurrent_flights + seats - 1) / seats;
      result.final_plans.reserve(n_agents);
      for (Plan* p : executed) result.final_plans.push_back(*p);
      result.events = std::move(sim.events);
    } else {
      ttf = TravelTimeField::from_traversals(scenario.network, sim.traversals, config.ttf_bin);
    }
  }
  result.distance_saturated = distance_saturated(result.stats);
  return result;
}

}  // namespace vertiopt
