#include <algorithm>
#include <cmath>
#include <limits>

#include "vertiopt/simulator.hpp"

namespace vertiopt {
namespace {

void reroute_all(Plan& plan, const Agent& agent, const ReplanContext& ctx) {
  for (std::size_t i = 0; i < plan.legs.size(); ++i) {
    const ModeTag mode = plan.legs[i].mode;
    if (mode == ModeTag::kCar || mode == ModeTag::kUam) {
      // A uam trip that no longer builds keeps its previous stations.
      assign_leg(plan, i, mode, agent, ctx);
    }
  }
}

}  // namespace

double planned_departure(const Plan& plan, std::size_t index) {
  double dep = plan.activities[index].end_time.value_or(0.0);
  if (index > 0) {
    const Leg& prev = plan.legs[index - 1];
    dep = std::max(dep, prev.departure_time + prev.travel_time);
  }
  return dep;
}

std::vector<ModeTag> candidate_modes(const Agent& agent, const Activity& from,
                                     const Activity& to, const ReplanContext& ctx) {
  const double crow = distance(from.location, to.location);
  std::vector<ModeTag> modes;
  if (agent.has_car) modes.push_back(ModeTag::kCar);
  if (crow <= ctx.config.walk_max_distance) modes.push_back(ModeTag::kWalk);
  if (crow <= ctx.config.bike_max_distance) modes.push_back(ModeTag::kBike);
  modes.push_back(ModeTag::kPt);
  if (!ctx.active_sites.empty()) modes.push_back(ModeTag::kUam);
  return modes;
}

bool assign_leg(Plan& plan, std::size_t index, ModeTag mode, const Agent& agent,
                const ReplanContext& ctx) {
  const Activity& from = plan.activities[index];
  const Activity& to = plan.activities[index + 1];
  const double dep = planned_departure(plan, index);
  const Scenario& sc = ctx.scenario;

  Leg leg;
  leg.mode = mode;
  leg.departure_time = dep;
  switch (sc.modes[mode].kind) {
    case ModeKind::kNetwork: {
      Route r = route_astar(sc.network, mode, from.link, to.link, dep,
                            CostModel::travel_time(ctx.ttf));
      leg.route = std::move(r.links);
      leg.travel_time = r.travel_time;
      leg.distance = r.distance;
      break;
    }
    case ModeKind::kTeleported: {
      const TeleportResult r = teleport_leg(sc.modes[mode], from.location, to.location);
      leg.travel_time = r.travel_time;
      leg.distance = r.distance;
      break;
    }
    case ModeKind::kUamComposite: {
      const UamContext uctx{sc, ctx.active_sites, ctx.config.evtol, &ctx.ttf};
      UamOutcome outcome = build_uam_trip(uctx, from, to, agent.has_car, dep);
      if (!std::holds_alternative<UamDetail>(outcome)) return false;
      leg.uam = std::get<UamDetail>(outcome);
      leg.travel_time = leg.uam->total_time();
      leg.distance = leg.uam->total_distance();
      break;
    }
  }
  plan.legs[index] = std::move(leg);
  return true;
}

Plan apply_strategy(Strategy strategy, const Agent& agent, const Plan& selected,
                    const ReplanContext& ctx, Rng& rng) {
  Plan plan = selected;
  plan.score.reset();
  auto fallback = [&] {
    Plan p = selected;
    p.score.reset();
    reroute_all(p, agent, ctx);
    return p;
  };

  switch (strategy) {
    case Strategy::kModeMutation: {
      if (plan.legs.empty()) return fallback();
      const auto trip = static_cast<std::size_t>(rng.below(plan.legs.size()));
      const std::vector<ModeTag> modes =
          candidate_modes(agent, plan.activities[trip], plan.activities[trip + 1], ctx);
      const ModeTag pick = modes[static_cast<std::size_t>(rng.below(modes.size()))];
      if (pick == plan.legs[trip].mode) return plan;
      if (!assign_leg(plan, trip, pick, agent, ctx)) return fallback();
      return plan;
    }
    case Strategy::kTimeMutation: {
      const std::size_t with_end = plan.activities.size() - 1;
      if (with_end == 0) return fallback();
      const auto act = static_cast<std::size_t>(rng.below(with_end));
      const auto range = static_cast<std::int64_t>(ctx.config.time_mutation_range);
      const double shift = static_cast<double>(rng.between(-range, range));
      plan.activities[act].end_time =
          std::clamp(plan.activities[act].end_time.value_or(0.0) + shift, 0.0, kSecondsPerDay);
      return plan;
    }
    case Strategy::kReroute:
      reroute_all(plan, agent, ctx);
      return plan;
  }
  return plan;
}

Plan replan(const Agent& agent, const Plan& selected, const ReplanContext& ctx, Rng& rng) {
  const StrategyWeights& w = ctx.config.strategy;
  const double u = rng.uniform() * (w.mode_mutation + w.time_mutation + w.reroute);
  Strategy s = Strategy::kReroute;
  if (u < w.mode_mutation) {
    s = Strategy::kModeMutation;
  } else if (u < w.mode_mutation + w.time_mutation) {
    s = Strategy::kTimeMutation;
  }
  return apply_strategy(s, agent, selected, ctx, rng);
}

std::size_t select_plan(std::span<const Plan> memory, double beta_best, Rng& rng) {
  for (std::size_t i = 0; i < memory.size(); ++i) {
    if (!memory[i].score) return i;
  }
  if (memory.size() <= 1) return 0;
  if (rng.uniform() < beta_best) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < memory.size(); ++i) {
      if (*memory[i].score > *memory[best].score) best = i;
    }
    return best;
  }
  return static_cast<std::size_t>(rng.below(memory.size()));
}

std::size_t enforce_memory(std::vector<Plan>& memory, std::size_t capacity, std::size_t keep) {
  while (memory.size() > capacity) {
    std::size_t best = memory.size();
    for (std::size_t i = 0; i < memory.size(); ++i) {
      if (!memory[i].score) continue;
      if (best == memory.size() || *memory[i].score > *memory[best].score) best = i;
    }
    std::size_t worst = memory.size();
    for (std::size_t i = 0; i < memory.size(); ++i) {
      if (!memory[i].score || i == best || i == keep) continue;
      if (worst == memory.size() || *memory[i].score <= *memory[worst].score) worst = i;
    }
    if (worst == memory.size()) break;
    memory.erase(memory.begin() + static_cast<std::ptrdiff_t>(worst));
    if (keep > worst) --keep;
  }
  return keep;
}

}  // namespace vertiopt
