#include "vertiopt/uam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vertiopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct SideCost {
  double time = kInf;
  double distance = 0.0;
  AccessMode mode = AccessMode::kWalk;
};

std::vector<double> snapshot_costs(const Network& net, const TravelTimeField* ttf, double t) {
  std::vector<double> costs(net.link_count());
  for (const Link& l : net.links()) {
    costs[static_cast<std::size_t>(l.id)] = ttf ? ttf->link_time(l.id, t) : l.freespeed_time();
  }
  return costs;
}

// Access (egress=false) or egress (egress=true) cost between `act` and every
// active station, in active-site order.
std::vector<SideCost> side_costs(const UamContext& ctx, const Activity& act, bool has_car,
                                 double when, bool egress) {
  const Scenario& sc = ctx.scenario;
  const Network& net = sc.network;
  const Mode& walk = sc.modes[ModeTag::kWalk];
  std::vector<SideCost> out(ctx.active_sites.size());

  std::vector<double> link_costs;
  NodeCosts tree;
  bool tree_ready = false;
  for (std::size_t i = 0; i < ctx.active_sites.size(); ++i) {
    const CandidateSite& site = sc.candidate_sites.sites[static_cast<std::size_t>(ctx.active_sites[i])];
    const double crow = distance(act.location, site.coord);
    SideCost c;
    if (has_car && crow > ctx.evtol.walk_access_radius) {
      if (!tree_ready) {
        link_costs = snapshot_costs(net, ctx.ttf, when);
        const NodeId root = egress ? net.link(act.link).from : net.link(act.link).to;
        tree = node_costs(net, ModeTag::kCar, root, link_costs, egress);
        tree_ready = true;
      }
      if (site.link == act.link) {
        c = {0.0, 0.0, AccessMode::kCar};
      } else if (!egress) {
        const Link& l = net.link(site.link);
        const auto from = static_cast<std::size_t>(l.from);
        c = {tree.cost[from] + link_costs[static_cast<std::size_t>(l.id)],
             tree.distance[from] + l.length, AccessMode::kCar};
      } else {
        const Link& end = net.link(act.link);
        const auto from = static_cast<std::size_t>(net.link(site.link).to);
        c = {tree.cost[from] + link_costs[static_cast<std::size_t>(end.id)],
             tree.distance[from] + end.length, AccessMode::kCar};
      }
      if (!std::isfinite(c.time)) c.time = kInf;
    }
    if (!std::isfinite(c.time)) {
      const TeleportResult w = teleport_leg(walk, act.location, site.coord);
      c = {w.travel_time, w.distance, AccessMode::kWalk};
    }
    out[i] = c;
  }
  return out;
}

std::size_t argmin_time(const std::vector<SideCost>& costs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < costs.size(); ++i) {
    if (costs[i].time < costs[best].time) best = i;
  }
  return best;
}

}  // namespace

void EvtolParams::validate() const {
  if (seats <= 0 || !(range > 0.0) || !(cruise_speed > 0.0) || !(process_time > 0.0) ||
      !(min_fly_distance > 0.0) || !(walk_access_radius > 0.0)) {
    throw ValidationError("eVTOL parameters must all be positive");
  }
}

std::string_view to_string(UamRejection r) {
  switch (r) {
    case UamRejection::kNoStations: return "no_stations";
    case UamRejection::kSameStation: return "same_station";
    case UamRejection::kTooShort: return "too_short";
    case UamRejection::kOutOfRange: return "range";
    case UamRejection::kDominated: return "dominated";
  }
  return "?";
}

double fly_time(const EvtolParams& evtol, double fly_distance) {
  return fly_distance / evtol.cruise_speed + 2.0 * evtol.process_time;
}

UamOutcome build_uam_trip(const UamContext& ctx, const Activity& from, const Activity& to,
                          bool agent_has_car, double departure_time) {
  if (ctx.active_sites.empty()) return UamRejection::kNoStations;
  const auto& sites = ctx.scenario.candidate_sites.sites;
  const EvtolParams& ev = ctx.evtol;

  const std::vector<SideCost> access = side_costs(ctx, from, agent_has_car, departure_time, false);
  // Egress congestion is read at a rough alighting time.
  const double egress_clock = departure_time + 2.0 * ev.process_time +
                              distance(from.location, to.location) / ev.cruise_speed;
  const std::vector<SideCost> egress = side_costs(ctx, to, agent_has_car, egress_clock, true);
  const double walk_all =
      teleport_leg(ctx.scenario.modes[ModeTag::kWalk], from.location, to.location).travel_time;

  auto station = [&](std::size_t i) { return sites[static_cast<std::size_t>(ctx.active_sites[i])]; };
  auto distance_rule = [&](std::size_t o, std::size_t d) -> std::optional<UamRejection> {
    if (o == d) return UamRejection::kSameStation;
    const double fly = distance(station(o).coord, station(d).coord);
    if (fly < ev.min_fly_distance) return UamRejection::kTooShort;
    if (fly > ev.range) return UamRejection::kOutOfRange;
    return std::nullopt;
  };
  auto make = [&](std::size_t o, std::size_t d) {
    UamDetail t;
    t.origin_station = ctx.active_sites[o];
    t.dest_station = ctx.active_sites[d];
    t.access_mode = access[o].mode;
    t.access_time = access[o].time;
    t.access_distance = access[o].distance;
    t.fly_distance = distance(station(o).coord, station(d).coord);
    t.fly_time = fly_time(ev, t.fly_distance);
    t.process_time = ev.process_time;
    t.egress_mode = egress[d].mode;
    t.egress_time = egress[d].time;
    t.egress_distance = egress[d].distance;
    return t;
  };

  const std::size_t o = argmin_time(access);
  const std::size_t d = argmin_time(egress);
  const std::optional<UamRejection> broken = distance_rule(o, d);
  if (!broken) {
    // The nearest pair has the least access + egress, so if it fails the
    // dominance guard every other pair does too.
    if (access[o].time + egress[d].time >= walk_all) return UamRejection::kDominated;
    return make(o, d);
  }

  double best = kInf;
  std::optional<std::pair<std::size_t, std::size_t>> pick;
  for (std::size_t i = 0; i < access.size(); ++i) {
    for (std::size_t j = 0; j < egress.size(); ++j) {
      if (distance_rule(i, j)) continue;
      if (access[i].time + egress[j].time >= walk_all) continue;
      const double total = access[i].time + egress[j].time +
                           fly_time(ev, distance(station(i).coord, station(j).coord));
      if (total < best) {
        best = total;
        pick = {i, j};
      }
    }
  }
  if (pick) return make(pick->first, pick->second);
  return *broken;
}

std::map<SiteId, std::int64_t> count_station_demand(const std::vector<Event>& events,
                                                    std::span<const SiteId> active_sites) {
  std::map<SiteId, std::int64_t> demand;
  for (const Event& e : events) {
    if (e.kind != EventKind::kUamBoard) continue;
    if (!std::binary_search(active_sites.begin(), active_sites.end(), e.where)) {
      throw IntegrityError("uam_board at inactive station " + std::to_string(e.where) +
                           " (agent " + std::to_string(e.agent) + ")");
    }
    ++demand[e.where];
  }
  return demand;
}

std::vector<std::pair<SiteId, SiteId>> feasible_station_pairs(const CandidateSites& sites,
                                                              std::span<const SiteId> active,
                                                              const EvtolParams& evtol) {
  std::vector<std::pair<SiteId, SiteId>> out;
  for (std::size_t i = 0; i < active.size(); ++i) {
    for (std::size_t j = i + 1; j < active.size(); ++j) {
      const double d = distance(sites.sites[static_cast<std::size_t>(active[i])].coord,
                                sites.sites[static_cast<std::size_t>(active[j])].coord);
      if (d >= evtol.min_fly_distance && d <= evtol.range) out.emplace_back(active[i], active[j]);
    }
  }
  return out;
}

}  // namespace vertiopt
