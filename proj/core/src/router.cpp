#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include "vertiopt/router.hpp"

namespace vertiopt {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Link lengths may undercut the straight line by 1% (rounding allowance), so
// the straight-line bound is scaled to stay admissible.
constexpr double kHeuristicScale = 0.99;

struct QueueEntry {
  double f;
  double g;
  NodeId node;
  bool operator>(const QueueEntry& o) const {
    if (f != o.f) return f > o.f;
    return node > o.node;
  }
};

using MinQueue = std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<>>;

}  // namespace

double CostModel::cost(const Network& net, LinkId link, double enter_time) const {
  switch (kind_) {
    case Kind::kDistance: return net.link(link).length;
    case Kind::kFreespeedTime: return net.link(link).freespeed_time();
    case Kind::kTravelTime: return ttf_->link_time(link, enter_time);
  }
  return kInf;
}

double CostModel::time(const Network& net, LinkId link, double enter_time) const {
  if (kind_ == Kind::kTravelTime) return ttf_->link_time(link, enter_time);
  return net.link(link).freespeed_time();
}

double CostModel::lower_bound(const Network& net, double straight_line) const {
  const double d = kHeuristicScale * straight_line;
  if (kind_ == Kind::kDistance) return d;
  return d / net.max_freespeed();
}

UnreachableError::UnreachableError(LinkId origin, LinkId dest)
    : std::runtime_error("no route from link " + std::to_string(origin) + " to link " +
                         std::to_string(dest)),
      origin_(origin),
      dest_(dest) {}

Route route_astar(const Network& net, ModeTag mode, LinkId origin_link, LinkId dest_link,
                  double departure_time, const CostModel& cost) {
  Route route;
  if (origin_link == dest_link) return route;
  const Link& dest = net.link(dest_link);
  if (!net.link(origin_link).allowed_modes.contains(mode) || !dest.allowed_modes.contains(mode)) {
    throw UnreachableError(origin_link, dest_link);
  }
  const NodeId source = net.link(origin_link).to;
  const NodeId target = dest.from;
  const Coord goal = net.node(target).coord;

  const std::size_t n = net.node_count();
  std::vector<double> g(n, kInf);
  std::vector<double> clock(n, kInf);
  std::vector<LinkId> pred(n, -1);
  MinQueue open;
  auto heuristic = [&](NodeId v) { return cost.lower_bound(net, distance(net.node(v).coord, goal)); };

  g[static_cast<std::size_t>(source)] = 0.0;
  clock[static_cast<std::size_t>(source)] = 0.0;
  open.push({heuristic(source), 0.0, source});
  bool found = false;
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    const auto u = static_cast<std::size_t>(top.node);
    if (top.g > g[u]) continue;
    if (top.node == target) {
      found = true;
      break;
    }
    for (LinkId lid : net.out_links(top.node)) {
      const Link& l = net.link(lid);
      if (!l.allowed_modes.contains(mode)) continue;
      const double enter = departure_time + clock[u];
      const double ng = g[u] + cost.cost(net, lid, enter);
      const auto v = static_cast<std::size_t>(l.to);
      if (ng < g[v]) {
        g[v] = ng;
        clock[v] = clock[u] + cost.time(net, lid, enter);
        pred[v] = lid;
        open.push({ng + heuristic(l.to), ng, l.to});
      } else if (ng == g[v] && lid < pred[v]) {
        clock[v] = clock[u] + cost.time(net, lid, enter);
        pred[v] = lid;
      }
    }
  }
  if (!found) throw UnreachableError(origin_link, dest_link);

  for (NodeId at = target; at != source;) {
    const LinkId lid = pred[static_cast<std::size_t>(at)];
    route.links.push_back(lid);
    at = net.link(lid).from;
  }
  std::reverse(route.links.begin(), route.links.end());
  route.links.push_back(dest_link);

  double t = 0.0;
  double c = 0.0;
  for (LinkId lid : route.links) {
    route.distance += net.link(lid).length;
    c += cost.cost(net, lid, departure_time + t);
    t += cost.time(net, lid, departure_time + t);
  }
  route.travel_time = t;
  route.cost = c;
  return route;
}

NodeCosts node_costs(const Network& net, ModeTag mode, NodeId source,
                     const std::vector<double>& link_costs, bool reverse) {
  NodeCosts out;
  out.cost.assign(net.node_count(), kInf);
  out.distance.assign(net.node_count(), kInf);
  std::vector<double>& dist = out.cost;
  MinQueue open;
  dist[static_cast<std::size_t>(source)] = 0.0;
  out.distance[static_cast<std::size_t>(source)] = 0.0;
  open.push({0.0, 0.0, source});
  while (!open.empty()) {
    const QueueEntry top = open.top();
    open.pop();
    if (top.g > dist[static_cast<std::size_t>(top.node)]) continue;
    const auto& adjacent = reverse ? net.in_links(top.node) : net.out_links(top.node);
    for (LinkId lid : adjacent) {
      const Link& l = net.link(lid);
      if (!l.allowed_modes.contains(mode)) continue;
      const NodeId next = reverse ? l.from : l.to;
      const double nd = top.g + link_costs[static_cast<std::size_t>(lid)];
      if (nd < dist[static_cast<std::size_t>(next)]) {
        dist[static_cast<std::size_t>(next)] = nd;
        out.distance[static_cast<std::size_t>(next)] =
            out.distance[static_cast<std::size_t>(top.node)] + l.length;
        open.push({nd, nd, next});
      }
    }
  }
  return out;
}

TeleportResult teleport_leg(const Mode& mode, const Coord& origin, const Coord& dest) {
  if (mode.kind != ModeKind::kTeleported) {
    throw ValidationError("teleport_leg: mode '" + std::string(to_string(mode.tag)) +
                          "' is not teleported");
  }
  TeleportResult r;
  r.distance = distance(origin, dest) * mode.detour_factor;
  r.travel_time = r.distance / mode.teleport_speed;
  return r;
}

}  // namespace vertiopt
