#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "vertiopt/network.hpp"
#include "vertiopt/plan.hpp"
#include "vertiopt/rng.hpp"
#include "vertiopt/scenario.hpp"

namespace vertiopt::testing {

// Bidirectional nx x ny road grid. With a seed, node positions are jittered
// by up to `jitter` * spacing, link lengths stretched by up to `detour` and
// freespeeds drawn from [0.5, 1] * freespeed.
inline Network grid_network(int nx, int ny, double spacing, double freespeed, double capacity,
                            std::uint64_t seed = 0, double jitter = 0.0, double detour = 0.0) {
  Rng rng(seed);
  std::vector<Node> nodes;
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      Coord c{x * spacing, y * spacing};
      if (seed != 0) {
        c.x += rng.uniform(-jitter, jitter) * spacing;
        c.y += rng.uniform(-jitter, jitter) * spacing;
      }
      nodes.push_back({static_cast<NodeId>(nodes.size()), c});
    }
  }
  std::vector<Link> links;
  auto add = [&](int a, int b) {
    const double straight = distance(nodes[a].coord, nodes[b].coord);
    for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
      Link l;
      l.id = static_cast<LinkId>(links.size());
      l.from = from;
      l.to = to;
      l.length = seed != 0 ? straight * (1.0 + rng.uniform(0.0, detour)) : straight;
      l.freespeed = seed != 0 ? freespeed * rng.uniform(0.5, 1.0) : freespeed;
      l.flow_capacity = capacity;
      l.allowed_modes = ModeSet{ModeTag::kCar};
      links.push_back(l);
    }
  };
  for (int y = 0; y < ny; ++y) {
    for (int x = 0; x < nx; ++x) {
      const int i = y * nx + x;
      if (x + 1 < nx) add(i, i + 1);
      if (y + 1 < ny) add(i, i + nx);
    }
  }
  return Network(std::move(nodes), std::move(links));
}

// A desk-sized generator config: two clusters, a handful of sites.
inline GeneratorConfig small_config(int agents = 200) {
  GeneratorConfig cfg;
  cfg.agents = agents;
  cfg.clusters = 2;
  cfg.region_width_km = 60.0;
  cfg.region_height_km = 40.0;
  cfg.candidate_sites = 6;
  return cfg;
}

inline Activity make_activity(const Network& net, ActivityKind kind, Coord where,
                              std::optional<double> end, double typical) {
  Activity a;
  a.kind = kind;
  a.location = where;
  a.link = net.nearest_link(where, ModeTag::kCar);
  a.end_time = end;
  a.typical_duration = typical;
  return a;
}

// Textbook Dijkstra over nodes; returns the least cost of a route that starts
// at the end of `origin` and finishes by traversing `dest`.
inline double dijkstra_route_cost(const Network& net, LinkId origin, LinkId dest,
                                  const std::function<double(const Link&)>& cost) {
  if (origin == dest) return 0.0;
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(net.node_count(), inf);
  using Item = std::pair<double, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const NodeId start = net.link(origin).to;
  best[static_cast<std::size_t>(start)] = 0.0;
  pq.push({0.0, start});
  while (!pq.empty()) {
    auto [d, n] = pq.top();
    pq.pop();
    if (d > best[static_cast<std::size_t>(n)]) continue;
    for (LinkId l : net.out_links(n)) {
      const Link& link = net.link(l);
      const double nd = d + cost(link);
      if (nd < best[static_cast<std::size_t>(link.to)]) {
        best[static_cast<std::size_t>(link.to)] = nd;
        pq.push({nd, link.to});
      }
    }
  }
  const Link& d = net.link(dest);
  return best[static_cast<std::size_t>(d.from)] + cost(d);
}

}  // namespace vertiopt::testing
