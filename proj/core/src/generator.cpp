#include <algorithm>
#include <cmath>
#include <string>

#include "vertiopt/rng.hpp"
#include "vertiopt/scenario.hpp"

namespace vertiopt {
namespace {

void check_config(const GeneratorConfig& cfg) {
  if (cfg.agents <= 0) throw ValidationError("generator: agent count must be positive");
  if (cfg.clusters < 1) throw ValidationError("generator: need at least one population cluster");
  if (!(cfg.region_width_km > 0.0) || !(cfg.region_height_km > 0.0)) {
    throw ValidationError("generator: region extent must be positive");
  }
  if (!(cfg.grid_spacing_m > 0.0) || cfg.grid_spacing_m * 2 > cfg.region_width_km * 1000.0 ||
      cfg.grid_spacing_m * 2 > cfg.region_height_km * 1000.0) {
    throw ValidationError("generator: grid spacing must leave at least a 3x3 road grid");
  }
  const auto cols = static_cast<long>(std::floor(cfg.region_width_km * 1000.0 /
                                                 cfg.min_cluster_separation_m));
  const auto rows = static_cast<long>(std::floor(cfg.region_height_km * 1000.0 /
                                                 cfg.min_cluster_separation_m));
  if (cols * rows < cfg.clusters) {
    throw ValidationError("generator: a " + std::to_string(cfg.region_width_km) + " x " +
                          std::to_string(cfg.region_height_km) + " km region cannot host " +
                          std::to_string(cfg.clusters) + " clusters " +
                          std::to_string(cfg.min_cluster_separation_m) + " m apart");
  }
  if (cfg.candidate_sites < 2) throw ValidationError("generator: need at least 2 candidate sites");
  if (cfg.capacity_scale <= 0.0 || cfg.local_capacity <= 0.0 || cfg.backbone_capacity <= 0.0) {
    throw ValidationError("generator: capacities must be positive");
  }
  if (!(cfg.road_freespeed > 0.0)) throw ValidationError("generator: freespeed must be positive");
  if (cfg.backbone_stride < 2) throw ValidationError("generator: backbone stride must be >= 2");
}

struct GridBuilder {
  std::vector<Node> nodes;
  std::vector<Link> links;

  void add_pair(NodeId a, NodeId b, double length, double speed, double capacity) {
    for (auto [from, to] : {std::pair{a, b}, std::pair{b, a}}) {
      Link l;
      l.id = static_cast<LinkId>(links.size());
      l.from = from;
      l.to = to;
      l.length = length;
      l.freespeed = speed;
      l.flow_capacity = capacity;
      l.allowed_modes = {ModeTag::kCar};
      links.push_back(l);
    }
  }
};

Network build_network(const GeneratorConfig& cfg, Rng& rng) {
  const double width = cfg.region_width_km * 1000.0;
  const double height = cfg.region_height_km * 1000.0;
  const double s = cfg.grid_spacing_m;
  const int cols = static_cast<int>(std::floor(width / s)) + 1;
  const int rows = static_cast<int>(std::floor(height / s)) + 1;
  const double local_cap = cfg.local_capacity * cfg.capacity_scale;
  const double backbone_cap = cfg.backbone_capacity * cfg.capacity_scale;

  GridBuilder g;
  auto id_of = [cols](int c, int r) { return static_cast<NodeId>(r * cols + c); };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double x = c * s + rng.uniform(-cfg.node_jitter, cfg.node_jitter) * s;
      double y = r * s + rng.uniform(-cfg.node_jitter, cfg.node_jitter) * s;
      x = std::clamp(x, 0.0, width);
      y = std::clamp(y, 0.0, height);
      g.nodes.push_back({id_of(c, r), {x, y}});
    }
  }
  auto road_length = [&](NodeId a, NodeId b, double max_detour) {
    const double straight = distance(g.nodes[static_cast<std::size_t>(a)].coord,
                                     g.nodes[static_cast<std::size_t>(b)].coord);
    return std::max(1.0, straight * (1.0 + rng.uniform(0.0, max_detour)));
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) {
        g.add_pair(id_of(c, r), id_of(c + 1, r), road_length(id_of(c, r), id_of(c + 1, r),
                                                             cfg.max_link_detour),
                   cfg.road_freespeed, local_cap);
      }
      if (r + 1 < rows) {
        g.add_pair(id_of(c, r), id_of(c, r + 1), road_length(id_of(c, r), id_of(c, r + 1),
                                                             cfg.max_link_detour),
                   cfg.road_freespeed, local_cap);
      }
    }
  }

  // Backbone: straight high-capacity links along the perimeter ring and the
  // middle row/column, each spanning `backbone_stride` grid cells.
  const int k = cfg.backbone_stride;
  auto backbone_line = [&](const std::vector<NodeId>& line, bool closed) {
    if (line.size() < 2) return;
    std::vector<NodeId> stops;
    for (std::size_t i = 0; i < line.size(); i += static_cast<std::size_t>(k)) {
      stops.push_back(line[i]);
    }
    if (!closed && stops.back() != line.back()) stops.push_back(line.back());
    for (std::size_t i = 0; i + 1 < stops.size(); ++i) {
      g.add_pair(stops[i], stops[i + 1], road_length(stops[i], stops[i + 1], 0.02),
                 cfg.road_freespeed, backbone_cap);
    }
    if (closed && stops.size() > 2) {
      g.add_pair(stops.back(), stops.front(), road_length(stops.back(), stops.front(), 0.02),
                 cfg.road_freespeed, backbone_cap);
    }
  };
  std::vector<NodeId> ring;
  for (int c = 0; c < cols; ++c) ring.push_back(id_of(c, 0));
  for (int r = 1; r < rows; ++r) ring.push_back(id_of(cols - 1, r));
  for (int c = cols - 2; c >= 0; --c) ring.push_back(id_of(c, rows - 1));
  for (int r = rows - 2; r >= 1; --r) ring.push_back(id_of(0, r));
  backbone_line(ring, true);
  std::vector<NodeId> middle_row;
  for (int c = 0; c < cols; ++c) middle_row.push_back(id_of(c, rows / 2));
  backbone_line(middle_row, false);
  std::vector<NodeId> middle_col;
  for (int r = 0; r < rows; ++r) middle_col.push_back(id_of(cols / 2, r));
  backbone_line(middle_col, false);

  return Network(std::move(g.nodes), std::move(g.links));
}

Coord clamp_to(const Network& net, Coord c) {
  return {std::clamp(c.x, net.min_corner().x, net.max_corner().x),
          std::clamp(c.y, net.min_corner().y, net.max_corner().y)};
}

std::size_t weighted_pick(Rng& rng, const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  for (std::size_t i = weights.size(); i > 0; --i) {
    if (weights[i - 1] > 0.0) return i - 1;
  }
  return 0;
}

}  // namespace

Scenario generate_scenario(const GeneratorConfig& cfg, std::uint64_t seed) {
  check_config(cfg);
  Rng net_rng(mix_seed(seed, 1));
  Rng pop_rng(mix_seed(seed, 2));

  Scenario sc;
  sc.seed = seed;
  sc.config = cfg;
  sc.network = build_network(cfg, net_rng);
  sc.modes = ModeTable::defaults();

  // Cluster centers occupy distinct cells of a separation-sized lattice, so any
  // two centers are at least half a separation apart.
  const double sep = cfg.min_cluster_separation_m;
  const int cell_cols = static_cast<int>(std::floor(cfg.region_width_km * 1000.0 / sep));
  const int cell_rows = static_cast<int>(std::floor(cfg.region_height_km * 1000.0 / sep));
  const double cell_w = cfg.region_width_km * 1000.0 / cell_cols;
  const double cell_h = cfg.region_height_km * 1000.0 / cell_rows;
  std::vector<int> cells(static_cast<std::size_t>(cell_cols * cell_rows));
  for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = static_cast<int>(i);
  pop_rng.shuffle(cells);
  std::vector<Coord> centers;
  std::vector<double> weights;
  for (int i = 0; i < cfg.clusters; ++i) {
    const int cell = cells[static_cast<std::size_t>(i)];
    const double cx = (cell % cell_cols + 0.5 + pop_rng.uniform(-0.25, 0.25)) * cell_w;
    const double cy = (cell / cell_cols + 0.5 + pop_rng.uniform(-0.25, 0.25)) * cell_h;
    centers.push_back(clamp_to(sc.network, {cx, cy}));
    weights.push_back(pop_rng.uniform(0.4, 1.6));
  }

  const double sigma = cfg.cluster_sigma_m;
  auto around = [&](const Coord& c, double sd) {
    return clamp_to(sc.network, {pop_rng.normal(c.x, sd), pop_rng.normal(c.y, sd)});
  };
  auto make_activity = [&](ActivityKind kind, Coord where, std::optional<double> end,
                           double typical) {
    Activity a;
    a.kind = kind;
    a.location = where;
    a.link = sc.network.nearest_link(where, ModeTag::kCar);
    a.end_time = end;
    a.typical_duration = typical;
    return a;
  };
  auto clamp_time = [](double t) { return std::clamp(std::round(t), 0.0, kSecondsPerDay); };

  sc.agents.reserve(static_cast<std::size_t>(cfg.agents));
  for (int i = 0; i < cfg.agents; ++i) {
    Agent agent;
    agent.id = i;
    const std::size_t home_cluster = weighted_pick(pop_rng, weights);
    agent.home = around(centers[home_cluster], sigma);
    agent.has_car = pop_rng.bernoulli(cfg.car_ownership);

    std::size_t primary_cluster = home_cluster;
    if (cfg.clusters > 1 && pop_rng.bernoulli(cfg.remote_primary_share)) {
      std::vector<double> others = weights;
      others[home_cluster] = 0.0;
      primary_cluster = weighted_pick(pop_rng, others);
    }
    const bool work = pop_rng.bernoulli(cfg.work_share);
    const ActivityKind primary_kind = work ? ActivityKind::kWork : ActivityKind::kEducation;
    const double primary_typical = work ? 8.0 * 3600.0 : 6.0 * 3600.0;
    const Coord primary_loc = around(centers[primary_cluster], sigma);

    const double home_end = clamp_time(
        std::clamp(pop_rng.normal(cfg.home_departure_mean_h, cfg.home_departure_sd_h), 5.0, 10.5) *
        3600.0);
    const double primary_end =
        clamp_time(home_end + 1800.0 + primary_typical + pop_rng.normal(0.0, 1800.0));

    agent.activities.push_back(
        make_activity(ActivityKind::kHome, agent.home, home_end, 12.0 * 3600.0));
    agent.activities.push_back(
        make_activity(primary_kind, primary_loc, primary_end, primary_typical));
    if (pop_rng.bernoulli(cfg.secondary_share)) {
      const bool leisure = pop_rng.bernoulli(cfg.leisure_share);
      const double typical = leisure ? 2.0 * 3600.0 : 3600.0;
      const Coord anchor = pop_rng.bernoulli(0.5) ? primary_loc : agent.home;
      const Coord loc = around(anchor, 3000.0);
      const double end = clamp_time(primary_end + 1200.0 + typical);
      agent.activities.push_back(make_activity(
          leisure ? ActivityKind::kLeisure : ActivityKind::kShop, loc, end, typical));
    }
    agent.activities.push_back(
        make_activity(ActivityKind::kHome, agent.home, std::nullopt, 12.0 * 3600.0));
    sc.agents.push_back(std::move(agent));
  }

  std::vector<Coord> homes;
  homes.reserve(sc.agents.size());
  for (const Agent& a : sc.agents) homes.push_back(a.home);
  sc.candidate_sites = derive_candidate_sites(homes, cfg.candidate_sites, mix_seed(seed, 3),
                                              sc.network, cfg.min_site_separation_m);
  return sc;
}

void validate_scenario(const Scenario& scenario) {
  scenario.network.validate();
  scenario.modes.validate();
  const auto link_count = static_cast<LinkId>(scenario.network.link_count());
  for (std::size_t i = 0; i < scenario.agents.size(); ++i) {
    const Agent& a = scenario.agents[i];
    const std::string name = "agent " + std::to_string(a.id);
    if (a.id != static_cast<AgentId>(i)) {
      throw ValidationError(name + " at position " + std::to_string(i) +
                            "; agent ids must equal positions");
    }
    if (!scenario.network.contains(a.home)) {
      throw ValidationError(name + " lives outside the network bounding box");
    }
    try {
      validate_activity_chain(a.activities);
    } catch (const ValidationError& e) {
      throw ValidationError(name + ": " + e.what());
    }
    for (const Activity& act : a.activities) {
      if (act.link < 0 || act.link >= link_count) {
        throw ValidationError(name + " references missing link " + std::to_string(act.link));
      }
    }
  }
  const auto& sites = scenario.candidate_sites.sites;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].id != static_cast<SiteId>(i)) {
      throw ValidationError("candidate site ids must be 0..N-1 in order");
    }
    if (sites[i].link < 0 || sites[i].link >= link_count) {
      throw ValidationError("candidate site " + std::to_string(i) + " references a missing link");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (distance(sites[i].coord, sites[j].coord) < scenario.candidate_sites.min_separation) {
        throw ValidationError("candidate sites " + std::to_string(j) + " and " +
                              std::to_string(i) + " are closer than min_separation");
      }
    }
  }
}

}  // namespace vertiopt
