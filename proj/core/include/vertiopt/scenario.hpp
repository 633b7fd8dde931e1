#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vertiopt/geometry.hpp"
#include "vertiopt/network.hpp"
#include "vertiopt/plan.hpp"

namespace vertiopt {

inline constexpr int kScenarioSchemaVersion = 1;

// A traveller and the activity chain they want to perform each day. Plan
// memory lives in the simulator; the scenario only carries the chain.
struct Agent {
  AgentId id = 0;
  Coord home;
  bool has_car = false;
  std::vector<Activity> activities;

  friend bool operator==(const Agent&, const Agent&) = default;
};

struct CandidateSite {
  SiteId id = 0;
  Coord coord;
  LinkId link = 0;
  std::int32_t cluster_size = 0;  // homes in the originating k-means cluster

  friend bool operator==(const CandidateSite&, const CandidateSite&) = default;
};

// The set N of possible vertiport locations. Genome bit j refers to sites[j].
struct CandidateSites {
  std::vector<CandidateSite> sites;
  double min_separation = 2000.0;

  std::size_t size() const { return sites.size(); }
  friend bool operator==(const CandidateSites&, const CandidateSites&) = default;
};

struct GeneratorConfig {
  int agents = 3400;
  int clusters = 12;
  double region_width_km = 180.0;
  double region_height_km = 80.0;
  double grid_spacing_m = 4000.0;
  double node_jitter = 0.25;          // fraction of grid spacing
  double max_link_detour = 0.12;      // link length = straight line * (1 + U(0, this))
  double road_freespeed = 22.2;       // m/s, all roads
  double local_capacity = 1200.0;     // veh/h before scaling
  double backbone_capacity = 3600.0;  // veh/h before scaling
  double capacity_scale = 0.005;      // sample-size scaling of road capacity
  int backbone_stride = 4;            // grid nodes skipped by each backbone link
  double cluster_sigma_m = 5000.0;
  double min_cluster_separation_m = 20000.0;
  double remote_primary_share = 0.3;  // primary activity in another cluster
  double secondary_share = 0.4;
  double work_share = 0.75;           // of primary activities; rest is education
  double leisure_share = 0.6;         // of secondary activities; rest is shop
  double car_ownership = 0.85;
  double home_departure_mean_h = 7.5;
  double home_departure_sd_h = 1.0;
  int candidate_sites = 50;
  double min_site_separation_m = 2000.0;

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

struct Scenario {
  Network network;
  ModeTable modes = ModeTable::defaults();
  std::vector<Agent> agents;
  CandidateSites candidate_sites;
  std::optional<GeneratorConfig> config;
  std::uint64_t seed = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Seeded synthetic world: perturbed road grid with a sparse backbone,
// clustered population with home-primary-(secondary)-home chains, and
// candidate sites from clustering the homes. Deterministic in (cfg, seed).
Scenario generate_scenario(const GeneratorConfig& cfg, std::uint64_t seed);

// Network, mode table, agent chains, activity links and candidate sites.
void validate_scenario(const Scenario& scenario);

struct KMeansResult {
  std::vector<Coord> centers;
  std::vector<std::int32_t> sizes;
  std::vector<std::int32_t> assignment;  // per point, in sorted-point order
  std::vector<Coord> sorted_points;
  int sweeps = 0;
};

// Lloyd's algorithm with k-means++ seeding on the (x, y)-sorted points, so the
// result does not depend on input order. At most 100 sweeps; stops when no
// assignment changes.
KMeansResult kmeans(std::span<const Coord> points, int k, std::uint64_t seed);

// k-means over homes, one site per cluster mean snapped to the nearest car
// link, sites closer than min_separation merged (larger cluster kept). Sites
// are numbered in (x, y) order.
CandidateSites derive_candidate_sites(std::span<const Coord> homes, int k, std::uint64_t seed,
                                      const Network& network, double min_separation = 2000.0);

// Generator config documents. Missing keys keep their defaults.
std::string generator_config_to_json(const GeneratorConfig& cfg);
GeneratorConfig generator_config_from_json(const std::string& text);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

}  // namespace vertiopt
