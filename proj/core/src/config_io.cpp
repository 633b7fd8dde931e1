#include <fstream>
#include <set>
#include <sstream>

#include "json_reader.hpp"
#include "vertiopt/config.hpp"

namespace vertiopt {
namespace {

using detail::json;
using detail::Reader;

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(what + ": " + e.what());
  }
}

void reject_unknown(const json& doc, const std::string& what, const std::set<std::string>& known) {
  if (!doc.is_object()) throw ValidationError(what + ": expected an object");
  for (const auto& item : doc.items()) {
    if (!known.count(item.key())) throw ValidationError(what + ": unknown key '" + item.key() + "'");
  }
}

}  // namespace

std::string sim_config_to_json(const SimConfig& c) {
  json doc = {
      {"inner_iterations", c.inner_iterations},
      {"replanning_share", c.replanning_share},
      {"strategy", {{"mode_mutation", c.strategy.mode_mutation},
                    {"time_mutation", c.strategy.time_mutation},
                    {"reroute", c.strategy.reroute}}},
      {"memory_capacity", c.memory_capacity},
      {"beta_best", c.beta_best},
      {"performing_utility", c.performing_utility},
      {"uam_fare_per_km", c.uam_fare_per_km},
      {"time_mutation_range", c.time_mutation_range},
      {"walk_max_distance", c.walk_max_distance},
      {"bike_max_distance", c.bike_max_distance},
      {"ttf_bin", c.ttf_bin},
      {"evtol", {{"seats", c.evtol.seats},
                 {"range", c.evtol.range},
                 {"cruise_speed", c.evtol.cruise_speed},
                 {"process_time", c.evtol.process_time},
                 {"min_fly_distance", c.evtol.min_fly_distance},
                 {"walk_access_radius", c.evtol.walk_access_radius}}},
      {"audit", c.audit},
  };
  return doc.dump(2);
}

SimConfig sim_config_from_json(const std::string& text) {
  const json doc = parse(text, "sim config");
  reject_unknown(doc, "sim config",
                 {"inner_iterations", "replanning_share", "strategy", "memory_capacity", "beta_best",
                  "performing_utility", "uam_fare_per_km", "time_mutation_range", "walk_max_distance",
                  "bike_max_distance", "ttf_bin", "evtol", "audit"});
  const Reader r(doc, "sim");
  SimConfig c;
  auto num = [](const Reader& rd, const char* key, double& field) {
    if (rd.has(key)) field = rd.at(key).number();
  };
  if (r.has("inner_iterations")) c.inner_iterations = static_cast<int>(r.at("inner_iterations").integer());
  num(r, "replanning_share", c.replanning_share);
  if (r.has("strategy")) {
    reject_unknown(doc.at("strategy"), "sim config strategy", {"mode_mutation", "time_mutation", "reroute"});
    const Reader s = r.at("strategy");
    num(s, "mode_mutation", c.strategy.mode_mutation);
    num(s, "time_mutation", c.strategy.time_mutation);
    num(s, "reroute", c.strategy.reroute);
  }
  if (r.has("memory_capacity")) c.memory_capacity = static_cast<int>(r.at("memory_capacity").integer());
  num(r, "beta_best", c.beta_best);
  num(r, "performing_utility", c.performing_utility);
  num(r, "uam_fare_per_km", c.uam_fare_per_km);
  num(r, "time_mutation_range", c.time_mutation_range);
  num(r, "walk_max_distance", c.walk_max_distance);
  num(r, "bike_max_distance", c.bike_max_distance);
  num(r, "ttf_bin", c.ttf_bin);
  if (r.has("evtol")) {
    reject_unknown(doc.at("evtol"), "sim config evtol",
                   {"seats", "range", "cruise_speed", "process_time", "min_fly_distance",
                    "walk_access_radius"});
    const Reader e = r.at("evtol");
    if (e.has("seats")) c.evtol.seats = static_cast<int>(e.at("seats").integer());
    num(e, "range", c.evtol.range);
    num(e, "cruise_speed", c.evtol.cruise_speed);
    num(e, "process_time", c.evtol.process_time);
    num(e, "min_fly_distance", c.evtol.min_fly_distance);
    num(e, "walk_access_radius", c.evtol.walk_access_radius);
  }
  if (r.has("audit")) c.audit = r.at("audit").boolean();
  c.validate();
  return c;
}

std::string nsga_config_to_json(const NsgaConfig& c) {
  json doc = {
      {"generations", c.generations},       {"population", c.population},
      {"crossover_rate", c.crossover_rate}, {"mutation_rate", c.mutation_rate},
      {"tournament_size", c.tournament_size}, {"max_active", c.max_active},
      {"seed", c.seed},                     {"evaluation_seed", c.evaluation_seed},
      {"replications", c.replications},
  };
  return doc.dump(2);
}

NsgaConfig nsga_config_from_json(const std::string& text) {
  const json doc = parse(text, "nsga config");
  reject_unknown(doc, "nsga config",
                 {"generations", "population", "crossover_rate", "mutation_rate", "tournament_size",
                  "max_active", "seed", "evaluation_seed", "replications"});
  const Reader r(doc, "nsga");
  NsgaConfig c;
  auto integer = [&](const char* key, int& field) {
    if (r.has(key)) field = static_cast<int>(r.at(key).integer());
  };
  integer("generations", c.generations);
  integer("population", c.population);
  if (r.has("crossover_rate")) c.crossover_rate = r.at("crossover_rate").number();
  if (r.has("mutation_rate")) c.mutation_rate = r.at("mutation_rate").number();
  integer("tournament_size", c.tournament_size);
  integer("max_active", c.max_active);
  if (r.has("seed")) c.seed = r.at("seed").unsigned_integer();
  if (r.has("evaluation_seed")) c.evaluation_seed = r.at("evaluation_seed").unsigned_integer();
  integer("replications", c.replications);
  c.validate();
  return c;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace vertiopt
