#include <fstream>
#include <sstream>
#include <string>

#include "json_reader.hpp"
#include "vertiopt/scenario.hpp"

namespace vertiopt {
namespace {

using detail::json;
using detail::Reader;

json coord_json(const Coord& c) { return json::array({c.x, c.y}); }

Coord read_coord(const Reader& r) {
  if (r.size() != 2) r.fail("expected [x, y]");
  return {r.at(std::size_t{0}).number(), r.at(std::size_t{1}).number()};
}

json config_json(const GeneratorConfig& c) {
  return {{"agents", c.agents},
          {"clusters", c.clusters},
          {"region_width_km", c.region_width_km},
          {"region_height_km", c.region_height_km},
          {"grid_spacing_m", c.grid_spacing_m},
          {"node_jitter", c.node_jitter},
          {"max_link_detour", c.max_link_detour},
          {"road_freespeed", c.road_freespeed},
          {"local_capacity", c.local_capacity},
          {"backbone_capacity", c.backbone_capacity},
          {"capacity_scale", c.capacity_scale},
          {"backbone_stride", c.backbone_stride},
          {"cluster_sigma_m", c.cluster_sigma_m},
          {"min_cluster_separation_m", c.min_cluster_separation_m},
          {"remote_primary_share", c.remote_primary_share},
          {"secondary_share", c.secondary_share},
          {"work_share", c.work_share},
          {"leisure_share", c.leisure_share},
          {"car_ownership", c.car_ownership},
          {"home_departure_mean_h", c.home_departure_mean_h},
          {"home_departure_sd_h", c.home_departure_sd_h},
          {"candidate_sites", c.candidate_sites},
          {"min_site_separation_m", c.min_site_separation_m}};
}

GeneratorConfig read_config(const Reader& r) {
  GeneratorConfig c;
  auto num = [&](const char* key, double& field) {
    if (r.has(key)) field = r.at(key).number();
  };
  auto integer = [&](const char* key, int& field) {
    if (r.has(key)) field = static_cast<int>(r.at(key).integer());
  };
  integer("agents", c.agents);
  integer("clusters", c.clusters);
  num("region_width_km", c.region_width_km);
  num("region_height_km", c.region_height_km);
  num("grid_spacing_m", c.grid_spacing_m);
  num("node_jitter", c.node_jitter);
  num("max_link_detour", c.max_link_detour);
  num("road_freespeed", c.road_freespeed);
  num("local_capacity", c.local_capacity);
  num("backbone_capacity", c.backbone_capacity);
  num("capacity_scale", c.capacity_scale);
  integer("backbone_stride", c.backbone_stride);
  num("cluster_sigma_m", c.cluster_sigma_m);
  num("min_cluster_separation_m", c.min_cluster_separation_m);
  num("remote_primary_share", c.remote_primary_share);
  num("secondary_share", c.secondary_share);
  num("work_share", c.work_share);
  num("leisure_share", c.leisure_share);
  num("car_ownership", c.car_ownership);
  num("home_departure_mean_h", c.home_departure_mean_h);
  num("home_departure_sd_h", c.home_departure_sd_h);
  integer("candidate_sites", c.candidate_sites);
  num("min_site_separation_m", c.min_site_separation_m);
  return c;
}

}  // namespace

std::string generator_config_to_json(const GeneratorConfig& cfg) { return config_json(cfg).dump(2); }

GeneratorConfig generator_config_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("generator config: ") + e.what());
  }
  return read_config(Reader(doc, "generator"));
}

std::string scenario_to_json(const Scenario& s) {
  json doc;
  doc["meta"] = {{"schema_version", kScenarioSchemaVersion},
                 {"seed", s.seed},
                 {"generator", s.config ? config_json(*s.config) : json(nullptr)}};

  json nodes = json::array();
  for (const Node& n : s.network.nodes()) nodes.push_back({{"id", n.id}, {"x", n.coord.x}, {"y", n.coord.y}});
  json links = json::array();
  for (const Link& l : s.network.links()) {
    json modes = json::array();
    for (ModeTag t : kAllModes) {
      if (l.allowed_modes.contains(t)) modes.push_back(std::string(to_string(t)));
    }
    links.push_back({{"id", l.id},
                     {"from", l.from},
                     {"to", l.to},
                     {"length", l.length},
                     {"freespeed", l.freespeed},
                     {"flow_capacity", l.flow_capacity},
                     {"modes", modes}});
  }
  doc["network"] = {{"nodes", nodes}, {"links", links}};

  json modes = json::array();
  for (const Mode& m : s.modes.all()) {
    modes.push_back({{"tag", std::string(to_string(m.tag))},
                     {"kind", std::string(to_string(m.kind))},
                     {"teleport_speed", m.teleport_speed},
                     {"detour_factor", m.detour_factor},
                     {"marginal_utility_of_travel_time", m.marginal_utility_of_travel_time},
                     {"mode_constant", m.mode_constant}});
  }
  doc["modes"] = modes;

  json agents = json::array();
  for (const Agent& a : s.agents) {
    json plan = json::array();
    for (const Activity& act : a.activities) {
      json j = {{"kind", std::string(to_string(act.kind))},
                {"location", coord_json(act.location)},
                {"link", act.link},
                {"typical_duration", act.typical_duration}};
      j["end_time"] = act.end_time ? json(*act.end_time) : json(nullptr);
      plan.push_back(std::move(j));
    }
    agents.push_back({{"id", a.id}, {"home", coord_json(a.home)}, {"has_car", a.has_car},
                      {"activities", plan}});
  }
  doc["agents"] = agents;

  json sites = json::array();
  for (const CandidateSite& site : s.candidate_sites.sites) {
    sites.push_back({{"id", site.id},
                     {"location", coord_json(site.coord)},
                     {"link", site.link},
                     {"cluster_size", site.cluster_size}});
  }
  doc["candidate_sites"] = {{"min_separation", s.candidate_sites.min_separation},
                            {"sites", sites}};
  return doc.dump(1);
}

Scenario scenario_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("scenario: malformed JSON: ") + e.what());
  }
  const Reader root(doc, "scenario");
  Scenario s;

  const Reader meta = root.at("meta");
  const std::int64_t version = meta.at("schema_version").integer();
  if (version != kScenarioSchemaVersion) {
    meta.fail("schema_version " + std::to_string(version) + " is not supported (expected " +
              std::to_string(kScenarioSchemaVersion) + ")");
  }
  s.seed = meta.at("seed").unsigned_integer();
  if (meta.has("generator") && !meta.at("generator").is_null()) {
    s.config = read_config(meta.at("generator"));
  }

  const Reader net = root.at("network");
  std::vector<Node> nodes;
  const Reader jn = net.at("nodes");
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const Reader n = jn.at(i);
    nodes.push_back({static_cast<NodeId>(n.at("id").integer()),
                     {n.at("x").number(), n.at("y").number()}});
  }
  std::vector<Link> links;
  const Reader jl = net.at("links");
  for (std::size_t i = 0; i < jl.size(); ++i) {
    const Reader l = jl.at(i);
    Link link;
    link.id = static_cast<LinkId>(l.at("id").integer());
    link.from = static_cast<NodeId>(l.at("from").integer());
    link.to = static_cast<NodeId>(l.at("to").integer());
    link.length = l.at("length").number();
    link.freespeed = l.at("freespeed").number();
    link.flow_capacity = l.at("flow_capacity").number();
    const Reader modes = l.at("modes");
    for (std::size_t m = 0; m < modes.size(); ++m) {
      const Reader tag = modes.at(m);
      link.allowed_modes.insert(tag.guard([&] { return parse_mode_tag(tag.string()); }));
    }
    links.push_back(link);
  }
  s.network = Network(std::move(nodes), std::move(links));
  net.guard([&] {
    s.network.validate();
    return 0;
  });

  const Reader jm = root.at("modes");
  std::array<bool, kModeCount> seen{};
  for (std::size_t i = 0; i < jm.size(); ++i) {
    const Reader m = jm.at(i);
    Mode mode;
    mode.tag = m.at("tag").guard([&] { return parse_mode_tag(m.at("tag").string()); });
    mode.kind = m.at("kind").guard([&] { return parse_mode_kind(m.at("kind").string()); });
    mode.teleport_speed = m.at("teleport_speed").number();
    mode.detour_factor = m.at("detour_factor").number();
    mode.marginal_utility_of_travel_time = m.at("marginal_utility_of_travel_time").number();
    mode.mode_constant = m.at("mode_constant").number();
    auto idx = static_cast<std::size_t>(mode.tag);
    if (seen[idx]) m.fail("duplicate mode tag '" + std::string(to_string(mode.tag)) + "'");
    seen[idx] = true;
    s.modes[mode.tag] = mode;
  }
  for (ModeTag t : kAllModes) {
    if (!seen[static_cast<std::size_t>(t)]) jm.fail("missing mode '" + std::string(to_string(t)) + "'");
  }
  jm.guard([&] {
    s.modes.validate();
    return 0;
  });

  const Reader ja = root.at("agents");
  for (std::size_t i = 0; i < ja.size(); ++i) {
    const Reader a = ja.at(i);
    Agent agent;
    agent.id = static_cast<AgentId>(a.at("id").integer());
    agent.home = read_coord(a.at("home"));
    agent.has_car = a.at("has_car").boolean();
    const Reader acts = a.at("activities");
    for (std::size_t k = 0; k < acts.size(); ++k) {
      const Reader act = acts.at(k);
      Activity activity;
      activity.kind =
          act.at("kind").guard([&] { return parse_activity_kind(act.at("kind").string()); });
      activity.location = read_coord(act.at("location"));
      activity.link = static_cast<LinkId>(act.at("link").integer());
      activity.typical_duration = act.at("typical_duration").number();
      if (act.has("end_time") && !act.at("end_time").is_null()) {
        activity.end_time = act.at("end_time").number();
      }
      agent.activities.push_back(activity);
    }
    s.agents.push_back(std::move(agent));
  }

  const Reader cs = root.at("candidate_sites");
  s.candidate_sites.min_separation = cs.at("min_separation").number();
  const Reader js = cs.at("sites");
  for (std::size_t i = 0; i < js.size(); ++i) {
    const Reader site = js.at(i);
    CandidateSite c;
    c.id = static_cast<SiteId>(site.at("id").integer());
    c.coord = read_coord(site.at("location"));
    c.link = static_cast<LinkId>(site.at("link").integer());
    c.cluster_size = static_cast<std::int32_t>(site.at("cluster_size").integer());
    s.candidate_sites.sites.push_back(c);
  }

  root.guard([&] {
    validate_scenario(s);
    return 0;
  });
  return s;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  const std::string text = scenario_to_json(scenario);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text << '\n';
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read scenario file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return scenario_from_json(buf.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

}  // namespace vertiopt
