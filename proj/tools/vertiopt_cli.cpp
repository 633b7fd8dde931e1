// Command-line front end: generate, simulate, optimize, hcm, compare.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vertiopt/baseline.hpp"
#include "vertiopt/config.hpp"
#include "vertiopt/exports.hpp"
#include "vertiopt/metrics.hpp"
#include "vertiopt/optimizer.hpp"
#include "vertiopt/scenario.hpp"
#include "vertiopt/simulator.hpp"
#include "vertiopt/version.hpp"

namespace fs = std::filesystem;
using namespace vertiopt;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;

struct Common {
  std::vector<std::string> argv;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

double elapsed(const Common& c) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - c.start).count();
}

template <class Writer>
std::string render(Writer&& w) {
  std::ostringstream ss;
  w(ss);
  return ss.str();
}

// A genome file holds one line of 0/1 characters; '#' lines are comments.
Genome read_genome_file(const fs::path& path) {
  std::istringstream in(read_text_file(path));
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    return genome_from_string(line);
  }
  throw ValidationError("no genome in " + path.string());
}

void check_genome(const Genome& g, const Scenario& s, const fs::path& from) {
  if (g.size() != s.candidate_sites.size()) {
    throw ValidationError(from.string() + ": genome has " + std::to_string(g.size()) +
                          " bits, scenario has " + std::to_string(s.candidate_sites.size()) + " sites");
  }
}

SimConfig load_sim_config(const std::string& path) {
  return path.empty() ? SimConfig{} : sim_config_from_json(read_text_file(path));
}

void finish(const fs::path& dir, RunManifest m, const Common& c) {
  m.argv = c.argv;
  m.wall_time_s = elapsed(c);
  write_file_atomic(dir / "manifest.json", manifest_json(m));
}

// ------------------------------------------------------------------------

struct GenerateArgs {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_generate(const GenerateArgs& a, const Common& c) {
  const GeneratorConfig cfg =
      a.config.empty() ? GeneratorConfig{} : generator_config_from_json(read_text_file(a.config));
  const Scenario s = generate_scenario(cfg, a.seed);
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_scenario(s, out);
  RunManifest m;
  m.command = "generate";
  m.config_path = a.config;
  m.seeds["seed"] = a.seed;
  m.outputs = {out.string()};
  m.scenario_hash = hex64(fnv1a64(scenario_to_json(s)));
  m.argv = c.argv;
  m.wall_time_s = elapsed(c);
  fs::path manifest = out;
  manifest += ".manifest.json";
  write_file_atomic(manifest, manifest_json(m));
  std::cout << "agents " << s.agents.size() << ", nodes " << s.network.nodes().size() << ", links "
            << s.network.links().size() << ", candidate sites " << s.candidate_sites.size() << "\n";
  return 0;
}

struct SimulateArgs {
  std::string scenario;
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  bool no_uam = false;
  std::string sites;
  bool events = false;
  int replications = 1;
};

int cmd_simulate(const SimulateArgs& a, const Common& c) {
  const Scenario s = load_scenario(a.scenario);
  const SimConfig cfg = load_sim_config(a.config);
  Genome g(s.candidate_sites.size(), 0);
  if (!a.no_uam) {
    g = read_genome_file(a.sites);
    check_genome(g, s, a.sites);
  }
  const fs::path dir(a.out);
  fs::create_directories(dir);
  const std::vector<Plan> initial = build_initial_plans(s, cfg);
  RunManifest m;
  m.command = "simulate";
  m.config_path = a.config;
  m.inputs = {a.scenario};
  if (!a.no_uam) m.inputs.push_back(a.sites);
  m.scenario_hash = hex64(fnv1a64(scenario_to_json(s)));
  for (int r = 0; r < a.replications; ++r) {
    const std::uint64_t seed = r == 0 ? a.seed : mix_seed(a.seed, static_cast<std::uint64_t>(r));
    const std::string suffix = a.replications > 1 ? "_r" + std::to_string(r) : "";
    m.seeds["seed" + suffix] = seed;
    const EquilibriumResult eq = run_inner_loop(s, active_sites(g), cfg, seed, &initial);
    auto put = [&](const std::string& name, const std::string& content) {
      write_file_atomic(dir / name, content);
      m.outputs.push_back((dir / name).string());
    };
    put("stats" + suffix + ".csv", render([&](std::ostream& o) { write_stats_csv(o, eq.stats); }));
    put("demand" + suffix + ".csv", render([&](std::ostream& o) { write_demand_csv(o, eq.station_demand); }));
    if (a.events) put("events" + suffix + ".csv", render([&](std::ostream& o) { write_events_csv(o, eq.events); }));
    PlotSpec plot{"Inner-loop convergence", "iteration", "relative to iteration 0", {}};
    Series tt{"total travel time", {}, {}, true};
    Series td{"total travel distance", {}, {}, true};
    for (const IterationStats& st : eq.stats) {
      tt.x.push_back(st.iteration);
      td.x.push_back(st.iteration);
      tt.y.push_back(st.total_travel_time / eq.stats.front().total_travel_time);
      td.y.push_back(st.total_travel_distance / eq.stats.front().total_travel_distance);
    }
    plot.series = {tt, td};
    put("convergence" + suffix + ".svg", render_svg(plot));
    std::cout << "seed " << seed << ": uam legs " << eq.uam_leg_count << ", ptds "
              << ptds(eq.stats) << " m, final travel time " << eq.stats.back().total_travel_time
              << " s, vehicles " << eq.vehicles_required << "\n";
  }
  finish(dir, m, c);
  return 0;
}

struct OptimizeArgs {
  std::string scenario;
  std::string config;
  std::string sim_config;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> eval_seed;
  std::string out;
  bool surrogate = false;
  double radius = 10000.0;
  int replications = 1;
};

int cmd_optimize(const OptimizeArgs& a, const Common& c) {
  const Scenario s = load_scenario(a.scenario);
  NsgaConfig ncfg = a.config.empty() ? NsgaConfig{} : nsga_config_from_json(read_text_file(a.config));
  ncfg.seed = a.seed;
  ncfg.evaluation_seed = a.eval_seed.value_or(a.seed);
  if (a.replications > 1) ncfg.replications = a.replications;
  const SimConfig scfg = load_sim_config(a.sim_config);
  std::unique_ptr<Evaluator> eval;
  if (a.surrogate) {
    const CoverageInstance inst = coverage_instance(s, 0, a.radius);
    eval = std::make_unique<CoverageEvaluator>(inst.sites, inst.homes, a.radius);
  } else {
    eval = std::make_unique<SimulationEvaluator>(s, scfg, ncfg.evaluation_seed, ncfg.replications);
  }
  const NsgaResult res = run_nsga2(*eval, ncfg, [](const GenerationLog& g) {
    std::cerr << "generation " << g.generation << ": best f1 " << g.best_f1 << ", hv " << g.hypervolume << "\n";
  });
  const fs::path dir(a.out);
  fs::create_directories(dir);
  RunManifest m;
  m.command = "optimize";
  m.config_path = a.config;
  m.inputs = {a.scenario};
  if (!a.sim_config.empty()) m.inputs.push_back(a.sim_config);
  m.seeds = {{"seed", ncfg.seed}, {"evaluation_seed", ncfg.evaluation_seed}};
  m.scenario_hash = hex64(fnv1a64(scenario_to_json(s)));
  auto put = [&](const std::string& name, const std::string& content) {
    write_file_atomic(dir / name, content);
    m.outputs.push_back((dir / name).string());
  };
  const ParetoFront& f = res.front;
  put("pareto.csv", render([&](std::ostream& o) { write_front_csv(o, f); }));
  put("generations.csv", render([&](std::ostream& o) { write_generation_log_csv(o, res.log); }));
  put("front_f1.geojson", network_geojson(s, f.members[f.extreme_f1].genome, scfg.evtol));
  put("front_f2.geojson", network_geojson(s, f.members[f.extreme_f2].genome, scfg.evtol));
  put("knee.geojson", network_geojson(s, f.members[f.knee].genome, scfg.evtol));
  put("knee.genome", genome_to_string(f.members[f.knee].genome) + "\n");
  PlotSpec plot{"Pareto front", "active vertiports f2", "normalized demand f1", {}};
  Series all{"front", {}, {}, false};
  for (const FrontMember& fm : f.members) {
    all.x.push_back(fm.f2);
    all.y.push_back(fm.f1_normalized);
  }
  Series knee{"knee", {static_cast<double>(f.members[f.knee].f2)}, {f.members[f.knee].f1_normalized}, false};
  plot.series = {all, knee};
  put("pareto.svg", render_svg(plot));
  finish(dir, m, c);
  std::cout << "front size " << f.members.size() << ", knee f1 " << f.members[f.knee].f1 << " f2 "
            << f.members[f.knee].f2 << ", evaluations " << res.evaluations << ", max popcount "
            << res.max_popcount_evaluated << "\n";
  return 0;
}

struct HcmArgs {
  std::string scenario;
  int p = 0;
  std::string knee;
  double radius = 10000.0;
  std::string out;
};

int cmd_hcm(const HcmArgs& a, const Common& c) {
  const Scenario s = load_scenario(a.scenario);
  int p = a.p;
  if (!a.knee.empty()) p = popcount(read_genome_file(a.knee));
  if (p <= 0) throw ValidationError("hcm needs --p or --knee");
  const GreedyCover cover = greedy_max_cover(coverage_instance(s, p, a.radius));
  const fs::path dir(a.out);
  fs::create_directories(dir);
  RunManifest m;
  m.command = "hcm";
  m.inputs = {a.scenario};
  if (!a.knee.empty()) m.inputs.push_back(a.knee);
  m.scenario_hash = hex64(fnv1a64(scenario_to_json(s)));
  write_file_atomic(dir / "selection.csv",
                    render([&](std::ostream& o) { write_selection_csv(o, cover.order, cover.gains); }));
  write_file_atomic(dir / "hcm.genome",
                    genome_to_string(hcm_solution_to_genome(cover.order, s.candidate_sites.size())) + "\n");
  m.outputs = {(dir / "selection.csv").string(), (dir / "hcm.genome").string()};
  finish(dir, m, c);
  std::cout << "hcm: " << p << " sites cover " << cover.covered << " of " << s.agents.size() << " homes\n";
  return 0;
}

struct CompareArgs {
  std::string scenario;
  std::string ab;
  std::string hcm;
  std::string config;
  std::uint64_t seed = 0;
  std::optional<double> f1_max;
  std::string out;
  int replications = 1;
};

int cmd_compare(const CompareArgs& a, const Common& c) {
  const Scenario s = load_scenario(a.scenario);
  const SimConfig cfg = load_sim_config(a.config);
  const Genome ab = read_genome_file(a.ab);
  const Genome hcm = read_genome_file(a.hcm);
  check_genome(ab, s, a.ab);
  check_genome(hcm, s, a.hcm);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  const std::vector<Plan> initial = build_initial_plans(s, cfg);
  RunManifest m;
  m.command = "compare";
  m.config_path = a.config;
  m.inputs = {a.scenario, a.ab, a.hcm};
  m.scenario_hash = hex64(fnv1a64(scenario_to_json(s)));
  std::ostringstream sweep;
  sweep << "replication,seed,method,demand_percent,ttts_percent,ports\n";
  for (int r = 0; r < a.replications; ++r) {
    const std::uint64_t seed = r == 0 ? a.seed : mix_seed(a.seed, static_cast<std::uint64_t>(r));
    m.seeds["seed_r" + std::to_string(r)] = seed;
    const ComparisonReport rep = build_comparison(s, ab, hcm, cfg, seed, a.f1_max, &initial);
    for (const MethodResult* mr : {&rep.ab_ndp, &rep.hcm}) {
      sweep << r << ',' << seed << ',' << mr->name << ',' << format_number(mr->demand_percent) << ','
            << format_number(mr->ttts_percent) << ',' << mr->ports << '\n';
    }
    if (r == 0) {
      write_file_atomic(dir / "report.csv", render([&](std::ostream& o) { write_comparison_csv(o, rep); }));
      write_file_atomic(dir / "report.json", comparison_json(rep));
      m.outputs = {(dir / "report.csv").string(), (dir / "report.json").string()};
      std::cout << "ab_ndp demand " << rep.ab_ndp.demand << " ttts " << rep.ab_ndp.ttts_percent
                << "% | hcm demand " << rep.hcm.demand << " ttts " << rep.hcm.ttts_percent << "%\n";
    }
  }
  if (a.replications > 1) {
    write_file_atomic(dir / "report_seeds.csv", sweep.str());
    m.outputs.push_back((dir / "report_seeds.csv").string());
  }
  finish(dir, m, c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Common common;
  common.argv.assign(argv, argv + argc);

  CLI::App app{"Bi-level vertiport placement: NSGA-II over an activity-based simulation"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a synthetic scenario");
  g->add_option("--config", gen.config, "Generator config JSON")->check(CLI::ExistingFile);
  g->add_option("--seed", gen.seed, "Random seed")->required();
  g->add_option("--out", gen.out, "Scenario JSON to write")->required();

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Run the inner loop for one vertiport set");
  s->add_option("--scenario", sim.scenario)->required()->check(CLI::ExistingFile);
  s->add_option("--config", sim.config, "Simulation config JSON")->check(CLI::ExistingFile);
  s->add_option("--seed", sim.seed)->required();
  s->add_option("--out", sim.out, "Output directory")->required();
  auto* no_uam = s->add_flag("--no-uam", sim.no_uam, "Run without vertiports");
  auto* sites = s->add_option("--sites", sim.sites, "Genome file of active sites")->check(CLI::ExistingFile);
  no_uam->excludes(sites);
  s->add_flag("--events", sim.events, "Also write the last iteration's events");
  s->add_option("--replications", sim.replications, "Seeds to sweep")->check(CLI::PositiveNumber);

  OptimizeArgs opt;
  auto* o = app.add_subcommand("optimize", "NSGA-II over candidate sites");
  o->add_option("--scenario", opt.scenario)->required()->check(CLI::ExistingFile);
  o->add_option("--config", opt.config, "NSGA-II config JSON")->check(CLI::ExistingFile);
  o->add_option("--sim-config", opt.sim_config, "Simulation config JSON")->check(CLI::ExistingFile);
  o->add_option("--seed", opt.seed)->required();
  o->add_option("--eval-seed", opt.eval_seed, "Inner-loop seed (default: --seed)");
  o->add_option("--out", opt.out, "Output directory")->required();
  o->add_flag("--surrogate", opt.surrogate, "Use the static coverage evaluator");
  o->add_option("--radius", opt.radius, "Coverage radius for --surrogate (m)");
  o->add_option("--replications", opt.replications, "Inner-loop runs averaged per genome")
      ->check(CLI::PositiveNumber);

  HcmArgs hcm;
  auto* h = app.add_subcommand("hcm", "Greedy maximal covering baseline");
  h->add_option("--scenario", hcm.scenario)->required()->check(CLI::ExistingFile);
  auto* p_opt = h->add_option("--p", hcm.p, "Sites to open");
  auto* knee_opt = h->add_option("--knee", hcm.knee, "Take p from this genome file")->check(CLI::ExistingFile);
  p_opt->excludes(knee_opt);
  h->add_option("--radius", hcm.radius, "Covering distance (m)");
  h->add_option("--out", hcm.out, "Output directory")->required();

  CompareArgs cmp;
  auto* cc = app.add_subcommand("compare", "AB-NDP vs HCM against a no-UAM reference");
  cc->add_option("--scenario", cmp.scenario)->required()->check(CLI::ExistingFile);
  cc->add_option("--ab", cmp.ab, "AB-NDP genome file")->required()->check(CLI::ExistingFile);
  cc->add_option("--hcm", cmp.hcm, "HCM genome file")->required()->check(CLI::ExistingFile);
  cc->add_option("--config", cmp.config, "Simulation config JSON")->check(CLI::ExistingFile);
  cc->add_option("--seed", cmp.seed)->required();
  cc->add_option("--f1-max", cmp.f1_max, "Demand normalization reference");
  cc->add_option("--out", cmp.out, "Output directory")->required();
  cc->add_option("--replications", cmp.replications, "Seeds to sweep")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*g) return cmd_generate(gen, common);
    if (*s) {
      if (!sim.no_uam && sim.sites.empty()) throw ValidationError("simulate needs --sites or --no-uam");
      return cmd_simulate(sim, common);
    }
    if (*o) return cmd_optimize(opt, common);
    if (*h) return cmd_hcm(hcm, common);
    if (*cc) return cmd_compare(cmp, common);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}
