#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "vertiopt/optimizer.hpp"
#include "vertiopt/router.hpp"
#include "vertiopt/simulator.hpp"

namespace {

using namespace vertiopt;

void BM_AstarTravelTime(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const Network net = testing::grid_network(side, side, 1000, 25, 1000, 3, 0.3, 0.3);
  const TravelTimeField ttf(net);
  const CostModel cost = CostModel::travel_time(ttf);
  Rng rng(1);
  for (auto _ : state) {
    const auto o = static_cast<LinkId>(rng.below(net.link_count()));
    const auto d = static_cast<LinkId>(rng.below(net.link_count()));
    benchmark::DoNotOptimize(route_astar(net, ModeTag::kCar, o, d, 8 * 3600.0, cost));
  }
}
BENCHMARK(BM_AstarTravelTime)->Arg(16)->Arg(48);

void BM_Mobsim(benchmark::State& state) {
  GeneratorConfig gen;
  gen.agents = static_cast<int>(state.range(0));
  const Scenario s = generate_scenario(gen, 1);
  SimConfig cfg;
  const std::vector<Plan> initial = build_initial_plans(s, cfg);
  for (auto _ : state) {
    std::vector<Plan> plans = initial;
    std::vector<Plan*> ptrs;
    for (Plan& p : plans) ptrs.push_back(&p);
    benchmark::DoNotOptimize(execute_mobsim(ptrs, s.network, s.modes, false));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Mobsim)->Arg(1000)->Arg(3400)->Unit(benchmark::kMillisecond);

void BM_NonDominatedSort(benchmark::State& state) {
  Rng rng(7);
  std::vector<MinPoint> pts;
  for (int i = 0; i < state.range(0); ++i) {
    pts.push_back({-rng.uniform(0, 500), static_cast<double>(rng.between(1, 25))});
  }
  for (auto _ : state) benchmark::DoNotOptimize(non_dominated_sort(pts));
}
BENCHMARK(BM_NonDominatedSort)->Arg(20)->Arg(200)->Arg(1000);

void BM_InnerLoop(benchmark::State& state) {
  const Scenario s = generate_scenario(GeneratorConfig{}, 1);
  SimConfig cfg;
  const std::vector<Plan> initial = build_initial_plans(s, cfg);
  std::vector<SiteId> active;
  for (SiteId j = 0; j < 10; ++j) active.push_back(j);
  for (auto _ : state) benchmark::DoNotOptimize(run_inner_loop(s, active, cfg, 1, &initial));
}
BENCHMARK(BM_InnerLoop)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
