#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "vertiopt/router.hpp"

namespace vertiopt {
namespace {

using testing::dijkstra_route_cost;
using testing::grid_network;

double route_sum(const Network& net, const Route& r, double (*f)(const Link&)) {
  double s = 0.0;
  for (LinkId l : r.links) s += f(net.link(l));
  return s;
}

TEST(Astar, MatchesDijkstraOnRandomGrids) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Network net = grid_network(8, 7, 1000, 20, 1000, seed, 0.3, 0.4);
    Rng rng(seed + 100);
    for (int q = 0; q < 30; ++q) {
      const auto o = static_cast<LinkId>(rng.below(net.link_count()));
      const auto d = static_cast<LinkId>(rng.below(net.link_count()));
      const Route by_dist = route_astar(net, ModeTag::kCar, o, d, 0.0, CostModel::distance());
      const double want_dist =
          dijkstra_route_cost(net, o, d, [](const Link& l) { return l.length; });
      EXPECT_NEAR(by_dist.cost, want_dist, 1e-6 * (1 + want_dist));
      const Route by_time =
          route_astar(net, ModeTag::kCar, o, d, 0.0, CostModel::freespeed_time());
      const double want_time =
          dijkstra_route_cost(net, o, d, [](const Link& l) { return l.freespeed_time(); });
      EXPECT_NEAR(by_time.cost, want_time, 1e-6 * (1 + want_time));
    }
  }
}

TEST(Astar, RouteIsConnectedAndEndsAtDestination) {
  const Network net = grid_network(6, 6, 500, 15, 1000, 3, 0.2, 0.2);
  const LinkId o = 0;
  const auto d = static_cast<LinkId>(net.link_count() - 1);
  const Route r = route_astar(net, ModeTag::kCar, o, d, 0.0, CostModel::freespeed_time());
  ASSERT_FALSE(r.links.empty());
  EXPECT_EQ(r.links.back(), d);
  EXPECT_EQ(net.link(r.links.front()).from, net.link(o).to);
  for (std::size_t i = 1; i < r.links.size(); ++i) {
    EXPECT_EQ(net.link(r.links[i - 1]).to, net.link(r.links[i]).from);
  }
  EXPECT_NEAR(r.distance, route_sum(net, r, [](const Link& l) { return l.length; }), 1e-9);
  EXPECT_NEAR(r.travel_time, route_sum(net, r, [](const Link& l) { return l.freespeed_time(); }),
              1e-9);
}

TEST(Astar, SameLinkIsEmpty) {
  const Network net = grid_network(3, 3, 1000, 10, 1000);
  const Route r = route_astar(net, ModeTag::kCar, 4, 4, 0.0, CostModel::distance());
  EXPECT_TRUE(r.links.empty());
  EXPECT_EQ(r.distance, 0.0);
  EXPECT_EQ(r.travel_time, 0.0);
}

TEST(Astar, DisconnectedThrowsUnreachable) {
  std::vector<Node> nodes = {{0, {0, 0}}, {1, {1000, 0}}, {2, {5000, 0}}, {3, {6000, 0}}};
  std::vector<Link> links;
  for (auto [f, t] : {std::pair{0, 1}, std::pair{1, 0}, std::pair{2, 3}, std::pair{3, 2}}) {
    Link l;
    l.id = static_cast<LinkId>(links.size());
    l.from = f;
    l.to = t;
    l.length = 1000;
    l.freespeed = 10;
    l.flow_capacity = 1000;
    l.allowed_modes = ModeSet{ModeTag::kCar};
    links.push_back(l);
  }
  const Network net(std::move(nodes), std::move(links));
  try {
    route_astar(net, ModeTag::kCar, 0, 2, 0.0, CostModel::distance());
    FAIL() << "expected UnreachableError";
  } catch (const UnreachableError& e) {
    EXPECT_EQ(e.origin(), 0);
    EXPECT_EQ(e.dest(), 2);
  }
}

TEST(Astar, TimeDependentCostFollowsTheField) {
  // Jamming the first link of the free-flow route diverts the search.
  const Network net = grid_network(3, 3, 1000, 10, 1000);
  LinkId dest = -1;
  for (const Link& l : net.links()) {
    if (l.from == 7 && l.to == 8) dest = l.id;
  }
  ASSERT_GE(dest, 0);
  const LinkId o = 0;  // node 0 -> 1
  const Route free = route_astar(net, ModeTag::kCar, o, dest, 0.0, CostModel::freespeed_time());
  const LinkId jam = free.links.front();
  const auto ttf = TravelTimeField::from_traversals(net, {{jam, 10.0, 5010.0}});
  const Route diverted =
      route_astar(net, ModeTag::kCar, o, dest, 0.0, CostModel::travel_time(ttf));
  EXPECT_EQ(diverted.links.back(), dest);
  EXPECT_EQ(std::count(diverted.links.begin(), diverted.links.end(), jam), 0);
  EXPECT_LT(diverted.travel_time, 5000.0);
  // Outside the jammed bin the free-flow route comes back.
  const Route later =
      route_astar(net, ModeTag::kCar, o, dest, 7200.0, CostModel::travel_time(ttf));
  EXPECT_DOUBLE_EQ(later.travel_time, free.travel_time);
}

TEST(Teleport, WalkAndPt) {
  const ModeTable modes = ModeTable::defaults();
  const TeleportResult walk = teleport_leg(modes[ModeTag::kWalk], {0, 0}, {1000, 0});
  EXPECT_NEAR(walk.distance, 1300.0, 1e-9);
  EXPECT_NEAR(walk.travel_time, 1300.0 / 1.34, 1e-9);
  EXPECT_NEAR(walk.travel_time, 970.149, 1e-3);
  const TeleportResult pt = teleport_leg(modes[ModeTag::kPt], {0, 0}, {6000, 8000});
  EXPECT_NEAR(pt.distance, 13000.0, 1e-9);
  EXPECT_NEAR(pt.travel_time, 650.0, 1e-9);
}

TEST(TravelTimeField, ClampsToFreespeedAndAverages) {
  const Network net = grid_network(2, 2, 1000, 10, 1000);
  const std::vector<TravelTimeField::Traversal> obs = {
      {0, 100.0, 150.0},    // faster than freespeed: clamped to 100 s
      {1, 100.0, 300.0},    // 200 s
      {1, 200.0, 600.0},    // 400 s, same bin
      {1, 4000.0, 4300.0},  // 300 s, later bin
  };
  const auto ttf = TravelTimeField::from_traversals(net, obs);
  EXPECT_DOUBLE_EQ(ttf.link_time(0, 120.0), 100.0);
  EXPECT_DOUBLE_EQ(ttf.link_time(1, 0.0), 300.0);
  EXPECT_DOUBLE_EQ(ttf.link_time(1, 3700.0), 300.0);
  EXPECT_DOUBLE_EQ(ttf.link_time(1, 2000.0), 100.0);
  EXPECT_DOUBLE_EQ(ttf.link_time(2, 500.0), 100.0);
  EXPECT_EQ(ttf.bin_of(1e9), ttf.bins() - 1);
  EXPECT_EQ(ttf.bin_of(-5.0), 0u);
}

TEST(NodeCosts, ForwardAndReverseAgreeWithPairwise) {
  const Network net = grid_network(5, 4, 800, 12, 1000, 9, 0.2, 0.3);
  std::vector<double> lens;
  for (const Link& l : net.links()) lens.push_back(l.length);
  const NodeCosts fwd = node_costs(net, ModeTag::kCar, 0, lens, false);
  const NodeCosts rev = node_costs(net, ModeTag::kCar, 7, lens, true);
  // Reverse from 7 evaluated at node 0 equals forward from 0 evaluated at 7.
  EXPECT_NEAR(fwd.cost[7], rev.cost[0], 1e-9);
  EXPECT_EQ(fwd.cost[0], 0.0);
}

}  // namespace
}  // namespace vertiopt
