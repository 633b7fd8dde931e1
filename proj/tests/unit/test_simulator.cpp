#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "vertiopt/simulator.hpp"

namespace vertiopt {
namespace {

using testing::make_activity;

constexpr double kH = 3600.0;

ScoringParams default_scoring() {
  return ScoringParams::from_modes(ModeTable::defaults(), 6.0, -0.06);
}

// home (16 h typical, leaves 08:00) -> work (8 h, leaves 16:00) -> home.
Plan commute(const Network& net, ModeTag mode, double extra) {
  Plan p;
  p.activities = {make_activity(net, ActivityKind::kHome, {0, 0}, 8 * kH, 16 * kH),
                  make_activity(net, ActivityKind::kWork, {1000, 0}, 16 * kH, 8 * kH),
                  make_activity(net, ActivityKind::kHome, {0, 0}, std::nullopt, 16 * kH)};
  Leg out;
  out.mode = mode;
  out.departure_time = 8 * kH - extra;
  out.travel_time = extra;
  Leg back;
  back.mode = mode;
  back.departure_time = 16 * kH;
  back.travel_time = 0.0;
  p.legs = {out, back};
  return p;
}

TEST(Scoring, FullDayWithInstantLegs) {
  const Network net = testing::grid_network(2, 2, 1000, 10, 1000);
  // 16 h overnight at home and 8 h at work, both exactly typical.
  EXPECT_NEAR(score_plan(commute(net, ModeTag::kWalk, 0.0), default_scoring()), 144.0, 1e-9);
}

TEST(Scoring, TenMinutesByCarCostsOneUtil) {
  Leg leg;
  leg.mode = ModeTag::kCar;
  leg.travel_time = 600.0;
  EXPECT_NEAR(leg_utility(leg, default_scoring()), -1.0, 1e-12);
  leg.travel_time = 0.0;
  EXPECT_NEAR(leg_utility(leg, default_scoring()), 0.0, 1e-12);
}

TEST(Scoring, UamFareAndConstant) {
  Leg leg;
  leg.mode = ModeTag::kUam;
  leg.travel_time = 3600.0;
  leg.uam = UamDetail{};
  leg.uam->fly_distance = 100000.0;
  EXPECT_NEAR(leg_utility(leg, default_scoring()), -2.0 - 6.0 - 6.0, 1e-12);
}

TEST(Scoring, ExtraCarTimeLowersTheScore) {
  const Network net = testing::grid_network(2, 2, 1000, 10, 1000);
  const ScoringParams sp = default_scoring();
  // Leaving home 10 min earlier: -1 for the leg, and a shorter overnight stay.
  const double base = score_plan(commute(net, ModeTag::kCar, 0.0), sp);
  const double slow = score_plan(commute(net, ModeTag::kCar, 600.0), sp);
  const double home_loss = 6.0 * 16.0 * (std::log(16.0) - std::log(16.0 - 1.0 / 6.0));
  EXPECT_NEAR(base - slow, 1.0 + home_loss, 1e-9);
}

TEST(Scoring, NegativeLegTimeThrows) {
  const Network net = testing::grid_network(2, 2, 1000, 10, 1000);
  Plan p = commute(net, ModeTag::kCar, 0.0);
  p.legs[1].travel_time = -1.0;
  EXPECT_THROW(score_plan(p, default_scoring()), ValidationError);
}

// Nodes 0 -- 1 -- 2 -- 3 on a line, 1000 m apart, links both ways.
Network line(double capacity) {
  std::vector<Node> nodes;
  for (int i = 0; i < 4; ++i) nodes.push_back({i, {i * 1000.0, 0}});
  std::vector<Link> links;
  for (int i = 0; i < 3; ++i) {
    for (auto [f, t] : {std::pair{i, i + 1}, std::pair{i + 1, i}}) {
      Link l;
      l.id = static_cast<LinkId>(links.size());
      l.from = f;
      l.to = t;
      l.length = 1000;
      l.freespeed = 10;
      l.flow_capacity = capacity;
      l.allowed_modes = ModeSet{ModeTag::kCar};
      links.push_back(l);
    }
  }
  return Network(std::move(nodes), std::move(links));
}

// Car trip from the end of `origin` over `route`, departing at `dep`.
Plan car_plan(const Network& net, LinkId origin, std::vector<LinkId> route, double dep) {
  Plan p;
  Activity a;
  a.link = origin;
  a.location = net.node(net.link(origin).to).coord;
  a.end_time = dep;
  Activity b;
  b.kind = ActivityKind::kWork;
  b.link = route.back();
  b.location = net.node(net.link(route.back()).to).coord;
  p.activities = {a, b};
  Leg leg;
  leg.mode = ModeTag::kCar;
  leg.route = std::move(route);
  p.legs = {leg};
  return p;
}

std::vector<Plan*> pointers(std::vector<Plan>& plans) {
  std::vector<Plan*> out;
  for (Plan& p : plans) out.push_back(&p);
  return out;
}

TEST(Mobsim, SingleLinkAtFreespeed) {
  const Network net = line(3600);
  std::vector<Plan> plans = {car_plan(net, 1, {0}, 1000.0)};  // 1->0 then 0->1
  auto ptrs = pointers(plans);
  const MobsimResult r = execute_mobsim(ptrs, net, ModeTable::defaults());
  EXPECT_DOUBLE_EQ(plans[0].legs[0].departure_time, 1000.0);
  EXPECT_DOUBLE_EQ(plans[0].legs[0].travel_time, 100.0);
  EXPECT_DOUBLE_EQ(plans[0].legs[0].distance, 1000.0);
  ASSERT_EQ(r.events.size(), 4u);
  EXPECT_EQ(r.events[0].kind, EventKind::kDeparture);
  EXPECT_EQ(r.events[1].kind, EventKind::kLinkEnter);
  EXPECT_EQ(r.events[2].kind, EventKind::kLinkLeave);
  EXPECT_EQ(r.events[3].kind, EventKind::kArrival);
  ASSERT_EQ(r.traversals.size(), 1u);
  EXPECT_DOUBLE_EQ(r.traversals[0].leave - r.traversals[0].enter, 100.0);
  EXPECT_TRUE(audit_events(r.events, net, 1, ptrs).ok());
}

TEST(Mobsim, CapacitySpacesOutflow) {
  const Network net = line(3600);
  std::vector<Plan> plans;
  for (int i = 0; i < 10; ++i) plans.push_back(car_plan(net, 1, {0}, 0.0));
  auto ptrs = pointers(plans);
  const MobsimResult r = execute_mobsim(ptrs, net, ModeTable::defaults());
  for (int i = 0; i < 10; ++i) {
    EXPECT_DOUBLE_EQ(plans[static_cast<std::size_t>(i)].legs[0].travel_time, 100.0 + i) << i;
  }
  EXPECT_TRUE(audit_events(r.events, net, plans.size(), ptrs).ok());
}

TEST(Mobsim, HourlyBoundForFractionalCapacity) {
  // 2.5 veh/h: spacing 1440 s, and at most two leaves in any hour.
  const Network net = line(2.5);
  std::vector<Plan> plans;
  for (int i = 0; i < 5; ++i) plans.push_back(car_plan(net, 1, {0}, 0.0));
  auto ptrs = pointers(plans);
  const MobsimResult r = execute_mobsim(ptrs, net, ModeTable::defaults());
  const AuditReport audit = audit_events(r.events, net, plans.size(), ptrs);
  EXPECT_TRUE(audit.ok()) << audit.detail;
  EXPECT_DOUBLE_EQ(plans[1].legs[0].travel_time, 100.0 + 1440.0);
  EXPECT_DOUBLE_EQ(plans[2].legs[0].travel_time, 100.0 + 3600.0);
}

TEST(Mobsim, DisjointTripsDoNotInteract) {
  const Network net = line(1);
  std::vector<Plan> alone_a = {car_plan(net, 1, {0, 2}, 0.0)};
  std::vector<Plan> alone_b = {car_plan(net, 4, {5, 3}, 0.0)};
  auto pa = pointers(alone_a);
  auto pb = pointers(alone_b);
  execute_mobsim(pa, net, ModeTable::defaults());
  execute_mobsim(pb, net, ModeTable::defaults());
  std::vector<Plan> both = {car_plan(net, 1, {0, 2}, 0.0), car_plan(net, 4, {5, 3}, 0.0)};
  auto pboth = pointers(both);
  execute_mobsim(pboth, net, ModeTable::defaults());
  EXPECT_EQ(both[0].legs[0].travel_time, alone_a[0].legs[0].travel_time);
  EXPECT_EQ(both[1].legs[0].travel_time, alone_b[0].legs[0].travel_time);
}

TEST(Mobsim, UamLegEmitsBoardAndAlight) {
  const Network net = line(3600);
  Plan p = car_plan(net, 1, {0}, 0.0);
  p.legs[0].mode = ModeTag::kUam;
  p.legs[0].route.clear();
  UamDetail u;
  u.origin_station = 3;
  u.dest_station = 8;
  u.access_time = 50.0;
  u.fly_distance = 100000.0;
  u.process_time = 300.0;
  u.fly_time = 2040.0;
  u.egress_time = 70.0;
  p.legs[0].uam = u;
  std::vector<Plan> plans = {p};
  auto ptrs = pointers(plans);
  const MobsimResult r = execute_mobsim(ptrs, net, ModeTable::defaults());
  ASSERT_EQ(r.events.size(), 4u);
  EXPECT_EQ(r.events[1].kind, EventKind::kUamBoard);
  EXPECT_EQ(r.events[1].where, 3);
  EXPECT_DOUBLE_EQ(r.events[1].time, 350.0);
  EXPECT_EQ(r.events[2].kind, EventKind::kUamAlight);
  EXPECT_EQ(r.events[2].where, 8);
  EXPECT_DOUBLE_EQ(r.events[2].time, 50.0 + 2040.0 - 300.0);
  EXPECT_DOUBLE_EQ(plans[0].legs[0].travel_time, 50.0 + 2040.0 + 70.0);
}

TEST(Audit, FlagsBrokenStreams) {
  const Network net = line(3600);
  std::vector<Event> ev = {{0, EventKind::kDeparture, 0, 1, ModeTag::kCar}};
  EXPECT_FALSE(audit_events(ev, net, 1).conservation_ok);
  ev.push_back({10, EventKind::kArrival, 0, 0, ModeTag::kCar});
  EXPECT_TRUE(audit_events(ev, net, 1).ok());
  ev.push_back({5, EventKind::kDeparture, 0, 0, ModeTag::kCar});
  EXPECT_FALSE(audit_events(ev, net, 1).conservation_ok);

  const Network tight = line(2);
  std::vector<Event> leaves;
  for (int i = 0; i < 3; ++i) leaves.push_back({i * 100.0, EventKind::kLinkLeave, i, 0, ModeTag::kCar});
  EXPECT_FALSE(audit_events(leaves, tight, 3).flow_bound_ok);
}

struct ReplanFixture : ::testing::Test {
  Scenario scenario = generate_scenario(testing::small_config(20), 11);
  SimConfig config;
  TravelTimeField ttf{scenario.network};
  std::vector<SiteId> none;
  ReplanContext ctx() { return {scenario, none, ttf, config}; }
};

TEST_F(ReplanFixture, TimeMutationStaysInsideTheDay) {
  const std::vector<Plan> initial = build_initial_plans(scenario, config);
  Plan early = initial[0];
  early.activities[0].end_time = 60.0;
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const Plan m = apply_strategy(Strategy::kTimeMutation, scenario.agents[0], early, ctx(), rng);
    for (std::size_t k = 0; k + 1 < m.activities.size(); ++k) {
      ASSERT_TRUE(m.activities[k].end_time.has_value());
      EXPECT_GE(*m.activities[k].end_time, 0.0);
      EXPECT_LE(*m.activities[k].end_time, kSecondsPerDay);
      EXPECT_LE(std::abs(*m.activities[k].end_time - *early.activities[k].end_time), 1800.0);
    }
    EXPECT_FALSE(m.score.has_value());
  }
}

TEST_F(ReplanFixture, ModeMutationKeepsPlansValid) {
  const std::vector<Plan> initial = build_initial_plans(scenario, config);
  Rng rng(6);
  for (std::size_t a = 0; a < scenario.agents.size(); ++a) {
    const Plan m =
        apply_strategy(Strategy::kModeMutation, scenario.agents[a], initial[a], ctx(), rng);
    EXPECT_NO_THROW(validate_plan(m, &scenario.network));
    for (const Leg& leg : m.legs) EXPECT_NE(leg.mode, ModeTag::kUam);
  }
}

std::vector<Plan> scored(std::initializer_list<std::optional<double>> scores) {
  std::vector<Plan> out;
  for (auto s : scores) {
    Plan p;
    p.score = s;
    out.push_back(p);
  }
  return out;
}

TEST(Selection, BestWithTiesToLowestIndex) {
  Rng rng(1);
  const auto mem = scored({3.0, 7.0, 7.0});
  for (int i = 0; i < 50; ++i) EXPECT_EQ(select_plan(mem, 1.0, rng), 1u);
}

TEST(Selection, UnscoredFirst) {
  Rng rng(1);
  EXPECT_EQ(select_plan(scored({3.0, std::nullopt, 9.0}), 1.0, rng), 1u);
}

TEST(Selection, UniformWhenBetaIsZero) {
  Rng rng(2);
  const auto mem = scored({3.0, 7.0, 7.0});
  std::array<int, 3> hits{};
  const int n = 30000;
  for (int i = 0; i < n; ++i) ++hits[select_plan(mem, 0.0, rng)];
  for (int h : hits) EXPECT_NEAR(static_cast<double>(h) / n, 1.0 / 3.0, 0.02);
}

TEST(Memory, DropsWorstButKeepsBestAndSelected) {
  auto mem = scored({5.0, 1.0, 9.0, 2.0, std::nullopt});
  const std::size_t keep = enforce_memory(mem, 3, 1);
  ASSERT_EQ(mem.size(), 3u);
  EXPECT_EQ(*mem[keep].score, 1.0);
  std::vector<std::optional<double>> left;
  for (const Plan& p : mem) left.push_back(p.score);
  EXPECT_EQ(left, (std::vector<std::optional<double>>{1.0, 9.0, std::nullopt}));
}

SimConfig quick_config() {
  SimConfig c;
  c.inner_iterations = 4;
  c.audit = true;
  return c;
}

TEST(InnerLoop, NoStationsMeansNoUamDemand) {
  const Scenario s = generate_scenario(testing::small_config(150), 3);
  const EquilibriumResult r = run_inner_loop(s, {}, quick_config(), 1);
  EXPECT_TRUE(r.station_demand.empty());
  EXPECT_EQ(r.uam_leg_count, 0);
  EXPECT_EQ(r.stats.size(), 4u);
  EXPECT_EQ(r.final_plans.size(), s.agents.size());
  for (const Event& e : r.events) EXPECT_NE(e.mode, ModeTag::kUam);
  ASSERT_EQ(r.audits.size(), 4u);
  for (const AuditReport& a : r.audits) EXPECT_TRUE(a.ok()) << a.detail;
}

TEST(InnerLoop, DeterministicInSeed) {
  const Scenario s = generate_scenario(testing::small_config(150), 3);
  std::vector<SiteId> active;
  for (std::size_t j = 0; j < s.candidate_sites.size(); ++j) active.push_back(static_cast<SiteId>(j));
  const EquilibriumResult a = run_inner_loop(s, active, quick_config(), 9);
  const EquilibriumResult b = run_inner_loop(s, active, quick_config(), 9);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(a.station_demand, b.station_demand);
  EXPECT_EQ(a.final_plans, b.final_plans);
  std::int64_t boarded = 0;
  for (const auto& [site, d] : a.station_demand) boarded += d;
  EXPECT_EQ(boarded, a.uam_leg_count);
  EXPECT_EQ(a.vehicles_required, (a.peak_concurrent_flights + 3) / 4);
}

TEST(InnerLoop, RejectsBadConfigAndSites) {
  const Scenario s = generate_scenario(testing::small_config(20), 3);
  SimConfig bad = quick_config();
  bad.replanning_share = 1.5;
  EXPECT_THROW(run_inner_loop(s, {}, bad, 1), ValidationError);
  const std::vector<SiteId> out_of_range = {static_cast<SiteId>(s.candidate_sites.size())};
  EXPECT_THROW(run_inner_loop(s, out_of_range, quick_config(), 1), ValidationError);
}

TEST(InnerLoop, DistanceSaturation) {
  std::vector<IterationStats> st(5);
  for (std::size_t i = 0; i < st.size(); ++i) st[i].total_travel_distance = 1000.0;
  EXPECT_TRUE(distance_saturated(st));
  st.back().total_travel_distance = 1020.0;
  EXPECT_FALSE(distance_saturated(st));
  EXPECT_FALSE(distance_saturated(std::vector<IterationStats>(2)));
}

}  // namespace
}  // namespace vertiopt
