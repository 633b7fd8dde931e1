#include <gtest/gtest.h>

#include <variant>

#include "fixtures.hpp"
#include "vertiopt/uam.hpp"

namespace vertiopt {
namespace {

using testing::make_activity;

// Two parallel roads 10 km apart running 600 km east.
Scenario corridor(const std::vector<Coord>& sites) {
  Scenario s;
  s.network = testing::grid_network(61, 2, 10000, 30, 1000);
  for (const Coord& c : sites) {
    CandidateSite site;
    site.id = static_cast<SiteId>(s.candidate_sites.sites.size());
    site.coord = c;
    site.link = s.network.nearest_link(c);
    site.cluster_size = 1;
    s.candidate_sites.sites.push_back(site);
  }
  return s;
}

UamOutcome trip(const Scenario& s, const std::vector<SiteId>& active, Coord from, Coord to,
                bool car = false, const EvtolParams& ev = {}) {
  const UamContext ctx{s, active, ev, nullptr};
  const Activity a = make_activity(s.network, ActivityKind::kHome, from, 8 * 3600.0, 3600);
  const Activity b = make_activity(s.network, ActivityKind::kWork, to, 17 * 3600.0, 3600);
  return build_uam_trip(ctx, a, b, car, 8 * 3600.0);
}

UamRejection rejection(const UamOutcome& o) {
  EXPECT_TRUE(std::holds_alternative<UamRejection>(o));
  return std::holds_alternative<UamRejection>(o) ? std::get<UamRejection>(o)
                                                 : UamRejection::kNoStations;
}

TEST(Uam, FlyTimeHundredKilometres) {
  EXPECT_NEAR(fly_time(EvtolParams{}, 100000.0), 2040.0, 1e-9);
}

TEST(Uam, StationToStationTrip) {
  const Scenario s = corridor({{0, 0}, {100000, 0}});
  const UamOutcome o = trip(s, {0, 1}, {0, 0}, {100000, 0});
  ASSERT_TRUE(std::holds_alternative<UamDetail>(o));
  const UamDetail& d = std::get<UamDetail>(o);
  EXPECT_EQ(d.origin_station, 0);
  EXPECT_EQ(d.dest_station, 1);
  EXPECT_NEAR(d.fly_time, 2040.0, 1e-9);
  EXPECT_NEAR(d.fly_distance, 100000.0, 1e-9);
  EXPECT_EQ(d.access_time, 0.0);
  EXPECT_EQ(d.egress_time, 0.0);
  EXPECT_EQ(d.process_time, 300.0);
}

TEST(Uam, Rejections) {
  EXPECT_EQ(rejection(trip(corridor({{0, 0}}), {}, {0, 0}, {50000, 0})), UamRejection::kNoStations);
  EXPECT_EQ(rejection(trip(corridor({{0, 0}}), {0}, {0, 0}, {50000, 0})),
            UamRejection::kSameStation);
  EXPECT_EQ(rejection(trip(corridor({{0, 0}, {3000, 0}}), {0, 1}, {0, 0}, {3000, 0})),
            UamRejection::kTooShort);
  EXPECT_EQ(rejection(trip(corridor({{0, 0}, {501000, 0}}), {0, 1}, {0, 0}, {501000, 0})),
            UamRejection::kOutOfRange);
  // 40 km to a station at each end of a 20 km trip: walking the trip wins.
  EXPECT_EQ(rejection(trip(corridor({{0, 0}, {100000, 0}}), {0, 1}, {40000, 0}, {60000, 0})),
            UamRejection::kDominated);
}

TEST(Uam, RangeBoundaryIsInclusive) {
  const UamOutcome o = trip(corridor({{0, 0}, {500000, 0}}), {0, 1}, {0, 0}, {500000, 0});
  EXPECT_TRUE(std::holds_alternative<UamDetail>(o));
}

TEST(Uam, NearestStationWithLowerIdOnTies) {
  // Sites 0 and 1 are equally far from the origin.
  const Scenario s = corridor({{10000, 1000}, {10000, -1000}, {200000, 0}});
  const UamDetail d = std::get<UamDetail>(trip(s, {0, 1, 2}, {10000, 0}, {200000, 0}));
  EXPECT_EQ(d.origin_station, 0);
  EXPECT_EQ(d.dest_station, 2);
  EXPECT_EQ(d.access_mode, AccessMode::kWalk);
}

TEST(Uam, FallsBackToAFeasiblePair) {
  // Nearest stations are 2 km apart; the next one out is far enough.
  const Scenario s = corridor({{0, 0}, {2000, 0}, {30000, 0}});
  const UamDetail d = std::get<UamDetail>(trip(s, {0, 1, 2}, {0, 0}, {2000, 0}, true));
  EXPECT_GE(d.fly_distance, 5000.0);
}

TEST(Uam, CarAccessBeyondWalkRadius) {
  const Scenario s = corridor({{0, 0}, {200000, 0}});
  const UamDetail d = std::get<UamDetail>(trip(s, {0, 1}, {20000, 0}, {200000, 0}, true));
  EXPECT_EQ(d.access_mode, AccessMode::kCar);
  EXPECT_GT(d.access_time, 0.0);
  EXPECT_GT(d.access_distance, 0.0);
}

TEST(Uam, AddingStationsNeverBreaksATrip) {
  Rng rng(77);
  std::vector<Coord> coords;
  for (int i = 0; i < 12; ++i) coords.push_back({rng.uniform(0, 600000), rng.uniform(0, 10000)});
  const Scenario s = corridor(coords);
  for (int q = 0; q < 80; ++q) {
    const Coord from{rng.uniform(0, 600000), rng.uniform(0, 10000)};
    const Coord to{rng.uniform(0, 600000), rng.uniform(0, 10000)};
    const bool car = q % 2 == 0;
    std::vector<SiteId> active;
    bool was_feasible = false;
    for (SiteId j = 0; j < 12; ++j) {
      active.push_back(j);
      const bool feasible = std::holds_alternative<UamDetail>(trip(s, active, from, to, car));
      EXPECT_FALSE(was_feasible && !feasible) << "query " << q << " sites " << active.size();
      was_feasible = was_feasible || feasible;
    }
  }
}

TEST(Uam, DemandCountsBoardings) {
  std::vector<Event> events;
  auto add = [&](EventKind k, std::int32_t where) {
    events.push_back({0.0, k, 0, where, ModeTag::kUam});
  };
  add(EventKind::kUamBoard, 2);
  add(EventKind::kUamAlight, 5);
  add(EventKind::kUamBoard, 2);
  add(EventKind::kUamBoard, 5);
  add(EventKind::kUamBoard, 2);
  add(EventKind::kUamAlight, 2);
  const std::vector<SiteId> active = {2, 5, 9};
  const auto d = count_station_demand(events, active);
  EXPECT_EQ(d, (std::map<SiteId, std::int64_t>{{2, 3}, {5, 1}}));
  add(EventKind::kUamBoard, 4);
  EXPECT_THROW(count_station_demand(events, active), IntegrityError);
}

TEST(Uam, FeasiblePairs) {
  const Scenario s = corridor({{0, 0}, {3000, 0}, {100000, 0}, {700000, 0}});
  const std::vector<SiteId> active = {0, 1, 2, 3};
  const auto pairs = feasible_station_pairs(s.candidate_sites, active, EvtolParams{});
  EXPECT_EQ(pairs, (std::vector<std::pair<SiteId, SiteId>>{{0, 2}, {1, 2}}));
}

TEST(Uam, EvtolValidation) {
  EvtolParams ev;
  ev.seats = 0;
  EXPECT_THROW(ev.validate(), ValidationError);
  EXPECT_NO_THROW(EvtolParams{}.validate());
}

}  // namespace
}  // namespace vertiopt
