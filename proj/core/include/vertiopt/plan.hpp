#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "vertiopt/geometry.hpp"
#include "vertiopt/network.hpp"

namespace vertiopt {

enum class ActivityKind : std::uint8_t { kHome, kWork, kEducation, kLeisure, kShop };

std::string_view to_string(ActivityKind kind);
ActivityKind parse_activity_kind(std::string_view kind);

struct Activity {
  ActivityKind kind = ActivityKind::kHome;
  Coord location;
  LinkId link = 0;
  std::optional<double> end_time;  // seconds of day; absent for the last activity
  double typical_duration = 3600.0;

  friend bool operator==(const Activity&, const Activity&) = default;
};

enum class AccessMode : std::uint8_t { kWalk, kCar };

// Door-to-door breakdown of a uam leg.
struct UamDetail {
  SiteId origin_station = -1;
  SiteId dest_station = -1;
  AccessMode access_mode = AccessMode::kWalk;
  double access_time = 0.0;
  double access_distance = 0.0;
  double fly_time = 0.0;  // cruise time plus both process times
  double fly_distance = 0.0;
  double process_time = 0.0;  // per side, included in fly_time
  AccessMode egress_mode = AccessMode::kWalk;
  double egress_time = 0.0;
  double egress_distance = 0.0;

  double total_time() const { return access_time + fly_time + egress_time; }
  double total_distance() const { return access_distance + fly_distance + egress_distance; }
  friend bool operator==(const UamDetail&, const UamDetail&) = default;
};

struct Leg {
  ModeTag mode = ModeTag::kWalk;
  double departure_time = 0.0;
  double travel_time = 0.0;  // s; planned estimate until executed
  double distance = 0.0;     // m
  std::vector<LinkId> route;  // car only
  std::optional<UamDetail> uam;

  friend bool operator==(const Leg&, const Leg&) = default;
};

// A daily schedule: activities[i] -- legs[i] --> activities[i + 1].
// Storing the two sequences side by side keeps the alternation structural.
struct Plan {
  std::vector<Activity> activities;
  std::vector<Leg> legs;
  std::optional<double> score;

  friend bool operator==(const Plan&, const Plan&) = default;
};

// Checks the activity chain alone: home at both ends, end times inside the
// day on every activity but the last, positive typical durations.
void validate_activity_chain(const std::vector<Activity>& activities);

// Full plan check: chain rules, |legs| = |activities| - 1, non-empty route
// only on car legs, uam detail iff uam, non-negative leg times and distances.
// With a network, car routes must also be contiguous and connect the
// surrounding activity links.
void validate_plan(const Plan& plan, const Network* network = nullptr);

}  // namespace vertiopt
