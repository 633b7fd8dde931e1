#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "vertiopt/events.hpp"
#include "vertiopt/plan.hpp"
#include "vertiopt/router.hpp"
#include "vertiopt/scenario.hpp"

namespace vertiopt {

struct EvtolParams {
  int seats = 4;
  double range = 500'000.0;             // m
  double cruise_speed = 250.0 / 3.6;    // m/s
  double process_time = 300.0;          // s per boarding side
  double min_fly_distance = 5000.0;     // m
  double walk_access_radius = 1500.0;   // crow-fly m; beyond it access is by car if available

  void validate() const;
};

enum class UamRejection : std::uint8_t {
  kNoStations,
  kSameStation,
  kTooShort,
  kOutOfRange,
  kDominated,  // access + egress at least as slow as walking the whole trip
};

std::string_view to_string(UamRejection r);

using UamOutcome = std::variant<UamDetail, UamRejection>;

// Everything the trip builder reads besides the two trip ends.
struct UamContext {
  const Scenario& scenario;
  std::span<const SiteId> active_sites;  // sorted, unique
  const EvtolParams& evtol;
  const TravelTimeField* ttf = nullptr;   // nullptr: freespeed
};

// Straight-line flight between two stations: cruise time plus both process
// times.
double fly_time(const EvtolParams& evtol, double fly_distance);

// Door-to-door uam trip. Each side picks the active station with the least
// access (egress) time, ties to the lower site id; access is a walk within
// walk_access_radius, else a car route when the agent has a car, else a walk.
// If that station pair breaks a distance rule, the fastest pair that satisfies
// every rule is used instead, so adding stations never turns a feasible trip
// infeasible. Rejections report the rule broken by the nearest-station pair.
UamOutcome build_uam_trip(const UamContext& ctx, const Activity& from, const Activity& to,
                          bool agent_has_car, double departure_time);

class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// d_j = uam_board events at station j. Throws IntegrityError for a boarding
// at a station outside `active_sites`.
std::map<SiteId, std::int64_t> count_station_demand(const std::vector<Event>& events,
                                                    std::span<const SiteId> active_sites);

// Station pairs whose straight-line distance is within
// [min_fly_distance, range], i < j.
std::vector<std::pair<SiteId, SiteId>> feasible_station_pairs(const CandidateSites& sites,
                                                              std::span<const SiteId> active,
                                                              const EvtolParams& evtol);

}  // namespace vertiopt
