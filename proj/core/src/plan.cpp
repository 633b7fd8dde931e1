#include "vertiopt/plan.hpp"

#include <cmath>
#include <string>

namespace vertiopt {

std::string_view to_string(ActivityKind kind) {
  switch (kind) {
    case ActivityKind::kHome: return "home";
    case ActivityKind::kWork: return "work";
    case ActivityKind::kEducation: return "education";
    case ActivityKind::kLeisure: return "leisure";
    case ActivityKind::kShop: return "shop";
  }
  return "?";
}

ActivityKind parse_activity_kind(std::string_view kind) {
  for (ActivityKind k : {ActivityKind::kHome, ActivityKind::kWork, ActivityKind::kEducation,
                         ActivityKind::kLeisure, ActivityKind::kShop}) {
    if (to_string(k) == kind) return k;
  }
  throw ValidationError("unknown activity kind '" + std::string(kind) + "'");
}

void validate_activity_chain(const std::vector<Activity>& activities) {
  if (activities.size() < 2) throw ValidationError("plan needs at least two activities");
  if (activities.front().kind != ActivityKind::kHome ||
      activities.back().kind != ActivityKind::kHome) {
    throw ValidationError("plan must start and end at home");
  }
  for (std::size_t i = 0; i < activities.size(); ++i) {
    const Activity& a = activities[i];
    const bool last = i + 1 == activities.size();
    if (!std::isfinite(a.location.x) || !std::isfinite(a.location.y)) {
      throw ValidationError("activity " + std::to_string(i) + " has non-finite location");
    }
    if (!(a.typical_duration > 0.0)) {
      throw ValidationError("activity " + std::to_string(i) + " needs typical_duration > 0");
    }
    if (last) {
      if (a.end_time) throw ValidationError("last activity must not carry an end time");
    } else {
      if (!a.end_time) throw ValidationError("activity " + std::to_string(i) + " lacks an end time");
      if (*a.end_time < 0.0 || *a.end_time > kSecondsPerDay) {
        throw ValidationError("activity " + std::to_string(i) + " end time outside [0, 86400]");
      }
    }
  }
}

void validate_plan(const Plan& plan, const Network* network) {
  validate_activity_chain(plan.activities);
  if (plan.legs.size() + 1 != plan.activities.size()) {
    throw ValidationError("plan must alternate activity/leg (" +
                          std::to_string(plan.activities.size()) + " activities, " +
                          std::to_string(plan.legs.size()) + " legs)");
  }
  for (std::size_t i = 0; i < plan.legs.size(); ++i) {
    const Leg& leg = plan.legs[i];
    const std::string name = "leg " + std::to_string(i);
    if (leg.travel_time < 0.0 || leg.distance < 0.0) {
      throw ValidationError(name + " has negative time or distance");
    }
    if (leg.mode != ModeTag::kCar && !leg.route.empty()) {
      throw ValidationError(name + " is teleported but carries a route");
    }
    if ((leg.mode == ModeTag::kUam) != leg.uam.has_value()) {
      throw ValidationError(name + " uam detail must be present iff mode is uam");
    }
    if (leg.mode == ModeTag::kCar && network != nullptr) {
      const LinkId origin = plan.activities[i].link;
      const LinkId dest = plan.activities[i + 1].link;
      if (origin == dest) {
        if (!leg.route.empty()) throw ValidationError(name + " has a route between identical links");
        continue;
      }
      if (leg.route.empty() || leg.route.back() != dest) {
        throw ValidationError(name + " route does not end on the destination link");
      }
      NodeId at = network->link(origin).to;
      for (LinkId l : leg.route) {
        if (l < 0 || static_cast<std::size_t>(l) >= network->link_count()) {
          throw ValidationError(name + " references missing link " + std::to_string(l));
        }
        if (network->link(l).from != at) {
          throw ValidationError(name + " route is not contiguous at link " + std::to_string(l));
        }
        at = network->link(l).to;
      }
    }
  }
}

}  // namespace vertiopt
