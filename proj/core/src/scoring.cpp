#include <cmath>
#include <string>

#include "vertiopt/simulator.hpp"

namespace vertiopt {
namespace {

double performing(double utility_per_hour, double typical, double duration) {
  // Zero utility at typical * e^-1; one typical-hour worth at the typical duration.
  const double zero_point = typical * std::exp(-1.0);
  return utility_per_hour * (typical / 3600.0) * std::log(std::max(duration, 1.0) / zero_point);
}

}  // namespace

ScoringParams ScoringParams::from_modes(const ModeTable& table, double performing_utility,
                                        double uam_fare_per_km) {
  ScoringParams p;
  p.performing = performing_utility;
  p.uam_fare_per_km = uam_fare_per_km;
  for (ModeTag t : kAllModes) {
    p.modes[static_cast<std::size_t>(t)] = {table[t].marginal_utility_of_travel_time,
                                            table[t].mode_constant};
  }
  return p;
}

void ScoringParams::validate() const {
  if (!(performing > 0.0)) throw ValidationError("scoring: performing utility must be > 0");
  for (ModeTag t : kAllModes) {
    if (!((*this)[t].travel_time <= 0.0)) {
      throw ValidationError("scoring: travel time utility of " + std::string(to_string(t)) +
                            " must be <= 0");
    }
  }
}

double leg_utility(const Leg& leg, const ScoringParams& params) {
  const ModeUtility& u = params[leg.mode];
  double v = u.constant + u.travel_time * leg.travel_time / 3600.0;
  if (leg.mode == ModeTag::kUam && leg.uam) v += params.uam_fare_per_km * leg.uam->fly_distance / 1000.0;
  return v;
}

double score_plan(const Plan& plan, const ScoringParams& params) {
  const auto& acts = plan.activities;
  const auto& legs = plan.legs;
  if (acts.size() < 2 || legs.size() + 1 != acts.size()) {
    throw ValidationError("score_plan: malformed plan");
  }
  double score = 0.0;
  for (std::size_t i = 0; i < legs.size(); ++i) {
    const Leg& leg = legs[i];
    if (leg.travel_time < 0.0 || leg.distance < 0.0) {
      throw ValidationError("score_plan: leg " + std::to_string(i) + " has negative executed time");
    }
    score += leg_utility(leg, params);
  }

  auto arrival = [&](std::size_t leg) { return legs[leg].departure_time + legs[leg].travel_time; };
  const std::size_t last = acts.size() - 1;
  for (std::size_t k = 1; k < last; ++k) {
    const double duration = legs[k].departure_time - arrival(k - 1);
    score += performing(params.performing, acts[k].typical_duration, duration);
  }
  const double first_end = legs.front().departure_time;
  const double last_start = arrival(last - 1);
  if (acts.front().kind == acts.back().kind) {
    score += performing(params.performing, acts.front().typical_duration,
                        first_end + kSecondsPerDay - last_start);
  } else {
    score += performing(params.performing, acts.front().typical_duration, first_end);
    score += performing(params.performing, acts.back().typical_duration,
                        kSecondsPerDay - last_start);
  }
  return score;
}

}  // namespace vertiopt
