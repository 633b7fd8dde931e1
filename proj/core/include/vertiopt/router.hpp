#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "vertiopt/network.hpp"

namespace vertiopt {

// Mean observed link traversal times in fixed time-of-day bins. Bins without
// observations fall back to the freespeed traversal time.
class TravelTimeField {
 public:
  struct Traversal {
    LinkId link;
    double enter;
    double leave;
  };

  // Freespeed everywhere.
  explicit TravelTimeField(const Network& network, double bin_size = 900.0,
                           double horizon = 30.0 * 3600.0);

  static TravelTimeField from_traversals(const Network& network,
                                         const std::vector<Traversal>& traversals,
                                         double bin_size = 900.0,
                                         double horizon = 30.0 * 3600.0);

  // Expected traversal time when entering `link` at `enter_time`. Never below
  // the freespeed time. Times past the horizon use the last bin.
  double link_time(LinkId link, double enter_time) const {
    return times_[static_cast<std::size_t>(link) * bins_ + bin_of(enter_time)];
  }
  double freespeed_time(LinkId link) const {
    return freespeed_[static_cast<std::size_t>(link)];
  }

  std::size_t bins() const { return bins_; }
  double bin_size() const { return bin_size_; }
  std::size_t bin_of(double t) const {
    if (!(t > 0.0)) return 0;
    const auto b = static_cast<std::size_t>(t / bin_size_);
    return b < bins_ ? b : bins_ - 1;
  }

 private:
  double bin_size_;
  std::size_t bins_;
  std::vector<double> freespeed_;
  std::vector<double> times_;  // link-major
};

// Link cost used for routing.
class CostModel {
 public:
  enum class Kind { kDistance, kFreespeedTime, kTravelTime };

  static CostModel distance() { return CostModel(Kind::kDistance, nullptr); }
  static CostModel freespeed_time() { return CostModel(Kind::kFreespeedTime, nullptr); }
  static CostModel travel_time(const TravelTimeField& ttf) {
    return CostModel(Kind::kTravelTime, &ttf);
  }

  Kind kind() const { return kind_; }
  // Cost of traversing `link` when entering at `enter_time`.
  double cost(const Network& net, LinkId link, double enter_time) const;
  // Time spent on `link` when entering at `enter_time` (drives the clock).
  double time(const Network& net, LinkId link, double enter_time) const;
  // Admissible lower bound on the cost of covering `straight_line` meters.
  double lower_bound(const Network& net, double straight_line) const;

 private:
  CostModel(Kind k, const TravelTimeField* ttf) : kind_(k), ttf_(ttf) {}
  Kind kind_;
  const TravelTimeField* ttf_;
};

struct Route {
  std::vector<LinkId> links;
  double distance = 0.0;     // m, sum of link lengths
  double travel_time = 0.0;  // s, expected under the routing cost model's clock
  double cost = 0.0;         // objective value minimized by the search

  friend bool operator==(const Route&, const Route&) = default;
};

class UnreachableError : public std::runtime_error {
 public:
  UnreachableError(LinkId origin, LinkId dest);
  LinkId origin() const { return origin_; }
  LinkId dest() const { return dest_; }

 private:
  LinkId origin_;
  LinkId dest_;
};

// A* from the end of `origin_link` to the end of `dest_link`; the returned
// links exclude the origin link and always finish with the destination link.
// origin == dest yields an empty route. Equal-cost labels keep the
// predecessor with the smaller link id.
Route route_astar(const Network& net, ModeTag mode, LinkId origin_link, LinkId dest_link,
                  double departure_time, const CostModel& cost);

struct NodeCosts {
  std::vector<double> cost;      // +inf when unreached
  std::vector<double> distance;  // length of the least-cost path
};

// One-to-all static Dijkstra. Forward: from `source` to every node. Reverse:
// from every node to `source`. `link_costs` is indexed by link id.
NodeCosts node_costs(const Network& net, ModeTag mode, NodeId source,
                     const std::vector<double>& link_costs, bool reverse);

struct TeleportResult {
  double travel_time = 0.0;
  double distance = 0.0;
};

// Crow-fly distance times the mode's detour factor, at the mode's speed.
TeleportResult teleport_leg(const Mode& mode, const Coord& origin, const Coord& dest);

}  // namespace vertiopt
