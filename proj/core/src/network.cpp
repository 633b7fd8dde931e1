#include "vertiopt/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vertiopt {

std::string_view to_string(ModeTag tag) {
  switch (tag) {
    case ModeTag::kCar: return "car";
    case ModeTag::kWalk: return "walk";
    case ModeTag::kBike: return "bike";
    case ModeTag::kPt: return "pt";
    case ModeTag::kUam: return "uam";
  }
  return "?";
}

ModeTag parse_mode_tag(std::string_view tag) {
  for (ModeTag t : kAllModes) {
    if (to_string(t) == tag) return t;
  }
  throw ValidationError("unknown mode tag '" + std::string(tag) + "'");
}

std::string_view to_string(ModeKind kind) {
  switch (kind) {
    case ModeKind::kNetwork: return "network";
    case ModeKind::kTeleported: return "teleported";
    case ModeKind::kUamComposite: return "uam-composite";
  }
  return "?";
}

ModeKind parse_mode_kind(std::string_view kind) {
  for (ModeKind k : {ModeKind::kNetwork, ModeKind::kTeleported, ModeKind::kUamComposite}) {
    if (to_string(k) == kind) return k;
  }
  throw ValidationError("unknown mode kind '" + std::string(kind) + "'");
}

ModeTable ModeTable::defaults() {
  ModeTable t;
  t[ModeTag::kCar] = {ModeTag::kCar, ModeKind::kNetwork, 0.0, 1.0, -6.0, 0.0};
  t[ModeTag::kWalk] = {ModeTag::kWalk, ModeKind::kTeleported, 1.34, 1.3, -2.0, 0.0};
  t[ModeTag::kBike] = {ModeTag::kBike, ModeKind::kTeleported, 4.1, 1.3, -3.0, -0.5};
  t[ModeTag::kPt] = {ModeTag::kPt, ModeKind::kTeleported, 20.0, 1.3, -4.0, -0.5};
  t[ModeTag::kUam] = {ModeTag::kUam, ModeKind::kUamComposite, 0.0, 1.0, -6.0, -2.0};
  return t;
}

void ModeTable::validate() const {
  for (ModeTag tag : kAllModes) {
    const Mode& m = (*this)[tag];
    const std::string name(to_string(tag));
    if (m.tag != tag) throw ValidationError("mode table slot '" + name + "' holds another tag");
    const ModeKind expected = tag == ModeTag::kCar   ? ModeKind::kNetwork
                              : tag == ModeTag::kUam ? ModeKind::kUamComposite
                                                     : ModeKind::kTeleported;
    if (m.kind != expected) {
      throw ValidationError("mode '" + name + "' must be " + std::string(to_string(expected)));
    }
    if (m.kind == ModeKind::kTeleported) {
      if (!(m.teleport_speed > 0.0)) {
        throw ValidationError("mode '" + name + "' needs teleport_speed > 0");
      }
      if (!(m.detour_factor >= 1.0)) {
        throw ValidationError("mode '" + name + "' needs detour_factor >= 1");
      }
    }
    if (!(m.marginal_utility_of_travel_time <= 0.0)) {
      throw ValidationError("mode '" + name + "' travel-time utility must be <= 0");
    }
    if (!std::isfinite(m.mode_constant)) {
      throw ValidationError("mode '" + name + "' constant must be finite");
    }
  }
}

Network::Network(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  index();
}

void Network::index() {
  out_.assign(nodes_.size(), {});
  in_.assign(nodes_.size(), {});
  max_freespeed_ = 0.0;
  for (const Link& l : links_) {
    if (l.from >= 0 && static_cast<std::size_t>(l.from) < nodes_.size()) {
      out_[static_cast<std::size_t>(l.from)].push_back(l.id);
    }
    if (l.to >= 0 && static_cast<std::size_t>(l.to) < nodes_.size()) {
      in_[static_cast<std::size_t>(l.to)].push_back(l.id);
    }
    max_freespeed_ = std::max(max_freespeed_, l.freespeed);
  }
  constexpr double inf = std::numeric_limits<double>::infinity();
  min_corner_ = {inf, inf};
  max_corner_ = {-inf, -inf};
  for (const Node& n : nodes_) {
    min_corner_.x = std::min(min_corner_.x, n.coord.x);
    min_corner_.y = std::min(min_corner_.y, n.coord.y);
    max_corner_.x = std::max(max_corner_.x, n.coord.x);
    max_corner_.y = std::max(max_corner_.y, n.coord.y);
  }
}

bool Network::contains(const Coord& c) const {
  return c.x >= min_corner_.x && c.x <= max_corner_.x && c.y >= min_corner_.y &&
         c.y <= max_corner_.y;
}

LinkId Network::nearest_link(const Coord& c, ModeTag mode) const {
  LinkId best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Link& l : links_) {
    if (!l.allowed_modes.contains(mode)) continue;
    const double d = segment_distance(c, node(l.from).coord, node(l.to).coord);
    if (d < best_d) {
      best_d = d;
      best = l.id;
    }
  }
  if (best < 0) throw ValidationError("network has no link allowing " + std::string(to_string(mode)));
  return best;
}

void Network::validate() const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const Node& n = nodes_[i];
    if (n.id != static_cast<NodeId>(i)) {
      throw ValidationError("node at position " + std::to_string(i) + " has id " +
                            std::to_string(n.id) + "; ids must equal positions");
    }
    if (!std::isfinite(n.coord.x) || !std::isfinite(n.coord.y)) {
      throw ValidationError("node " + std::to_string(n.id) + " has non-finite coordinates");
    }
  }
  const auto n_nodes = static_cast<NodeId>(nodes_.size());
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const Link& l = links_[i];
    const std::string name = "link " + std::to_string(l.id);
    if (l.id != static_cast<LinkId>(i)) {
      throw ValidationError("link at position " + std::to_string(i) + " has id " +
                            std::to_string(l.id) + "; ids must equal positions");
    }
    if (l.from < 0 || l.from >= n_nodes || l.to < 0 || l.to >= n_nodes) {
      throw ValidationError(name + " references a missing node");
    }
    if (!(l.length > 0.0) || !std::isfinite(l.length)) {
      throw ValidationError(name + " has non-positive length " + std::to_string(l.length));
    }
    const double straight = distance(node(l.from).coord, node(l.to).coord);
    if (l.length < straight * 0.99) {
      throw ValidationError(name + " is shorter than the straight line between its nodes");
    }
    if (!(l.freespeed > 0.0) || !std::isfinite(l.freespeed)) {
      throw ValidationError(name + " has non-positive freespeed");
    }
    if (!(l.flow_capacity > 0.0) || !std::isfinite(l.flow_capacity)) {
      throw ValidationError(name + " has non-positive flow capacity");
    }
    if (l.allowed_modes.empty()) throw ValidationError(name + " allows no modes");
  }
}

}  // namespace vertiopt
