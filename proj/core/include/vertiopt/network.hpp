#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vertiopt/geometry.hpp"

namespace vertiopt {

using NodeId = std::int32_t;
using LinkId = std::int32_t;
using SiteId = std::int32_t;
using AgentId = std::int32_t;

inline constexpr double kSecondsPerDay = 86400.0;

// Raised when a scenario, plan or config breaks a documented invariant.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ModeTag : std::uint8_t { kCar = 0, kWalk, kBike, kPt, kUam };
inline constexpr std::size_t kModeCount = 5;
inline constexpr std::array<ModeTag, kModeCount> kAllModes = {
    ModeTag::kCar, ModeTag::kWalk, ModeTag::kBike, ModeTag::kPt, ModeTag::kUam};

std::string_view to_string(ModeTag tag);
// Throws ValidationError naming the tag when unknown.
ModeTag parse_mode_tag(std::string_view tag);

enum class ModeKind : std::uint8_t { kNetwork, kTeleported, kUamComposite };

std::string_view to_string(ModeKind kind);
ModeKind parse_mode_kind(std::string_view kind);

struct Mode {
  ModeTag tag = ModeTag::kCar;
  ModeKind kind = ModeKind::kNetwork;
  double teleport_speed = 0.0;  // m/s, teleported only
  double detour_factor = 1.0;   // teleported only
  double marginal_utility_of_travel_time = 0.0;  // utils/hour
  double mode_constant = 0.0;                    // utils

  friend bool operator==(const Mode&, const Mode&) = default;
};

// Exactly one Mode per tag, indexed by tag.
class ModeTable {
 public:
  // car/walk/bike/pt/uam with the stock speeds and utilities.
  static ModeTable defaults();

  const Mode& operator[](ModeTag tag) const { return modes_[index(tag)]; }
  Mode& operator[](ModeTag tag) { return modes_[index(tag)]; }
  const std::array<Mode, kModeCount>& all() const { return modes_; }

  void validate() const;

  friend bool operator==(const ModeTable&, const ModeTable&) = default;

 private:
  static std::size_t index(ModeTag tag) { return static_cast<std::size_t>(tag); }
  std::array<Mode, kModeCount> modes_{};
};

// Bit set of mode tags.
class ModeSet {
 public:
  ModeSet() = default;
  ModeSet(std::initializer_list<ModeTag> tags) {
    for (ModeTag t : tags) insert(t);
  }
  void insert(ModeTag t) { bits_ |= bit(t); }
  bool contains(ModeTag t) const { return (bits_ & bit(t)) != 0; }
  bool empty() const { return bits_ == 0; }
  friend bool operator==(const ModeSet&, const ModeSet&) = default;

 private:
  static std::uint8_t bit(ModeTag t) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(t));
  }
  std::uint8_t bits_ = 0;
};

struct Node {
  NodeId id = 0;
  Coord coord;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Link {
  LinkId id = 0;
  NodeId from = 0;
  NodeId to = 0;
  double length = 0.0;         // m
  double freespeed = 0.0;      // m/s
  double flow_capacity = 0.0;  // veh/h
  ModeSet allowed_modes;

  double freespeed_time() const { return length / freespeed; }
  friend bool operator==(const Link&, const Link&) = default;
};

// Directed road graph. Node and link ids equal their index.
class Network {
 public:
  Network() = default;
  Network(std::vector<Node> nodes, std::vector<Link> links);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const Node& node(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
  const Link& link(LinkId id) const { return links_[static_cast<std::size_t>(id)]; }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }

  const std::vector<LinkId>& out_links(NodeId n) const {
    return out_[static_cast<std::size_t>(n)];
  }
  const std::vector<LinkId>& in_links(NodeId n) const {
    return in_[static_cast<std::size_t>(n)];
  }

  double max_freespeed() const { return max_freespeed_; }
  Coord min_corner() const { return min_corner_; }
  Coord max_corner() const { return max_corner_; }
  bool contains(const Coord& c) const;

  // Nearest link (segment distance) allowing `mode`; ties go to the lowest id.
  LinkId nearest_link(const Coord& c, ModeTag mode = ModeTag::kCar) const;

  // Checks ids, endpoint references, finite coordinates and the link
  // length/speed/capacity invariants. Throws ValidationError naming the item.
  void validate() const;

  friend bool operator==(const Network& a, const Network& b) {
    return a.nodes_ == b.nodes_ && a.links_ == b.links_;
  }

 private:
  void index();

  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::vector<std::vector<LinkId>> out_;
  std::vector<std::vector<LinkId>> in_;
  double max_freespeed_ = 0.0;
  Coord min_corner_;
  Coord max_corner_;
};

}  // namespace vertiopt
