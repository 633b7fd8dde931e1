#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "vertiopt/network.hpp"

namespace vertiopt {

enum class EventKind : std::uint8_t {
  kDeparture,
  kLinkEnter,
  kLinkLeave,
  kArrival,
  kUamBoard,
  kUamAlight,
};

std::string_view to_string(EventKind kind);

// One mobsim event. `where` is a link id, or a site id for uam_board/alight.
struct Event {
  double time = 0.0;
  EventKind kind = EventKind::kDeparture;
  AgentId agent = 0;
  std::int32_t where = 0;
  ModeTag mode = ModeTag::kCar;

  friend bool operator==(const Event&, const Event&) = default;
};

// CSV with header time,kind,agent,link_or_station,mode.
void write_events_csv(std::ostream& out, const std::vector<Event>& events);

}  // namespace vertiopt
