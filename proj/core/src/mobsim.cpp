#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <string>

#include "vertiopt/simulator.hpp"

namespace vertiopt {
namespace {

constexpr double kHour = 3600.0;

enum class Action : std::uint8_t {
  kActivityEnd,  // start leg `leg`
  kLinkReady,    // vehicle reached the end of route[pos] at freespeed
  kLinkLeave,    // vehicle leaves route[pos]
  kTeleportArrival,
  kUamBoard,
  kUamAlight,
  kUamArrival,
};

struct Pending {
  double time;
  std::uint64_t seq;
  AgentId agent;
  Action action;

  bool operator>(const Pending& o) const {
    if (time != o.time) return time > o.time;
    return seq > o.seq;
  }
};

struct AgentCursor {
  std::size_t leg = 0;
  std::size_t pos = 0;  // index into the current car route
  double link_enter = 0.0;
};

// FIFO outflow throttle of one link.
struct LinkQueue {
  double next_slot = -1e300;
  std::deque<double> recent;  // leave times that can still bound the next one
};

double max_per_hour(double capacity) { return std::max(1.0, std::floor(capacity)); }

}  // namespace

MobsimResult execute_mobsim(std::span<Plan* const> plans, const Network& network,
                            const ModeTable& modes, bool record_events) {
  MobsimResult out;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue;
  std::uint64_t seq = 0;
  auto schedule = [&](double t, AgentId a, Action act) { queue.push({t, seq++, a, act}); };
  auto emit = [&](double t, EventKind kind, AgentId a, std::int32_t where, ModeTag mode) {
    if (record_events) out.events.push_back({t, kind, a, where, mode});
  };

  std::vector<AgentCursor> cursor(plans.size());
  std::vector<LinkQueue> links(network.link_count());

  for (std::size_t i = 0; i < plans.size(); ++i) {
    const Plan& p = *plans[i];
    if (p.legs.empty()) continue;
    schedule(p.activities.front().end_time.value_or(0.0), static_cast<AgentId>(i),
             Action::kActivityEnd);
  }

  auto finish_leg = [&](AgentId a, double t) {
    Plan& p = *plans[static_cast<std::size_t>(a)];
    AgentCursor& c = cursor[static_cast<std::size_t>(a)];
    Leg& leg = p.legs[c.leg];
    leg.travel_time = t - leg.departure_time;
    emit(t, EventKind::kArrival, a, p.activities[c.leg + 1].link, leg.mode);
    ++c.leg;
    if (c.leg < p.legs.size()) {
      const double planned_end = p.activities[c.leg].end_time.value_or(t);
      schedule(std::max(planned_end, t), a, Action::kActivityEnd);
    }
  };
  auto enter_link = [&](AgentId a, double t) {
    Plan& p = *plans[static_cast<std::size_t>(a)];
    AgentCursor& c = cursor[static_cast<std::size_t>(a)];
    const LinkId lid = p.legs[c.leg].route[c.pos];
    c.link_enter = t;
    emit(t, EventKind::kLinkEnter, a, lid, ModeTag::kCar);
    schedule(t + network.link(lid).freespeed_time(), a, Action::kLinkReady);
  };

  while (!queue.empty()) {
    const Pending ev = queue.top();
    queue.pop();
    const AgentId a = ev.agent;
    Plan& p = *plans[static_cast<std::size_t>(a)];
    AgentCursor& c = cursor[static_cast<std::size_t>(a)];
    Leg& leg = p.legs[c.leg];
    const double t = ev.time;

    switch (ev.action) {
      case Action::kActivityEnd: {
        leg.departure_time = t;
        emit(t, EventKind::kDeparture, a, p.activities[c.leg].link, leg.mode);
        const Mode& mode = modes[leg.mode];
        if (mode.kind == ModeKind::kNetwork) {
          double dist = 0.0;
          for (LinkId l : leg.route) dist += network.link(l).length;
          leg.distance = dist;
          c.pos = 0;
          if (leg.route.empty()) {
            finish_leg(a, t);
          } else {
            enter_link(a, t);
          }
        } else if (mode.kind == ModeKind::kTeleported) {
          const TeleportResult r = teleport_leg(mode, p.activities[c.leg].location,
                                                p.activities[c.leg + 1].location);
          leg.distance = r.distance;
          schedule(t + r.travel_time, a, Action::kTeleportArrival);
        } else {
          const UamDetail& u = leg.uam.value();
          leg.distance = u.total_distance();
          schedule(t + u.access_time + u.process_time, a, Action::kUamBoard);
        }
        break;
      }
      case Action::kLinkReady: {
        const LinkId lid = leg.route[c.pos];
        const Link& link = network.link(lid);
        LinkQueue& q = links[static_cast<std::size_t>(lid)];
        double leave = std::max(t, q.next_slot);
        const auto window = static_cast<std::size_t>(max_per_hour(link.flow_capacity));
        while (!q.recent.empty() && q.recent.front() + kHour <= leave) q.recent.pop_front();
        if (q.recent.size() >= window) {
          leave = std::max(leave, q.recent[q.recent.size() - window] + kHour);
        }
        q.recent.push_back(leave);
        while (q.recent.size() > window) q.recent.pop_front();
        q.next_slot = leave + kHour / link.flow_capacity;
        schedule(leave, a, Action::kLinkLeave);
        break;
      }
      case Action::kLinkLeave: {
        const LinkId lid = leg.route[c.pos];
        emit(t, EventKind::kLinkLeave, a, lid, ModeTag::kCar);
        out.traversals.push_back({lid, c.link_enter, t});
        ++c.pos;
        if (c.pos == leg.route.size()) {
          finish_leg(a, t);
        } else {
          enter_link(a, t);
        }
        break;
      }
      case Action::kTeleportArrival:
        finish_leg(a, t);
        break;
      case Action::kUamBoard: {
        const UamDetail& u = leg.uam.value();
        emit(t, EventKind::kUamBoard, a, u.origin_station, ModeTag::kUam);
        schedule(leg.departure_time + u.access_time + u.fly_time - u.process_time, a,
                 Action::kUamAlight);
        break;
      }
      case Action::kUamAlight: {
        const UamDetail& u = leg.uam.value();
        emit(t, EventKind::kUamAlight, a, u.dest_station, ModeTag::kUam);
        schedule(leg.departure_time + u.total_time(), a, Action::kUamArrival);
        break;
      }
      case Action::kUamArrival:
        finish_leg(a, t);
        break;
    }
  }
  return out;
}

AuditReport audit_events(const std::vector<Event>& events, const Network& network,
                         std::size_t agent_count, std::span<Plan* const> plans) {
  AuditReport report;
  auto fail_conservation = [&](const std::string& what) {
    if (report.conservation_ok) report.detail += what + "; ";
    report.conservation_ok = false;
  };
  std::vector<int> open(agent_count, 0);
  std::vector<double> last_time(agent_count, -1e300);
  std::vector<std::int32_t> last_arrival(agent_count, -1);
  std::vector<std::int64_t> departures(agent_count, 0);
  std::vector<std::vector<double>> leaves(network.link_count());

  for (const Event& e : events) {
    if (e.agent < 0 || static_cast<std::size_t>(e.agent) >= agent_count) {
      fail_conservation("event for unknown agent " + std::to_string(e.agent));
      continue;
    }
    const auto a = static_cast<std::size_t>(e.agent);
    if (e.time < last_time[a]) fail_conservation("agent " + std::to_string(a) + " goes back in time");
    last_time[a] = e.time;
    switch (e.kind) {
      case EventKind::kDeparture:
        if (open[a] != 0) fail_conservation("agent " + std::to_string(a) + " departs twice");
        ++open[a];
        ++departures[a];
        break;
      case EventKind::kArrival:
        if (open[a] != 1) fail_conservation("agent " + std::to_string(a) + " arrives without departing");
        --open[a];
        last_arrival[a] = e.where;
        break;
      case EventKind::kLinkLeave:
        leaves[static_cast<std::size_t>(e.where)].push_back(e.time);
        break;
      default:
        break;
    }
  }
  for (std::size_t a = 0; a < agent_count; ++a) {
    if (open[a] != 0) fail_conservation("agent " + std::to_string(a) + " never arrives");
    if (a < plans.size() && plans[a] != nullptr) {
      const Plan& p = *plans[a];
      if (departures[a] != static_cast<std::int64_t>(p.legs.size())) {
        fail_conservation("agent " + std::to_string(a) + " executed a partial day");
      } else if (!p.legs.empty() && last_arrival[a] != p.activities.back().link) {
        fail_conservation("agent " + std::to_string(a) + " ends away from its last activity");
      }
    }
  }

  for (std::size_t l = 0; l < leaves.size(); ++l) {
    auto& times = leaves[l];
    std::sort(times.begin(), times.end());
    const auto window = static_cast<std::size_t>(max_per_hour(network.link(static_cast<LinkId>(l)).flow_capacity));
    for (std::size_t i = 0; i + window < times.size(); ++i) {
      if (times[i + window] < times[i] + kHour) {
        report.flow_bound_ok = false;
        report.detail += "link " + std::to_string(l) + " exceeds its hourly capacity at t=" +
                         std::to_string(times[i]) + "; ";
        break;
      }
    }
  }
  return report;
}

}  // namespace vertiopt
