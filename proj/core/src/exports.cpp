#include "vertiopt/exports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "vertiopt/events.hpp"
#include "vertiopt/version.hpp"

namespace vertiopt {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kDeparture: return "departure";
    case EventKind::kLinkEnter: return "link_enter";
    case EventKind::kLinkLeave: return "link_leave";
    case EventKind::kArrival: return "arrival";
    case EventKind::kUamBoard: return "uam_board";
    case EventKind::kUamAlight: return "uam_alight";
  }
  return "unknown";
}

std::string format_number(double value) {
  if (value == 0.0) return "0";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

void write_events_csv(std::ostream& out, const std::vector<Event>& events) {
  out << "time,kind,agent,link_or_station,mode\n";
  for (const Event& e : events) {
    out << format_number(e.time) << ',' << to_string(e.kind) << ',' << e.agent << ',' << e.where
        << ',' << to_string(e.mode) << '\n';
  }
}

void write_stats_csv(std::ostream& out, const std::vector<IterationStats>& stats) {
  out << "iteration,total_travel_time_s,total_travel_distance_m,mean_score,uam_legs\n";
  for (const IterationStats& s : stats) {
    out << s.iteration << ',' << format_number(s.total_travel_time) << ','
        << format_number(s.total_travel_distance) << ',' << format_number(s.mean_score) << ','
        << s.uam_legs << '\n';
  }
}

void write_demand_csv(std::ostream& out, const std::map<SiteId, std::int64_t>& demand) {
  out << "site_id,demand\n";
  for (const auto& [site, d] : demand) out << site << ',' << d << '\n';
}

void write_front_csv(std::ostream& out, const ParetoFront& front) {
  out << "genome_bits,f1,f2,f1_normalized,is_extreme_f1,is_extreme_f2,is_knee\n";
  for (std::size_t i = 0; i < front.members.size(); ++i) {
    const FrontMember& m = front.members[i];
    out << genome_to_string(m.genome) << ',' << format_number(m.f1) << ',' << m.f2 << ','
        << format_number(m.f1_normalized) << ',' << (i == front.extreme_f1) << ','
        << (i == front.extreme_f2) << ',' << (i == front.knee) << '\n';
  }
}

void write_generation_log_csv(std::ostream& out, const std::vector<GenerationLog>& log) {
  out << "generation,best_f1,min_f2,hypervolume\n";
  for (const GenerationLog& g : log) {
    out << g.generation << ',' << format_number(g.best_f1) << ',' << g.min_f2 << ','
        << format_number(g.hypervolume) << '\n';
  }
}

void write_selection_csv(std::ostream& out, const std::vector<SiteId>& order,
                         const std::vector<std::int64_t>& gains) {
  out << "site_id,order,gain\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    out << order[i] << ',' << i << ',' << (i < gains.size() ? gains[i] : 0) << '\n';
  }
}

std::string network_geojson(const Scenario& scenario, const Genome& genome, const EvtolParams& evtol) {
  using nlohmann::json;
  const auto& sites = scenario.candidate_sites;
  if (genome.size() != sites.size()) throw ValidationError("genome does not match the candidate sites");
  json features = json::array();
  for (const CandidateSite& s : sites.sites) {
    features.push_back({{"type", "Feature"},
                        {"geometry", {{"type", "Point"}, {"coordinates", {s.coord.x, s.coord.y}}}},
                        {"properties",
                         {{"site_id", s.id},
                          {"active", genome[static_cast<std::size_t>(s.id)] != 0},
                          {"cluster_size", s.cluster_size}}}});
  }
  const std::vector<SiteId> active = active_sites(genome);
  for (const auto& [a, b] : feasible_station_pairs(sites, active, evtol)) {
    const Coord& ca = sites.sites[static_cast<std::size_t>(a)].coord;
    const Coord& cb = sites.sites[static_cast<std::size_t>(b)].coord;
    features.push_back(
        {{"type", "Feature"},
         {"geometry", {{"type", "LineString"}, {"coordinates", {{ca.x, ca.y}, {cb.x, cb.y}}}}},
         {"properties", {{"from", a}, {"to", b}, {"length_m", distance(ca, cb)}}}});
  }
  json doc = {{"type", "FeatureCollection"},
              {"crs", {{"type", "name"}, {"properties", {{"name", "planar-meters"}}}}},
              {"features", features}};
  return doc.dump(1);
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(2);
  ss << v;
  return ss.str();
}

}  // namespace

std::string render_svg(const PlotSpec& plot) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd"};
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const Series& s : plot.series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kW - kLeft - kRight); };
  auto py = [&](double y) { return kH - kBottom - (y - y0) / (y1 - y0) * (kH - kTop - kBottom); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
    << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
    << xml_escape(plot.title) << "</text>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight << "\" y2=\""
    << kH - kBottom << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kH - kBottom
    << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double xv = x0 + (x1 - x0) * t / 4.0;
    const double yv = y0 + (y1 - y0) * t / 4.0;
    o << "<text x=\"" << fixed(px(xv)) << "\" y=\"" << kH - kBottom + 16
      << "\" text-anchor=\"middle\">" << format_number(std::round(xv * 100) / 100) << "</text>\n";
    o << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(yv) + 4) << "\" text-anchor=\"end\">"
      << format_number(std::round(yv * 100) / 100) << "</text>\n";
  }
  o << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">"
    << xml_escape(plot.x_label) << "</text>\n";
  o << "<text transform=\"translate(16," << kH / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
    << xml_escape(plot.y_label) << "</text>\n";
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const Series& s = plot.series[k];
    const char* color = kColors[k % 5];
    const std::size_t n = std::min(s.x.size(), s.y.size());
    if (s.lines && n > 1) {
      o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      for (std::size_t i = 0; i < n; ++i) o << (i ? " " : "") << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i]));
      o << "\"/>\n";
    }
    for (std::size_t i = 0; i < n; ++i) {
      o << "<circle cx=\"" << fixed(px(s.x[i])) << "\" cy=\"" << fixed(py(s.y[i])) << "\" r=\"4\" fill=\""
        << color << "\"/>\n";
    }
    o << "<text x=\"" << kW - kRight - 4 << "\" y=\"" << kTop + 14 * (k + 1) << "\" text-anchor=\"end\" fill=\""
      << color << "\">" << xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::string manifest_json(const RunManifest& m) {
  using nlohmann::json;
  json doc = {{"command", m.command},
              {"argv", m.argv},
              {"config_path", m.config_path},
              {"seeds", m.seeds},
              {"inputs", m.inputs},
              {"outputs", m.outputs},
              {"tool_version", kVersion},
              {"scenario_hash", m.scenario_hash},
              {"wall_time_s", m.wall_time_s}};
  return doc.dump(2);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace vertiopt
