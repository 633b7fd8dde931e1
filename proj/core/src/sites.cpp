#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "vertiopt/rng.hpp"
#include "vertiopt/scenario.hpp"

namespace vertiopt {
namespace {

constexpr int kMaxSweeps = 100;

bool coord_less(const Coord& a, const Coord& b) {
  return a.x < b.x || (a.x == b.x && a.y < b.y);
}

std::size_t nearest_center(const Coord& p, const std::vector<Coord>& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = squared_distance(p, centers[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

}  // namespace

KMeansResult kmeans(std::span<const Coord> points, int k, std::uint64_t seed) {
  if (points.empty()) throw ValidationError("k-means: no points");
  if (k < 2) throw ValidationError("k-means: k must be at least 2");
  KMeansResult out;
  out.sorted_points.assign(points.begin(), points.end());
  std::sort(out.sorted_points.begin(), out.sorted_points.end(), coord_less);
  const auto& pts = out.sorted_points;
  std::size_t n_distinct = pts.empty() ? 0 : 1;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i] == pts[i - 1])) ++n_distinct;
  }
  const auto kk = static_cast<std::size_t>(k);
  if (n_distinct < kk) {
    throw ValidationError("k-means: " + std::to_string(n_distinct) +
                          " distinct points cannot form " + std::to_string(k) + " clusters");
  }

  // k-means++ seeding.
  Rng rng(seed);
  std::vector<Coord>& centers = out.centers;
  centers.push_back(pts[rng.below(pts.size())]);
  std::vector<double> d2(pts.size(), std::numeric_limits<double>::infinity());
  while (centers.size() < kk) {
    double total = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      d2[i] = std::min(d2[i], squared_distance(pts[i], centers.back()));
      total += d2[i];
    }
    double u = rng.uniform() * total;
    std::size_t pick = pts.size();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (d2[i] <= 0.0) continue;
      if (u < d2[i]) {
        pick = i;
        break;
      }
      u -= d2[i];
    }
    if (pick == pts.size()) {
      // Rounding left u past the end; take the last point not yet a center.
      for (std::size_t i = pts.size(); i > 0; --i) {
        if (d2[i - 1] > 0.0) {
          pick = i - 1;
          break;
        }
      }
    }
    centers.push_back(pts[pick]);
  }

  // Lloyd sweeps.
  std::vector<std::int32_t>& assign = out.assignment;
  assign.assign(pts.size(), -1);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool changed = false;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto c = static_cast<std::int32_t>(nearest_center(pts[i], centers));
      if (c != assign[i]) {
        assign[i] = c;
        changed = true;
      }
    }
    out.sweeps = sweep + 1;
    if (!changed) break;

    std::vector<double> sx(kk, 0.0), sy(kk, 0.0);
    std::vector<std::int32_t> count(kk, 0);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto c = static_cast<std::size_t>(assign[i]);
      sx[c] += pts[i].x;
      sy[c] += pts[i].y;
      ++count[c];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      if (count[c] > 0) {
        centers[c] = {sx[c] / count[c], sy[c] / count[c]};
        continue;
      }
      // Empty cluster: move it to the point farthest from its own center.
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double d = squared_distance(pts[i], centers[static_cast<std::size_t>(assign[i])]);
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      centers[c] = pts[far];
      assign[far] = static_cast<std::int32_t>(c);
    }
  }
  out.sizes.assign(kk, 0);
  for (std::int32_t c : assign) ++out.sizes[static_cast<std::size_t>(c)];
  return out;
}

CandidateSites derive_candidate_sites(std::span<const Coord> homes, int k, std::uint64_t seed,
                                      const Network& network, double min_separation) {
  if (homes.empty()) throw ValidationError("candidate sites: no homes given");
  const KMeansResult km = kmeans(homes, k, seed);

  std::vector<std::size_t> order(km.centers.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return km.sizes[a] > km.sizes[b];
  });
  std::vector<std::size_t> kept;
  for (std::size_t c : order) {
    if (km.sizes[c] == 0) continue;
    const bool clash = std::any_of(kept.begin(), kept.end(), [&](std::size_t other) {
      return distance(km.centers[c], km.centers[other]) < min_separation;
    });
    if (!clash) kept.push_back(c);
  }
  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    return coord_less(km.centers[a], km.centers[b]);
  });

  CandidateSites out;
  out.min_separation = min_separation;
  for (std::size_t c : kept) {
    CandidateSite s;
    s.id = static_cast<SiteId>(out.sites.size());
    s.coord = km.centers[c];
    s.link = network.nearest_link(s.coord, ModeTag::kCar);
    s.cluster_size = km.sizes[c];
    out.sites.push_back(s);
  }
  return out;
}

}  // namespace vertiopt
