#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

#include "vertiopt/optimizer.hpp"

namespace vertiopt {

int popcount(const Genome& genome) {
  return static_cast<int>(std::count_if(genome.begin(), genome.end(), [](std::uint8_t b) { return b != 0; }));
}

std::vector<SiteId> active_sites(const Genome& genome) {
  std::vector<SiteId> out;
  for (std::size_t j = 0; j < genome.size(); ++j) {
    if (genome[j]) out.push_back(static_cast<SiteId>(j));
  }
  return out;
}

std::string genome_to_string(const Genome& genome) {
  std::string s(genome.size(), '0');
  for (std::size_t j = 0; j < genome.size(); ++j) {
    if (genome[j]) s[j] = '1';
  }
  return s;
}

Genome genome_from_string(const std::string& bits) {
  Genome g;
  g.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw ValidationError("genome string may contain only 0 and 1");
    g.push_back(c == '1' ? 1 : 0);
  }
  return g;
}

bool dominates(const MinPoint& p, const MinPoint& q) {
  return p.a <= q.a && p.b <= q.b && (p.a < q.a || p.b < q.b);
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::span<const MinPoint> points) {
  const std::size_t n = points.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> count(n, 0);
  std::vector<std::vector<std::size_t>> fronts;
  std::vector<std::size_t> current;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(points[p], points[q])) {
        dominated[p].push_back(q);
      } else if (dominates(points[q], points[p])) {
        ++count[p];
      }
    }
    if (count[p] == 0) current.push_back(p);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t p : current) {
      for (std::size_t q : dominated[p]) {
        if (--count[q] == 0) next.push_back(q);
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return fronts;
}

std::vector<double> crowding_distance(std::span<const MinPoint> front) {
  const std::size_t n = front.size();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
    return dist;
  }
  std::vector<std::size_t> order(n);
  for (int m = 0; m < 2; ++m) {
    auto key = [&](std::size_t i) {
      return m == 0 ? std::pair{front[i].a, front[i].b} : std::pair{front[i].b, front[i].a};
    };
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return key(x) < key(y); });
    const double lo = key(order.front()).first;
    const double hi = key(order.back()).first;
    dist[order.front()] = std::numeric_limits<double>::infinity();
    dist[order.back()] = std::numeric_limits<double>::infinity();
    if (hi <= lo) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      dist[order[k]] += (key(order[k + 1]).first - key(order[k - 1]).first) / (hi - lo);
    }
  }
  return dist;
}

double hypervolume(std::span<const Objectives> points, double ref_f2) {
  std::vector<Objectives> pts(points.begin(), points.end());
  std::sort(pts.begin(), pts.end(), [](const Objectives& x, const Objectives& y) {
    return x.f2 != y.f2 ? x.f2 < y.f2 : x.f1 > y.f1;
  });
  double area = 0.0;
  double covered_f1 = 0.0;
  for (const Objectives& o : pts) {
    if (o.f2 >= ref_f2 || o.f1 <= covered_f1) continue;
    area += (o.f1 - covered_f1) * (ref_f2 - o.f2);
    covered_f1 = o.f1;
  }
  return area;
}

Genome repair(Genome genome, int max_active, Rng& rng) {
  std::vector<std::size_t> on;
  for (std::size_t j = 0; j < genome.size(); ++j) {
    if (genome[j]) on.push_back(j);
  }
  while (on.size() > static_cast<std::size_t>(std::max(max_active, 0))) {
    const std::size_t k = static_cast<std::size_t>(rng.below(on.size()));
    genome[on[k]] = 0;
    on.erase(on.begin() + static_cast<std::ptrdiff_t>(k));
  }
  if (on.empty() && max_active >= 1 && !genome.empty()) genome[rng.below(genome.size())] = 1;
  return genome;
}

void NsgaConfig::validate() const {
  if (generations < 1) throw ValidationError("nsga config: generations must be >= 1");
  if (population < 2 || population % 2 != 0) {
    throw ValidationError("nsga config: population must be even and >= 2");
  }
  if (crossover_rate < 0.0 || crossover_rate > 1.0) {
    throw ValidationError("nsga config: crossover_rate outside [0, 1]");
  }
  if (mutation_rate > 1.0) throw ValidationError("nsga config: mutation_rate above 1");
  if (tournament_size < 1) throw ValidationError("nsga config: tournament_size must be >= 1");
  if (max_active < 1) throw ValidationError("nsga config: max_active must be >= 1");
  if (replications < 1) throw ValidationError("nsga config: replications must be >= 1");
}

// ----------------------------------------------------------------- front

std::size_t knee_point(std::span<const FrontMember> front) {
  if (front.empty()) throw ValidationError("knee point of an empty front");
  std::size_t f1_star = 0;
  std::size_t f2_star = 0;
  for (std::size_t i = 1; i < front.size(); ++i) {
    if (front[i].f1 > front[f1_star].f1) f1_star = i;
    if (front[i].f2 < front[f2_star].f2 ||
        (front[i].f2 == front[f2_star].f2 && front[i].f1 > front[f2_star].f1)) {
      f2_star = i;
    }
  }
  if (front.size() <= 2) return f1_star;
  double f1_lo = front[0].f1, f1_hi = front[0].f1;
  double f2_lo = front[0].f2, f2_hi = front[0].f2;
  for (const FrontMember& m : front) {
    f1_lo = std::min(f1_lo, m.f1);
    f1_hi = std::max(f1_hi, m.f1);
    f2_lo = std::min<double>(f2_lo, m.f2);
    f2_hi = std::max<double>(f2_hi, m.f2);
  }
  if (f1_hi <= f1_lo || f2_hi <= f2_lo) return f1_star;
  auto norm = [&](const FrontMember& m) {
    return std::pair{(m.f1 - f1_lo) / (f1_hi - f1_lo), (m.f2 - f2_lo) / (f2_hi - f2_lo)};
  };
  const auto [ax, ay] = norm(front[f2_star]);
  const auto [bx, by] = norm(front[f1_star]);
  const double len = std::hypot(bx - ax, by - ay);
  if (len == 0.0) return f1_star;

  std::size_t best = f1_star;
  double best_d = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < front.size(); ++i) {
    const auto [px, py] = norm(front[i]);
    const double d = -((bx - ax) * (py - ay) - (by - ay) * (px - ax)) / len;
    if (d > best_d + 1e-12 || (std::abs(d - best_d) <= 1e-12 && front[i].f1 > front[best].f1)) {
      best_d = std::max(d, best_d);
      best = i;
    }
  }
  return best;
}

ParetoFront build_front(std::span<const Individual> candidates, std::optional<double> f1_max) {
  std::vector<const Individual*> unique;
  std::set<Genome> seen;
  for (const Individual& c : candidates) {
    if (seen.insert(c.genome).second) unique.push_back(&c);
  }
  std::vector<MinPoint> pts;
  for (const Individual* c : unique) pts.push_back(to_min(c->objectives));
  ParetoFront front;
  if (unique.empty()) return front;
  const auto fronts = non_dominated_sort(pts);
  for (std::size_t i : fronts.front()) {
    front.members.push_back({unique[i]->genome, unique[i]->objectives.f1, unique[i]->objectives.f2, 0.0});
  }
  std::sort(front.members.begin(), front.members.end(), [](const FrontMember& x, const FrontMember& y) {
    if (x.f2 != y.f2) return x.f2 < y.f2;
    if (x.f1 != y.f1) return x.f1 > y.f1;
    return x.genome < y.genome;
  });
  front.extreme_f2 = 0;
  front.extreme_f1 = 0;
  for (std::size_t i = 1; i < front.members.size(); ++i) {
    if (front.members[i].f1 > front.members[front.extreme_f1].f1) front.extreme_f1 = i;
  }
  front.f1_max = f1_max.value_or(front.members[front.extreme_f1].f1);
  for (FrontMember& m : front.members) {
    m.f1_normalized = front.f1_max > 0.0 ? m.f1 / front.f1_max : 0.0;
  }
  front.knee = knee_point(front.members);
  return front;
}

// ---------------------------------------------------------------- NSGA-II

namespace {

void assign_rank_and_crowding(std::vector<Individual>& pop) {
  std::vector<MinPoint> pts;
  for (const Individual& ind : pop) pts.push_back(to_min(ind.objectives));
  const auto fronts = non_dominated_sort(pts);
  for (std::size_t r = 0; r < fronts.size(); ++r) {
    std::vector<MinPoint> fp;
    for (std::size_t i : fronts[r]) fp.push_back(pts[i]);
    const auto cd = crowding_distance(fp);
    for (std::size_t k = 0; k < fronts[r].size(); ++k) {
      pop[fronts[r][k]].rank = static_cast<int>(r);
      pop[fronts[r][k]].crowding = cd[k];
    }
  }
}

bool better(const Individual& x, const Individual& y) {
  if (x.rank != y.rank) return x.rank < y.rank;
  return x.crowding > y.crowding;
}

const Individual& tournament(const std::vector<Individual>& pop, int size, Rng& rng) {
  const Individual* best = &pop[rng.below(pop.size())];
  for (int k = 1; k < size; ++k) {
    const Individual& c = pop[rng.below(pop.size())];
    if (better(c, *best)) best = &c;
  }
  return *best;
}

// Best mu of parents + offspring by rank then crowding, each genome once
// unless there are fewer than mu distinct genomes.
std::vector<Individual> environmental_selection(std::vector<Individual> merged, std::size_t mu) {
  std::vector<Individual> unique;
  std::vector<Individual> dupes;
  std::set<Genome> seen;
  for (Individual& ind : merged) {
    if (seen.insert(ind.genome).second) {
      unique.push_back(std::move(ind));
    } else {
      dupes.push_back(std::move(ind));
    }
  }
  std::vector<MinPoint> pts;
  for (const Individual& ind : unique) pts.push_back(to_min(ind.objectives));
  std::vector<Individual> next;
  for (const auto& front : non_dominated_sort(pts)) {
    if (next.size() >= mu) break;
    std::vector<MinPoint> fp;
    for (std::size_t i : front) fp.push_back(pts[i]);
    const auto cd = crowding_distance(fp);
    std::vector<std::size_t> order(front.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return cd[x] > cd[y]; });
    for (std::size_t k : order) {
      if (next.size() >= mu) break;
      next.push_back(unique[front[k]]);
    }
  }
  for (std::size_t k = 0; next.size() < mu && k < dupes.size(); ++k) next.push_back(dupes[k]);
  assign_rank_and_crowding(next);
  return next;
}

// Keeps the non-dominated set of everything evaluated so far.
void update_archive(std::vector<Individual>& archive, const Individual& ind) {
  const MinPoint p = to_min(ind.objectives);
  for (const Individual& a : archive) {
    if (a.genome == ind.genome || dominates(to_min(a.objectives), p)) return;
  }
  std::erase_if(archive, [&](const Individual& a) { return dominates(p, to_min(a.objectives)); });
  archive.push_back(ind);
}

GenerationLog summarize(const std::vector<Individual>& archive, int generation, int max_active) {
  GenerationLog log;
  log.generation = generation;
  std::vector<Objectives> pts;
  log.min_f2 = std::numeric_limits<int>::max();
  for (const Individual& ind : archive) {
    log.best_f1 = std::max(log.best_f1, ind.objectives.f1);
    log.min_f2 = std::min(log.min_f2, ind.objectives.f2);
    pts.push_back(ind.objectives);
  }
  log.hypervolume = hypervolume(pts, max_active + 1.0);
  return log;
}

}  // namespace

NsgaResult run_nsga2(Evaluator& evaluator, const NsgaConfig& config,
                     const GenerationCallback& on_generation) {
  config.validate();
  const std::size_t n = evaluator.site_count();
  if (n == 0) throw ValidationError("nsga: no candidate sites");
  const int cap = std::min<int>(config.max_active, static_cast<int>(n));
  const double pm = config.mutation_rate > 0.0 ? config.mutation_rate : 1.0 / static_cast<double>(n);
  const auto mu = static_cast<std::size_t>(config.population);
  Rng rng(config.seed);

  std::vector<Individual> archive;
  auto make = [&](Genome g) {
    Individual ind;
    ind.genome = std::move(g);
    ind.objectives = evaluator.evaluate(ind.genome);
    update_archive(archive, ind);
    return ind;
  };

  NsgaResult result;
  std::vector<Individual> pop;
  {
    std::set<Genome> seen;
    std::vector<std::size_t> idx(n);
    while (pop.size() < mu) {
      Genome g;
      for (int attempt = 0; attempt < 32; ++attempt) {
        const auto k = static_cast<std::size_t>(rng.between(1, cap));
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        rng.shuffle(idx);
        g.assign(n, 0);
        for (std::size_t i = 0; i < k; ++i) g[idx[i]] = 1;
        if (!seen.count(g)) break;
      }
      seen.insert(g);
      pop.push_back(make(std::move(g)));
    }
  }
  assign_rank_and_crowding(pop);
  result.log.push_back(summarize(archive, 0, config.max_active));
  if (on_generation) on_generation(result.log.back());

  for (int gen = 1; gen <= config.generations; ++gen) {
    std::vector<Individual> offspring;
    while (offspring.size() < mu) {
      Genome a = tournament(pop, config.tournament_size, rng).genome;
      Genome b = tournament(pop, config.tournament_size, rng).genome;
      if (rng.bernoulli(config.crossover_rate)) {
        for (std::size_t j = 0; j < n; ++j) {
          if (rng.bernoulli(0.5)) std::swap(a[j], b[j]);
        }
      }
      for (Genome* child : {&a, &b}) {
        for (std::size_t j = 0; j < n; ++j) {
          if (rng.bernoulli(pm)) (*child)[j] ^= 1;
        }
        *child = repair(std::move(*child), config.max_active, rng);
      }
      offspring.push_back(make(std::move(a)));
      if (offspring.size() < mu) offspring.push_back(make(std::move(b)));
    }
    std::vector<Individual> merged = std::move(pop);
    for (Individual& o : offspring) merged.push_back(std::move(o));
    pop = environmental_selection(std::move(merged), mu);
    result.log.push_back(summarize(archive, gen, config.max_active));
    if (on_generation) on_generation(result.log.back());
  }

  result.front = build_front(archive);
  result.population = std::move(pop);
  result.max_popcount_evaluated = evaluator.max_popcount_seen();
  result.evaluations = evaluator.distinct_evaluations();
  return result;
}

}  // namespace vertiopt
