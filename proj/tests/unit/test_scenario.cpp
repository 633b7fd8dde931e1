#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "json.hpp"
#include "vertiopt/scenario.hpp"

namespace vertiopt {
namespace {

namespace fs = std::filesystem;
using testing::small_config;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Generator, TenAgentsTwoClusters) {
  GeneratorConfig cfg = small_config(10);
  const Scenario s = generate_scenario(cfg, 7);
  ASSERT_EQ(s.agents.size(), 10u);
  for (const Agent& a : s.agents) {
    ASSERT_GE(a.activities.size(), 3u);
    EXPECT_EQ(a.activities.front().kind, ActivityKind::kHome);
    EXPECT_EQ(a.activities.back().kind, ActivityKind::kHome);
    EXPECT_FALSE(a.activities.back().end_time.has_value());
    EXPECT_NO_THROW(validate_activity_chain(a.activities));
  }
  EXPECT_NO_THROW(validate_scenario(s));
}

TEST(Generator, SameSeedByteIdenticalFiles) {
  const GeneratorConfig cfg = small_config(50);
  const fs::path dir = fs::temp_directory_path() / "vertiopt_gen_test";
  fs::create_directories(dir);
  save_scenario(generate_scenario(cfg, 3), dir / "a.json");
  save_scenario(generate_scenario(cfg, 3), dir / "b.json");
  EXPECT_EQ(slurp(dir / "a.json"), slurp(dir / "b.json"));
  EXPECT_NE(scenario_to_json(generate_scenario(cfg, 4)), slurp(dir / "a.json"));
  fs::remove_all(dir);
}

TEST(Generator, DefaultScenarioYieldsFiftySites) {
  const Scenario s = generate_scenario(GeneratorConfig{}, 1);
  EXPECT_EQ(s.agents.size(), 3400u);
  EXPECT_EQ(s.candidate_sites.size(), 50u);
  EXPECT_NO_THROW(validate_scenario(s));
}

TEST(Generator, RejectsBadConfigs) {
  GeneratorConfig zero = small_config(10);
  zero.agents = 0;
  EXPECT_THROW(generate_scenario(zero, 1), ValidationError);
  GeneratorConfig crowded = small_config(10);
  crowded.clusters = 40;
  EXPECT_THROW(generate_scenario(crowded, 1), ValidationError);
}

TEST(KMeans, SquareCornersAreTheirOwnClusters) {
  const std::vector<Coord> pts = {{0, 0}, {1000, 0}, {0, 1000}, {1000, 1000}};
  const KMeansResult r = kmeans(pts, 4, 1);
  std::vector<Coord> centers = r.centers;
  std::sort(centers.begin(), centers.end(),
            [](const Coord& a, const Coord& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  EXPECT_EQ(centers, (std::vector<Coord>{{0, 0}, {0, 1000}, {1000, 0}, {1000, 1000}}));
}

TEST(KMeans, ThreeBlobsAreRecoveredAndLocallyOptimal) {
  Rng rng(21);
  const std::vector<Coord> means = {{0, 0}, {50000, 0}, {25000, 40000}};
  const double sigma = 2000.0;
  std::vector<Coord> pts;
  for (const Coord& m : means) {
    for (int i = 0; i < 60; ++i) pts.push_back({rng.normal(m.x, sigma), rng.normal(m.y, sigma)});
  }
  const KMeansResult r = kmeans(pts, 3, 5);
  for (const Coord& m : means) {
    double best = 1e300;
    for (const Coord& c : r.centers) best = std::min(best, distance(c, m));
    EXPECT_LT(best, sigma);
  }
  // No single reassignment lowers the within-cluster SSE.
  auto sse = [&](const std::vector<std::int32_t>& assign) {
    std::vector<Coord> sum(3, {0, 0});
    std::vector<int> n(3, 0);
    for (std::size_t i = 0; i < assign.size(); ++i) {
      sum[assign[i]].x += r.sorted_points[i].x;
      sum[assign[i]].y += r.sorted_points[i].y;
      ++n[assign[i]];
    }
    double total = 0;
    for (std::size_t i = 0; i < assign.size(); ++i) {
      const int k = assign[i];
      total += squared_distance(r.sorted_points[i], {sum[k].x / n[k], sum[k].y / n[k]});
    }
    return total;
  };
  const double base = sse(r.assignment);
  for (std::size_t i = 0; i < r.assignment.size(); ++i) {
    for (std::int32_t k = 0; k < 3; ++k) {
      if (k == r.assignment[i]) continue;
      auto moved = r.assignment;
      moved[i] = k;
      ASSERT_GE(sse(moved), base - 1e-6) << "moving point " << i;
    }
  }
}

TEST(KMeans, InputOrderDoesNotMatter) {
  Rng rng(4);
  std::vector<Coord> pts;
  for (int i = 0; i < 300; ++i) pts.push_back({rng.uniform(0, 1e4), rng.uniform(0, 1e4)});
  const KMeansResult a = kmeans(pts, 5, 9);
  rng.shuffle(pts);
  const KMeansResult b = kmeans(pts, 5, 9);
  EXPECT_EQ(a.centers, b.centers);
}

TEST(KMeans, RejectsTooFewDistinctPoints) {
  const std::vector<Coord> dup = {{0, 0}, {0, 0}, {1, 1}};
  EXPECT_THROW(kmeans(dup, 3, 1), ValidationError);
  EXPECT_THROW(kmeans(std::vector<Coord>{}, 2, 1), ValidationError);
}

TEST(CandidateSites, SeparatedSortedAndSnapped) {
  const Scenario s = generate_scenario(small_config(300), 2);
  const auto& sites = s.candidate_sites.sites;
  ASSERT_GE(sites.size(), 2u);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    EXPECT_EQ(sites[i].id, static_cast<SiteId>(i));
    EXPECT_EQ(sites[i].link, s.network.nearest_link(sites[i].coord));
    for (std::size_t j = i + 1; j < sites.size(); ++j) {
      EXPECT_GE(distance(sites[i].coord, sites[j].coord), s.candidate_sites.min_separation);
      EXPECT_TRUE(sites[i].coord.x < sites[j].coord.x ||
                  (sites[i].coord.x == sites[j].coord.x && sites[i].coord.y < sites[j].coord.y));
    }
  }
}

TEST(CandidateSites, CloseClustersMerge) {
  const Network net = testing::grid_network(5, 5, 1000, 10, 100);
  std::vector<Coord> homes;
  for (int i = 0; i < 10; ++i) homes.push_back({100.0 + i, 100.0});
  for (int i = 0; i < 4; ++i) homes.push_back({600.0 + i, 100.0});
  for (int i = 0; i < 5; ++i) homes.push_back({4000.0, 4000.0 - i});
  const CandidateSites cs = derive_candidate_sites(homes, 3, 1, net, 2000.0);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs.sites[0].cluster_size, 10);
}

TEST(ScenarioIo, RoundTrip) {
  const Scenario s = generate_scenario(small_config(40), 5);
  const fs::path p = fs::temp_directory_path() / "vertiopt_roundtrip.json";
  save_scenario(s, p);
  EXPECT_EQ(load_scenario(p), s);
  fs::remove(p);
}

TEST(ScenarioIo, NegativeLinkLengthNamesTheLink) {
  const Scenario s = generate_scenario(small_config(10), 5);
  nlohmann::json doc = nlohmann::json::parse(scenario_to_json(s));
  doc["network"]["links"][3]["length"] = -5.0;
  try {
    scenario_from_json(doc.dump());
    FAIL() << "accepted a negative length";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("link 3"), std::string::npos) << e.what();
  }
}

TEST(ScenarioIo, UnknownModeTagIsNamed) {
  const Scenario s = generate_scenario(small_config(10), 5);
  nlohmann::json doc = nlohmann::json::parse(scenario_to_json(s));
  doc["network"]["links"][0]["modes"] = {"hovercraft"};
  try {
    scenario_from_json(doc.dump());
    FAIL() << "accepted an unknown mode";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("hovercraft"), std::string::npos) << e.what();
  }
}

TEST(ScenarioIo, SchemaMismatchAndGarbage) {
  const Scenario s = generate_scenario(small_config(10), 5);
  nlohmann::json doc = nlohmann::json::parse(scenario_to_json(s));
  doc["meta"]["schema_version"] = 99;
  EXPECT_THROW(scenario_from_json(doc.dump()), ValidationError);
  EXPECT_THROW(scenario_from_json("{not json"), ValidationError);
}

}  // namespace
}  // namespace vertiopt
