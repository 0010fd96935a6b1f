#include <random>
#include <sstream>

#include "doctest.h"
#include "stratatopics/graph.hpp"

using namespace stratatopics;

namespace {

SimilarityMatrix<double> random_similarity(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SimilarityMatrix<double> sim;
  sim.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sim.terms.push_back("w" + std::to_string(i));
    sim.values(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) sim.values(i, j) = sim.values(j, i) = u(rng);
  }
  return sim;
}

}  // namespace

TEST_CASE("threshold extremes") {
  std::mt19937_64 rng(1);
  auto sim = random_similarity(rng, 6);
  sim.values(0, 1) = sim.values(1, 0) = 1.0;
  CHECK(build_keyword_graph(sim.terms, sim, 1.0).edges.empty());
  CHECK(build_keyword_graph(sim.terms, sim, -1.0).edges.size() == 15);
  CHECK_THROWS_AS(build_keyword_graph(sim.terms, sim, 1.5), ConfigError);
  std::vector<std::string> bad = {"w0", "missing"};
  CHECK_THROWS_WITH_AS(build_keyword_graph(bad, sim, 0.5), "unknown word: missing", ValidationError);
}

TEST_CASE("edges are nested across thresholds and weights exceed the threshold") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    auto sim = random_similarity(rng, 2 + static_cast<Eigen::Index>(rng() % 10));
    const double lo = std::uniform_real_distribution<double>(-1, 1)(rng);
    const double hi = std::uniform_real_distribution<double>(lo, 1)(rng);
    auto g_lo = build_keyword_graph(sim.terms, sim, lo);
    auto g_hi = build_keyword_graph(sim.terms, sim, hi);
    for (const auto& e : g_hi.edges) {
      CHECK(e.weight > hi);
      CHECK(std::find(g_lo.edges.begin(), g_lo.edges.end(), e) != g_lo.edges.end());
      CHECK(e.weight == sim(e.source, e.target));
    }
  }
}

TEST_CASE("construction ignores node order up to relabeling") {
  std::mt19937_64 rng(3);
  auto sim = random_similarity(rng, 7);
  std::vector<std::string> reversed(sim.terms.rbegin(), sim.terms.rend());
  auto a = build_keyword_graph(sim.terms, sim, 0.4);
  auto b = build_keyword_graph(reversed, sim, 0.4);
  auto key = [](const KeywordGraph& g) {
    std::set<std::tuple<std::string, std::string, double>> s;
    for (const auto& e : g.edges) s.emplace(std::min(e.source, e.target), std::max(e.source, e.target), e.weight);
    return s;
  };
  CHECK(key(a) == key(b));
}

TEST_CASE("merged graph keeps the first topic of each word") {
  std::mt19937_64 rng(4);
  auto sim = random_similarity(rng, 5);
  std::vector<std::vector<std::string>> topics = {{"w0", "w1", "w2"}, {"w2", "w3", "w4"}};
  auto g = build_merged_keyword_graph(topics, sim, -1.0);
  REQUIRE(g.nodes.size() == 5);
  CHECK(g.nodes[2] == GraphNode{"w2", 1});
  CHECK(g.nodes[3] == GraphNode{"w3", 2});
  CHECK(g.edges.size() == 10);
  CHECK(all_pairs(sim.terms, sim).size() == 10);
}

TEST_CASE("two linked nodes settle at the optimal distance") {
  // Equilibrium of k^2/d (repulsion) against d^2/k (attraction): d = k.
  const double k = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2Xd start(2, 2);
  start << 0.1, 0.8, 0.3, 0.35;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> edges = {{0, 1}};
  auto pos = fruchterman_reingold<double>(start, edges, k, LayoutConfig{});
  CHECK(std::abs((pos.col(0) - pos.col(1)).norm() - k) < 1e-6);

  KeywordGraph g{{{"a", 1}, {"b", 1}}, {{"a", "b", 0.9}}, 0.5};
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto lg = layout(g, {.seed = seed});
    const Eigen::Vector2d mid = (lg.positions.col(0) + lg.positions.col(1)) / 2;
    CHECK(std::abs(mid.x() - 0.5) < 1e-6);
    CHECK(std::abs(mid.y() - 0.5) < 1e-6);
  }
}

TEST_CASE("layout conventions") {
  KeywordGraph single{{{"only", 1}}, {}, 0.5};
  auto lg = layout(single, {.seed = 3});
  CHECK(lg.positions(0, 0) == 0.5);
  CHECK(lg.positions(1, 0) == 0.5);

  CHECK(layout(KeywordGraph{}).positions.cols() == 0);

  std::mt19937_64 rng(5);
  auto sim = random_similarity(rng, 9);
  auto g = build_keyword_graph(sim.terms, sim, 0.7);
  auto a = layout(g, {.seed = 11});
  auto b = layout(g, {.seed = 11});
  CHECK(a == b);
  CHECK(a.positions.minCoeff() >= 0.0);
  CHECK(a.positions.maxCoeff() <= 1.0);
  CHECK_FALSE(layout(g, {.seed = 12}) == a);

  auto isolated = layout(build_keyword_graph(sim.terms, sim, 1.0), {.seed = 1});
  CHECK(isolated.positions.minCoeff() >= 0.0);
  CHECK(isolated.positions.maxCoeff() <= 1.0);
}

TEST_CASE("exports") {
  std::mt19937_64 rng(6);
  auto sim = random_similarity(rng, 5);
  auto lg = layout(build_keyword_graph(sim.terms, sim, 0.3), {.seed = 2});

  SUBCASE("JSON round trip is exact") {
    std::stringstream buf;
    export_graph(lg, GraphFormat::Json, buf);
    CHECK(import_graph_json(buf) == lg);
  }
  SUBCASE("empty graph is a valid document") {
    std::stringstream buf;
    export_graph(layout(KeywordGraph{}), GraphFormat::Json, buf);
    const std::string text = buf.str();
    CHECK(text.find("\"nodes\": []") != std::string::npos);
    CHECK(text.find("\"edges\": []") != std::string::npos);
    CHECK(import_graph_json(buf).graph.nodes.empty());
  }
  SUBCASE("complete graph DOT has n(n-1)/2 edge lines") {
    std::ostringstream out;
    export_graph(layout(build_keyword_graph(sim.terms, sim, -1.0)), GraphFormat::Dot, out);
    std::istringstream lines(out.str());
    std::string line;
    int edges = 0;
    while (std::getline(lines, line)) edges += line.find(" -- ") != std::string::npos;
    CHECK(edges == 10);
  }
  SUBCASE("SVG is byte stable and scales opacity by weight") {
    std::ostringstream a, b;
    export_graph(lg, GraphFormat::Svg, a);
    export_graph(lg, GraphFormat::Svg, b);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("viewBox=\"0 0 1000 1000\"") != std::string::npos);
    if (!lg.graph.edges.empty()) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "stroke-opacity=\"%.4f\"", lg.graph.edges[0].weight);
      CHECK(a.str().find(buf) != std::string::npos);
    }
  }
}
