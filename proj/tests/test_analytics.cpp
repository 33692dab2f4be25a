// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "teaming/analytics.hpp"
#include "teaming/error.hpp"

using namespace teaming;
using oracle::make_graph;

namespace {

TeamingGraph triangle() { return make_graph({{"A", "B", 1}, {"B", "C", 1}, {"A", "C", 1}}, false); }
TeamingGraph path3() { return make_graph({{"A", "B", 1}, {"B", "C", 1}}, false); }
TeamingGraph star(int leaves) {
  std::vector<std::tuple<std::string, std::string, std::uint64_t>> e;
  for (int i = 0; i < leaves; ++i) e.emplace_back("H", "L" + std::to_string(i), 1);
  return make_graph(e, false);
}

// Global clustering by explicit triple enumeration on the undirected support.
double transitivity_oracle(const TeamingGraph& g) {
  auto d = oracle::hop_distances(g, false);
  const int n = static_cast<int>(g.vertex_count());
  double closed = 0, triples = 0;
  for (int c = 0; c < n; ++c) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (a == c || b == c || d[c][a] != 1 || d[c][b] != 1) continue;
        triples += 1;
        closed += d[a][b] == 1;
      }
    }
  }
  return triples == 0 ? 0.0 : closed / triples;
}

// Pearson correlation over both orientations of every support edge.
double assortativity_oracle(const TeamingGraph& g) {
  auto d = oracle::hop_distances(g, false);
  const int n = static_cast<int>(g.vertex_count());
  std::vector<double> k(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) k[i] += d[i][j] == 1;
  }
  std::vector<double> x, y;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (d[i][j] == 1) {
        x.push_back(k[i]);
        y.push_back(k[j]);
      }
    }
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size(), my /= y.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("triangle") {
  auto m = summary_metrics(triangle());
  CHECK(m.global_clustering == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.diameter == 1u);
  CHECK(m.density == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.reciprocity == 1.0);
  CHECK_FALSE(m.assortativity.has_value());
  CHECK(m.lco_size == 3);
}

TEST_CASE("three-vertex path") {
  auto g = path3();
  auto m = summary_metrics(g);
  CHECK(m.global_clustering == 0.0);
  CHECK(m.diameter == 2u);
  auto c = betweenness(g, true);
  CHECK(c.raw[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.normalized[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.raw[0] == 0.0);
}

TEST_CASE("star with six leaves") {
  auto g = star(6);
  auto m = summary_metrics(g);
  REQUIRE(m.assortativity.has_value());
  CHECK(*m.assortativity == doctest::Approx(-1.0).epsilon(1e-12));
  auto c = betweenness(g, true);
  CHECK(c.normalized[*g.find_vertex("H")] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.raw[*g.find_vertex("H")] == doctest::Approx(15.0).epsilon(1e-12));
}

TEST_CASE("reciprocity counts arcs whose reverse exists") {
  auto g = make_graph({{"A", "B", 1}, {"B", "A", 1}, {"A", "C", 1}}, true);
  auto m = summary_metrics(g);
  REQUIRE(m.reciprocity.has_value());
  CHECK(*m.reciprocity == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  auto loops = make_graph({{"A", "B", 1}, {"B", "A", 1}, {"A", "A", 4}}, true, true);
  CHECK(*summary_metrics(loops).reciprocity == doctest::Approx(1.0));
}

TEST_CASE("density ignores self-loops") {
  auto g = make_graph({{"A", "B", 1}, {"A", "A", 1}}, true, true, {"C"});
  auto m = summary_metrics(g);
  CHECK(m.density == doctest::Approx(1.0 / 6.0));
  CHECK(m.self_loop_edge_fraction == doctest::Approx(0.5));
  CHECK(summary_metrics(make_graph({}, false, false, {"A", "B"})).density == 0.0);
}

TEST_CASE("betweenness and diameter agree with path enumeration on random graphs") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    bool directed = seed % 2 == 0;
    auto g = oracle::random_graph(18, directed ? 0.12 : 0.15, seed, directed);
    CAPTURE(seed);
    auto ours = betweenness(g, false, 2);
    auto ref = oracle::betweenness(g);
    for (std::size_t v = 0; v < ref.size(); ++v) CHECK(ours.raw[v] == doctest::Approx(ref[v]).epsilon(1e-9));
    CHECK(diameter(g) == oracle::diameter(g));
  }
}

TEST_CASE("clustering and assortativity agree with direct counts") {
  for (std::uint64_t seed = 20; seed < 26; ++seed) {
    auto g = oracle::random_graph(25, 0.2, seed, seed % 2 == 0);
    auto m = summary_metrics(g);
    CAPTURE(seed);
    CHECK(m.global_clustering == doctest::Approx(transitivity_oracle(g)).epsilon(1e-12));
    REQUIRE(m.assortativity.has_value());
    CHECK(*m.assortativity == doctest::Approx(assortativity_oracle(g)).epsilon(1e-9));
  }
}

TEST_CASE("metrics are invariant under relabeling") {
  auto g = oracle::random_graph(20, 0.2, 77, true);
  std::vector<TeamingGraph::NamedEdge> renamed;
  for (const Edge& e : g.edges()) {
    renamed.push_back({"x" + std::to_string(99 - e.src), "x" + std::to_string(99 - e.dst), e.weight});
  }
  auto h = TeamingGraph::from_named(Directedness::directed, false, g.provenance(), renamed);
  CHECK(to_json(summary_metrics(g)) == to_json(summary_metrics(h)));
}

TEST_CASE("betweenness normalization needs three vertices") {
  auto g = make_graph({{"A", "B", 1}}, false);
  CHECK_THROWS_AS(betweenness(g, true), TooSmallForNormalization);
  CHECK(betweenness(g, false).normalized.empty());
}

TEST_CASE("betweenness is thread-count independent") {
  auto g = oracle::random_graph(60, 0.08, 5, true);
  auto a = betweenness(g, true, 1);
  auto b = betweenness(g, true, 4);
  CHECK(a.raw == b.raw);
  CHECK(a.normalized == b.normalized);
}

TEST_CASE("degree distribution") {
  auto t = degree_distribution(triangle(), DegreeMode::total);
  REQUIRE(t.rows.size() == 1);
  CHECK(t.rows[0].k == 2);
  CHECK(t.rows[0].p == 1.0);

  auto s = degree_distribution(star(5), DegreeMode::total);
  REQUIRE(s.rows.size() == 2);
  CHECK(s.rows[0].p == doctest::Approx(5.0 / 6.0));
  CHECK(s.rows[1].k == 5);
  CHECK(s.rows[1].k_over_kmax == 1.0);
  CHECK(s.rows[0].k_over_kmax == doctest::Approx(0.2));

  auto d = make_graph({{"A", "B", 1}}, true);
  CHECK(vertex_degrees(d, DegreeMode::out) == std::vector<std::uint64_t>{1, 0});
  CHECK(vertex_degrees(d, DegreeMode::in) == std::vector<std::uint64_t>{0, 1});

  auto loop_u = make_graph({{"A", "A", 1}, {"A", "B", 1}}, false, true);
  CHECK(vertex_degrees(loop_u, DegreeMode::total) == std::vector<std::uint64_t>{3, 1});
  auto loop_d = make_graph({{"A", "A", 1}}, true, true);
  CHECK(vertex_degrees(loop_d, DegreeMode::in) == std::vector<std::uint64_t>{1});
  CHECK(vertex_degrees(loop_d, DegreeMode::out) == std::vector<std::uint64_t>{1});

  std::ostringstream out;
  write_degree_distribution_tsv(out, s);
  CHECK(out.str().rfind("k\tcount\tp\tk_over_kmax\n", 0) == 0);
}

TEST_CASE("empty graphs") {
  TeamingGraph empty;
  CHECK_THROWS_AS(diameter(empty), EmptyGraph);
  CHECK_THROWS_AS(degree_distribution(empty, DegreeMode::total), EmptyGraph);
  CHECK(diameter(make_graph({}, false, false, {"A"})) == 0);
}

TEST_CASE("censoring is a filter") {
  auto g = oracle::random_graph(30, 0.3, 3, true);
  std::vector<TeamingGraph::NamedEdge> weighted;
  for (const Edge& e : g.edges()) {
    weighted.push_back({g.vertex_name(e.src), g.vertex_name(e.dst), 1 + (e.src * 7 + e.dst * 3) % 20});
  }
  auto w = TeamingGraph::from_named(Directedness::directed, false, g.provenance(), weighted);
  for (std::uint64_t t : {1, 5, 11, 20, 21}) {
    auto c = censor(w, t, false);
    oracle::EdgeMap expect;
    for (const auto& [k, weight] : oracle::edge_map(w)) {
      if (weight >= t) expect[k] = weight;
    }
    CHECK(oracle::edge_map(c) == expect);
    CHECK(c.vertex_count() == w.vertex_count());
    CHECK(censor(c, t, false) == c);
    auto dropped = censor(w, t, true);
    std::set<std::string> endpoints;
    for (const auto& [k, weight] : expect) endpoints.insert({k.first, k.second});
    CHECK(std::set<std::string>(dropped.vertices().begin(), dropped.vertices().end()) == endpoints);
  }
  CHECK_THROWS_AS(censor(w, 0, false), InvalidArgument);
}

TEST_CASE("metrics JSON carries conventions and nulls") {
  auto j = to_json(summary_metrics(triangle()));
  CHECK(j["assortativity"].is_null());
  CHECK(j.contains("conventions"));
  CHECK(j["diameter"] == 1);
}
