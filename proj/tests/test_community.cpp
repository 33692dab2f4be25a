// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "teaming/community.hpp"
#include "teaming/error.hpp"

using namespace teaming;
using oracle::make_graph;

namespace {

using EdgeList = std::vector<std::tuple<std::string, std::string, std::uint64_t>>;

EdgeList clique(const std::string& prefix, int n, std::uint64_t w = 1) {
  EdgeList e;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) e.emplace_back(prefix + std::to_string(i), prefix + std::to_string(j), w);
  }
  return e;
}

EdgeList operator+(EdgeList a, const EdgeList& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::string> names(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

std::vector<int> labels_of(const TeamingGraph& g, const CommunityPartition& p) {
  std::vector<int> label(g.vertex_count(), -1);
  for (std::size_t c = 0; c < p.communities.size(); ++c) {
    for (const auto& v : p.communities[c]) label[*g.find_vertex(v)] = static_cast<int>(c);
  }
  return label;
}

}  // namespace

TEST_CASE("two cliques joined by a bridge split at the bridge") {
  auto g = make_graph(clique("a", 5) + clique("b", 5) + EdgeList{{"a0", "b0", 1}}, false);

  auto eb = oracle::edge_betweenness(g);
  auto bridge = std::make_pair(static_cast<int>(*g.find_vertex("a0")), static_cast<int>(*g.find_vertex("b0")));
  for (const auto& [k, v] : eb) {
    if (k != bridge) CHECK(v < eb.at(bridge));
  }

  auto p = girvan_newman(g);
  REQUIRE(p.communities.size() == 2);
  CHECK(p.communities[0] == names("a", 5));
  CHECK(p.communities[1] == names("b", 5));
  CHECK(p.modularity == doctest::Approx(oracle::modularity(g, labels_of(g, p))).epsilon(1e-12));
}

TEST_CASE("K4 stays whole: every split has lower modularity") {
  auto g = make_graph(clique("k", 4), false);
  double best = -1;
  std::vector<int> best_partition;
  for (const auto& part : oracle::set_partitions(4)) {
    double q = oracle::modularity(g, part);
    if (q > best + 1e-12) {
      best = q;
      best_partition = part;
    }
  }
  CHECK(best_partition == std::vector<int>{0, 0, 0, 0});
  auto p = girvan_newman(g);
  REQUIRE(p.communities.size() == 1);
  CHECK(p.modularity == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("edgeless graph yields singletons") {
  auto p = girvan_newman(make_graph({}, false, false, {"x", "y", "z"}));
  REQUIRE(p.communities.size() == 3);
  CHECK(p.communities[0] == std::vector<std::string>{"x"});
  CHECK(p.modularity == 0.0);
  CHECK_THROWS_AS(girvan_newman(TeamingGraph()), EmptyGraph);
}

TEST_CASE("modularity hand values") {
  auto two = make_graph(clique("a", 4) + clique("b", 4), false);
  CHECK(modularity(two, {names("a", 4), names("b", 4)}) == doctest::Approx(0.5).epsilon(1e-12));
  auto tri = make_graph(clique("t", 3), false);
  CHECK(modularity(tri, {{"t0"}, {"t1"}, {"t2"}}) == doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(modularity(tri, {names("t", 3)}) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(modularity(make_graph({}, false, false, {"a"}), {{"a"}}) == 0.0);
}

TEST_CASE("modularity matches the matrix form, self-loops included") {
  auto g = make_graph(EdgeList{{"a", "b", 3}, {"b", "c", 1}, {"c", "d", 2}, {"a", "a", 2}, {"d", "b", 1}}, false,
                      true);
  for (const auto& part : oracle::set_partitions(4)) {
    std::vector<std::vector<std::string>> comms;
    for (std::size_t v = 0; v < part.size(); ++v) {
      if (static_cast<std::size_t>(part[v]) >= comms.size()) comms.resize(part[v] + 1);
      comms[part[v]].push_back(g.vertex_name(static_cast<VertexId>(v)));
    }
    CHECK(modularity(g, comms) == doctest::Approx(oracle::modularity(g, part)).epsilon(1e-12));
  }
}

TEST_CASE("invalid partitions") {
  auto tri = make_graph(clique("t", 3), false);
  CHECK_THROWS_AS(modularity(tri, {{"t0", "t1"}}), InvalidPartition);
  CHECK_THROWS_AS(modularity(tri, {{"t0", "t1"}, {"t1", "t2"}}), InvalidPartition);
  CHECK_THROWS_AS(modularity(tri, {{"t0", "t1", "t2", "zz"}}), InvalidPartition);
}

TEST_CASE("selected level beats the single community and has connected communities") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    auto g = oracle::random_graph(24, 0.15, seed, false);
    auto p = girvan_newman(g);
    std::vector<int> all_one(g.vertex_count(), 0);
    CHECK(p.modularity >= oracle::modularity(g, all_one) - 1e-12);
    CHECK(p.modularity == doctest::Approx(oracle::modularity(g, labels_of(g, p))).epsilon(1e-12));

    auto label = labels_of(g, p);
    std::size_t assigned = 0;
    for (int l : label) assigned += l >= 0;
    CHECK(assigned == g.vertex_count());
    // Each community is connected using only its internal edges.
    EdgeList internal;
    for (const Edge& e : g.edges()) {
      if (label[e.src] == label[e.dst]) internal.emplace_back(g.vertex_name(e.src), g.vertex_name(e.dst), 1);
    }
    auto inner = make_graph(internal, false, false, g.vertices());
    auto d = oracle::hop_distances(inner, false);
    for (VertexId a = 0; a < g.vertex_count(); ++a) {
      for (VertexId b = 0; b < g.vertex_count(); ++b) {
        if (label[a] == label[b]) CHECK(d[a][b] >= 0);
      }
    }
  }
}

TEST_CASE("result does not depend on thread count or edge order") {
  auto g = oracle::random_graph(30, 0.12, 9, false);
  GirvanNewmanOptions one, many;
  many.threads = 4;
  auto a = girvan_newman(g, one);
  auto b = girvan_newman(g, many);
  CHECK(a.communities == b.communities);
  CHECK(a.modularity == b.modularity);

  std::vector<TeamingGraph::NamedEdge> reversed;
  for (auto it = g.edges().rbegin(); it != g.edges().rend(); ++it) {
    reversed.push_back({g.vertex_name(it->dst), g.vertex_name(it->src), it->weight});
  }
  auto h = TeamingGraph::from_named(Directedness::undirected, false, g.provenance(), reversed, g.vertices());
  CHECK(girvan_newman(h).communities == a.communities);
}

TEST_CASE("directed input is collapsed and max_communities caps the split") {
  auto g = make_graph(EdgeList{{"a0", "a1", 1}, {"a1", "a2", 1}, {"a2", "a0", 1}, {"b0", "b1", 1}, {"b1", "b2", 1},
                               {"b2", "b0", 1}, {"a0", "b0", 1}, {"b0", "a0", 1}},
                      true);
  auto p = girvan_newman(g);
  CHECK(p.metadata.at("collapsed_from_directed") == "true");
  CHECK(p.communities.size() == 2);

  GirvanNewmanOptions capped;
  capped.max_communities = 1;
  CHECK(girvan_newman(g, capped).communities.size() == 1);
}

TEST_CASE("weighted betweenness variant") {
  // Heavy edges are short, so the light bridge carries the most paths.
  auto g = make_graph(clique("a", 4, 5) + clique("b", 4, 5) + EdgeList{{"a0", "b0", 1}}, false);
  GirvanNewmanOptions opt;
  opt.weighted_betweenness = true;
  auto p = girvan_newman(g, opt);
  REQUIRE(p.communities.size() == 2);
  CHECK(p.metadata.at("edge_betweenness") == "weighted_inverse");
}

TEST_CASE("size histogram") {
  CommunityPartition p;
  p.communities = {{"a", "b", "c", "d", "e"}, {"f", "g"}, {"h", "i"}};
  auto s = community_size_histogram(p);
  CHECK(s.ranked == std::vector<std::size_t>{5, 2, 2});
  CHECK(s.histogram == std::vector<std::pair<std::size_t, std::size_t>>{{2, 2}, {5, 1}});
  CHECK(s.fraction_at_most(2) == doctest::Approx(2.0 / 3.0));

  auto empty = community_size_histogram(CommunityPartition{});
  CHECK(empty.ranked.empty());
  CHECK(empty.histogram.empty());

  std::mt19937_64 rng(2);
  CommunityPartition big;
  std::size_t small = 0;
  for (int c = 0; c < 300; ++c) {
    std::size_t size = 1 + rng() % 12;
    small += size <= 6;
    big.communities.emplace_back(size, "v");
  }
  CHECK(community_size_histogram(big).fraction_at_most(6) == doctest::Approx(small / 300.0));
}

TEST_CASE("partition outputs") {
  auto g = make_graph(clique("a", 3) + clique("b", 3) + EdgeList{{"a0", "b0", 1}}, false);
  auto p = girvan_newman(g);
  std::ostringstream out;
  write_partition_tsv(out, p);
  CHECK(out.str() == "vertex\tcommunity_id\na0\t0\na1\t0\na2\t0\nb0\t1\nb1\t1\nb2\t1\n");
  auto j = partition_summary_json(p);
  CHECK(j["community_count"] == 2);
  CHECK(j["ranked_sizes"] == nlohmann::json::array({3, 3}));
}
