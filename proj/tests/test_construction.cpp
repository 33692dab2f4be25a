// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "oracles.hpp"
#include "teaming/construction.hpp"
#include "teaming/error.hpp"

using namespace teaming;

namespace {

Claim claim(std::string id, std::string patient, std::string provider, const char* day) {
  return Claim{std::move(id), std::move(patient), provider, "ORG" + provider, Day::parse_iso(day)};
}

FrameParams frame(std::int64_t tau, WeightMode mode = WeightMode::shared_patients,
                  SameDayPolicy policy = SameDayPolicy::strict) {
  FrameParams p;
  p.tau_days = tau;
  p.weight_mode = mode;
  p.same_day_policy = policy;
  return p;
}

// One patient: A on day 1, B on day 5, A on day 10.
std::vector<Claim> three_claims() {
  return {claim("C1", "P", "A", "2013-01-01"), claim("C2", "P", "B", "2013-01-05"),
          claim("C3", "P", "A", "2013-01-10")};
}

}  // namespace

TEST_CASE("three-claim fixture by hand") {
  auto t = build_timelines(three_claims(), VertexKind::provider);

  auto trace = build_trace_route(t, frame(30));
  CHECK(trace.directed());
  CHECK(oracle::edge_map(trace) == oracle::EdgeMap{{{"A", "B"}, 1}, {{"B", "A"}, 1}});

  auto sliding = build_sliding(t, frame(30));
  CHECK(oracle::edge_map(sliding) == oracle::EdgeMap{{{"A", "B"}, 1}, {{"B", "A"}, 1}});

  auto binning = build_binning(t, frame(30));
  CHECK_FALSE(binning.directed());
  CHECK(oracle::edge_map(binning) == oracle::EdgeMap{{{"A", "B"}, 1}});

  // A 4-day frame keeps only the first step.
  CHECK(oracle::edge_map(build_trace_route(t, frame(4))) == oracle::EdgeMap{{{"A", "B"}, 1}});
  CHECK(oracle::edge_map(build_trace_route(t, frame(3))).empty());
}

TEST_CASE("trace-route keeps self-loops and counts visits") {
  std::vector<Claim> claims{claim("C1", "P", "A", "2013-01-01"), claim("C2", "P", "A", "2013-01-02"),
                            claim("C3", "P", "B", "2013-01-03"), claim("C4", "P", "A", "2013-01-04"),
                            claim("C5", "P", "B", "2013-01-05")};
  auto t = build_timelines(claims, VertexKind::provider);
  CHECK(oracle::edge_map(build_trace_route(t, frame(30, WeightMode::total_visits))) ==
        oracle::EdgeMap{{{"A", "A"}, 1}, {{"A", "B"}, 2}, {{"B", "A"}, 1}});
  CHECK(oracle::edge_map(build_trace_route(t, frame(30))) ==
        oracle::EdgeMap{{{"A", "A"}, 1}, {{"A", "B"}, 1}, {{"B", "A"}, 1}});
}

TEST_CASE("same-day pairs follow the policy") {
  std::vector<Claim> claims{claim("C1", "P", "A", "2013-01-01"), claim("C2", "P", "B", "2013-01-01")};
  auto t = build_timelines(claims, VertexKind::provider);
  CHECK(build_sliding(t, frame(30)).edge_count() == 0);
  CHECK(build_trace_route(t, frame(30)).edge_count() == 0);
  auto ordered = frame(30, WeightMode::shared_patients, SameDayPolicy::ordered);
  CHECK(oracle::edge_map(build_sliding(t, ordered)) == oracle::EdgeMap{{{"A", "B"}, 1}});
  CHECK(oracle::edge_map(build_binning(t, frame(30))) == oracle::EdgeMap{{{"A", "B"}, 1}});
}

TEST_CASE("binning rejects total visits") {
  auto t = build_timelines(three_claims(), VertexKind::provider);
  CHECK_THROWS_AS(build_binning(t, frame(30, WeightMode::total_visits)), InvalidWeightMode);
}

TEST_CASE("organization vertices use the org column") {
  auto t = build_timelines(three_claims(), VertexKind::organization);
  FrameParams p = frame(30);
  p.vertex_kind = VertexKind::organization;
  auto g = build_binning(t, p);
  CHECK(g.weight("ORGA", "ORGB") == 1);
  CHECK(g.provenance().vertex_kind == VertexKind::organization);
}

TEST_CASE("builders match the per-patient definition on synthetic data") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto claims = oracle::synthetic_claims(seed, true, 4000);
    auto t = build_timelines(claims, VertexKind::provider);
    for (std::int64_t tau : {1, 7, 30, 365}) {
      for (auto alg : {Algorithm::binning, Algorithm::sliding, Algorithm::trace_route}) {
        for (auto mode : {WeightMode::shared_patients, WeightMode::total_visits}) {
          if (alg == Algorithm::binning && mode == WeightMode::total_visits) continue;
          for (auto policy : {SameDayPolicy::strict, SameDayPolicy::ordered}) {
            CAPTURE(seed);
            CAPTURE(tau);
            CAPTURE(to_string(alg));
            FrameParams p = frame(tau, mode, policy);
            CHECK(oracle::edge_map(build_network(alg, t, p)) == oracle::construction_edges(claims, alg, p));
          }
        }
      }
    }
  }
}

TEST_CASE("binning with a frame covering the whole span is the bipartite projection") {
  auto claims = oracle::synthetic_claims(9, true, 5000);
  auto t = build_timelines(claims, VertexKind::provider);
  auto g = build_binning(t, frame(400));
  auto proj = project_bipartite_oracle(t);
  CHECK(g.same_structure(proj));
}

TEST_CASE("thread count does not change the result") {
  auto claims = oracle::synthetic_claims(4, true, 5000);
  auto t = build_timelines(claims, VertexKind::provider);
  for (auto alg : {Algorithm::binning, Algorithm::sliding, Algorithm::trace_route}) {
    auto one = build_network(alg, t, frame(30), 1);
    auto many = build_network(alg, t, frame(30), 4);
    CHECK(one == many);
  }
}

TEST_CASE("to_undirected sums reciprocal arcs") {
  auto g = oracle::make_graph({{"A", "B", 2}, {"B", "A", 3}, {"A", "C", 1}, {"C", "C", 4}}, true, true);
  auto u = to_undirected(g);
  CHECK_FALSE(u.directed());
  CHECK(oracle::edge_map(u) == oracle::EdgeMap{{{"A", "B"}, 5}, {{"A", "C"}, 1}, {{"C", "C"}, 4}});
  CHECK_THROWS_AS(to_undirected(u), AlreadyUndirected);
}

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("trace-route") == Algorithm::trace_route);
  CHECK(to_string(parse_algorithm("sliding")) == "sliding");
  CHECK_THROWS_AS(parse_algorithm("window"), InvalidArgument);
}
