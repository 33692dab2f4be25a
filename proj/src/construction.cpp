// SPDX-License-Identifier: Apache-2.0
#include "teaming/construction.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "teaming/error.hpp"
#include "teaming/parallel.hpp"

namespace teaming {

namespace {

constexpr std::size_t kPatientsPerChunk = 256;

using EdgeKey = std::uint64_t;
using PartialEdges = std::unordered_map<EdgeKey, std::uint64_t>;

constexpr EdgeKey make_key(VertexId src, VertexId dst) {
  return (static_cast<EdgeKey>(src) << 32) | dst;
}
constexpr VertexId key_src(EdgeKey k) { return static_cast<VertexId>(k >> 32); }
constexpr VertexId key_dst(EdgeKey k) { return static_cast<VertexId>(k & 0xffffffffu); }

struct Visit {
  std::int32_t day;
  VertexId vertex;
};

// Vertex universe and per-patient visit sequences in timeline order.
struct IndexedTimelines {
  std::vector<std::string> vertices;
  std::vector<std::vector<Visit>> patients;
};

IndexedTimelines index_timelines(std::span<const PatientTimeline> timelines, VertexKind kind) {
  IndexedTimelines out;
  for (const auto& tl : timelines) {
    if (tl.vertex_kind != kind) {
      throw InvalidArgument("timeline for patient '" + tl.patient_id + "' was built for " +
                            std::string(to_string(tl.vertex_kind)) + " vertices, expected " +
                            std::string(to_string(kind)));
    }
    for (const Claim& c : tl.claims) out.vertices.push_back(c.vertex(kind));
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());

  std::unordered_map<std::string_view, VertexId> ids;
  ids.reserve(out.vertices.size());
  for (std::size_t i = 0; i < out.vertices.size(); ++i) ids.emplace(out.vertices[i], static_cast<VertexId>(i));

  out.patients.reserve(timelines.size());
  for (const auto& tl : timelines) {
    std::vector<Visit> visits;
    visits.reserve(tl.claims.size());
    for (std::size_t i = 0; i < tl.claims.size(); ++i) {
      const Claim& c = tl.claims[i];
      if (i > 0 && timeline_less(c, tl.claims[i - 1])) {
        throw InvalidArgument("timeline for patient '" + tl.patient_id + "' is not sorted");
      }
      visits.push_back({c.service_day.days_since_epoch(), ids.at(c.vertex(kind))});
    }
    out.patients.push_back(std::move(visits));
  }
  return out;
}

// Calls emit(src, dst) for every incidence of one patient.
template <typename PatientFn>
TeamingGraph aggregate(const IndexedTimelines& data, Directedness directedness, bool self_loops,
                       WeightMode mode, Provenance provenance, unsigned threads,
                       PatientFn&& per_patient) {
  ChunkPlan plan{data.patients.size(), kPatientsPerChunk};
  std::vector<PartialEdges> partials(plan.chunks());

  parallel_for(plan.chunks(), threads, [&](std::size_t c) {
    PartialEdges& acc = partials[c];
    std::vector<EdgeKey> keys;
    for (std::size_t p = plan.begin(c); p < plan.end(c); ++p) {
      keys.clear();
      per_patient(data.patients[p], [&](VertexId s, VertexId d) { keys.push_back(make_key(s, d)); });
      if (mode == WeightMode::shared_patients) {
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
      }
      for (EdgeKey k : keys) ++acc[k];
    }
  });

  // Integer sums commute, so the merge order cannot change the result.
  PartialEdges merged;
  for (auto& part : partials) {
    for (const auto& [k, w] : part) merged[k] += w;
    part.clear();
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [k, w] : merged) edges.push_back({key_src(k), key_dst(k), w});
  return TeamingGraph(directedness, self_loops, std::move(provenance), data.vertices, std::move(edges));
}

bool within_frame(std::int64_t gap, std::int64_t tau, SameDayPolicy policy) {
  if (gap > tau) return false;
  return policy == SameDayPolicy::ordered ? gap >= 0 : gap > 0;
}

Provenance make_provenance(Algorithm algorithm, const FrameParams& params) {
  return Provenance{std::string(to_string(algorithm)), params.tau_days, params.weight_mode,
                    params.vertex_kind};
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::binning: return "binning";
    case Algorithm::sliding: return "sliding";
    case Algorithm::trace_route: return "trace_route";
    case Algorithm::bipartite_projection: return "bipartite_projection";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "binning") return Algorithm::binning;
  if (text == "sliding") return Algorithm::sliding;
  if (text == "trace-route" || text == "trace_route") return Algorithm::trace_route;
  if (text == "bipartite" || text == "bipartite_projection" || text == "bipartite-projection") {
    return Algorithm::bipartite_projection;
  }
  throw InvalidArgument("unknown algorithm '" + std::string(text) + "'");
}

TeamingGraph build_binning(std::span<const PatientTimeline> timelines, const FrameParams& params,
                           unsigned threads) {
  params.validate();
  if (params.weight_mode != WeightMode::shared_patients) {
    throw InvalidWeightMode("binning defines only per-patient binary weights; total_visits is not supported");
  }
  auto data = index_timelines(timelines, params.vertex_kind);
  const std::int64_t tau = params.tau_days;
  return aggregate(data, Directedness::undirected, false, params.weight_mode,
                   make_provenance(Algorithm::binning, params), threads,
                   [tau](const std::vector<Visit>& v, auto&& emit) {
                     for (std::size_t k = 0; k < v.size(); ++k) {
                       for (std::size_t l = k + 1; l < v.size(); ++l) {
                         if (std::int64_t{v[l].day} - v[k].day > tau) break;
                         if (v[k].vertex == v[l].vertex) continue;
                         emit(std::min(v[k].vertex, v[l].vertex), std::max(v[k].vertex, v[l].vertex));
                       }
                     }
                   });
}

TeamingGraph build_sliding(std::span<const PatientTimeline> timelines, const FrameParams& params,
                           unsigned threads) {
  params.validate();
  auto data = index_timelines(timelines, params.vertex_kind);
  const std::int64_t tau = params.tau_days;
  const SameDayPolicy policy = params.same_day_policy;
  return aggregate(data, Directedness::directed, false, params.weight_mode,
                   make_provenance(Algorithm::sliding, params), threads,
                   [tau, policy](const std::vector<Visit>& v, auto&& emit) {
                     for (std::size_t k = 0; k < v.size(); ++k) {
                       for (std::size_t l = k + 1; l < v.size(); ++l) {
                         std::int64_t gap = std::int64_t{v[l].day} - v[k].day;
                         if (gap > tau) break;
                         if (!within_frame(gap, tau, policy) || v[k].vertex == v[l].vertex) continue;
                         emit(v[k].vertex, v[l].vertex);
                       }
                     }
                   });
}

TeamingGraph build_trace_route(std::span<const PatientTimeline> timelines,
                               const FrameParams& params, unsigned threads) {
  params.validate();
  auto data = index_timelines(timelines, params.vertex_kind);
  const std::int64_t tau = params.tau_days;
  const SameDayPolicy policy = params.same_day_policy;
  return aggregate(data, Directedness::directed, true, params.weight_mode,
                   make_provenance(Algorithm::trace_route, params), threads,
                   [tau, policy](const std::vector<Visit>& v, auto&& emit) {
                     for (std::size_t k = 0; k + 1 < v.size(); ++k) {
                       if (within_frame(std::int64_t{v[k + 1].day} - v[k].day, tau, policy)) {
                         emit(v[k].vertex, v[k + 1].vertex);
                       }
                     }
                   });
}

TeamingGraph project_bipartite_oracle(std::span<const PatientTimeline> timelines) {
  VertexKind kind = timelines.empty() ? VertexKind::provider : timelines.front().vertex_kind;
  // Incidence lists in both directions: vertex -> patients, patient -> vertices.
  std::map<std::string, std::set<std::size_t>> patients_of;
  std::vector<std::set<std::string>> vertices_of(timelines.size());
  for (std::size_t p = 0; p < timelines.size(); ++p) {
    for (const Claim& c : timelines[p].claims) {
      patients_of[c.vertex(kind)].insert(p);
      vertices_of[p].insert(c.vertex(kind));
    }
  }
  std::set<std::pair<std::string, std::string>> candidates;
  for (const auto& vs : vertices_of) {
    for (auto a = vs.begin(); a != vs.end(); ++a) {
      for (auto b = std::next(a); b != vs.end(); ++b) candidates.emplace(*a, *b);
    }
  }
  std::vector<TeamingGraph::NamedEdge> edges;
  for (const auto& [u, w] : candidates) {
    const auto& pu = patients_of.at(u);
    const auto& pw = patients_of.at(w);
    std::vector<std::size_t> shared;
    std::set_intersection(pu.begin(), pu.end(), pw.begin(), pw.end(), std::back_inserter(shared));
    edges.push_back({u, w, shared.size()});
  }
  std::vector<std::string> all;
  for (const auto& [v, _] : patients_of) all.push_back(v);
  return TeamingGraph::from_named(Directedness::undirected, false,
                                  Provenance{"bipartite_projection", 0, WeightMode::shared_patients, kind},
                                  edges, all);
}

TeamingGraph build_network(Algorithm algorithm, std::span<const PatientTimeline> timelines,
                           const FrameParams& params, unsigned threads) {
  switch (algorithm) {
    case Algorithm::binning: return build_binning(timelines, params, threads);
    case Algorithm::sliding: return build_sliding(timelines, params, threads);
    case Algorithm::trace_route: return build_trace_route(timelines, params, threads);
    case Algorithm::bipartite_projection: return project_bipartite_oracle(timelines);
  }
  throw InvalidArgument("unknown algorithm");
}

TeamingGraph to_undirected(const TeamingGraph& graph) {
  if (!graph.directed()) throw AlreadyUndirected("graph is already undirected");
  std::map<std::pair<VertexId, VertexId>, std::uint64_t> merged;
  for (const Edge& e : graph.edges()) merged[{std::min(e.src, e.dst), std::max(e.src, e.dst)}] += e.weight;
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [k, w] : merged) edges.push_back({k.first, k.second, w});
  return TeamingGraph(Directedness::undirected, graph.allows_self_loops(), graph.provenance(),
                      graph.vertices(), std::move(edges));
}

}  // namespace teaming
