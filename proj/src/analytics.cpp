// SPDX-License-Identifier: Apache-2.0
#include "teaming/analytics.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <queue>

#include <nlohmann/json.hpp>

#include "teaming/error.hpp"
#include "teaming/parallel.hpp"
#include "teaming/random.hpp"

namespace teaming {

namespace {

constexpr std::size_t kSourcesPerChunk = 32;
constexpr std::uint32_t kUnreached = UINT32_MAX;

// Out-neighbors of the directed simple structure (self-loops dropped).
SimpleAdjacency directed_out(const TeamingGraph& graph) {
  SimpleAdjacency adj;
  const auto n = graph.vertex_count();
  adj.offsets.assign(n + 1, 0);
  for (const Edge& e : graph.edges()) {
    if (e.src != e.dst) ++adj.offsets[e.src + 1];
  }
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
  adj.targets.resize(adj.offsets.back());
  std::vector<std::size_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
  // Edges are sorted by (src, dst), so each list comes out sorted.
  for (const Edge& e : graph.edges()) {
    if (e.src != e.dst) adj.targets[fill[e.src]++] = e.dst;
  }
  return adj;
}

// Unweighted BFS distances from `source`.
void bfs(const SimpleAdjacency& adj, VertexId source, std::vector<std::uint32_t>& dist,
         std::vector<VertexId>& queue) {
  std::fill(dist.begin(), dist.end(), kUnreached);
  queue.clear();
  dist[source] = 0;
  queue.push_back(source);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    VertexId v = queue[head];
    for (const VertexId* w = adj.begin(v); w != adj.end(v); ++w) {
      if (dist[*w] == kUnreached) {
        dist[*w] = dist[v] + 1;
        queue.push_back(*w);
      }
    }
  }
}

// Largest component (ties broken by smallest label) as a label and size.
std::pair<std::uint32_t, std::size_t> largest_component(const std::vector<std::uint32_t>& labels) {
  if (labels.empty()) return {0, 0};
  std::uint32_t n_labels = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> sizes(n_labels, 0);
  for (auto l : labels) ++sizes[l];
  auto best = std::max_element(sizes.begin(), sizes.end());
  return {static_cast<std::uint32_t>(best - sizes.begin()), *best};
}

}  // namespace

SimpleAdjacency undirected_support(const TeamingGraph& graph) {
  const auto n = graph.vertex_count();
  std::vector<std::vector<VertexId>> lists(n);
  for (const Edge& e : graph.edges()) {
    if (e.src == e.dst) continue;
    lists[e.src].push_back(e.dst);
    lists[e.dst].push_back(e.src);
  }
  SimpleAdjacency adj;
  adj.offsets.reserve(n + 1);
  adj.offsets.push_back(0);
  for (auto& l : lists) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
    adj.targets.insert(adj.targets.end(), l.begin(), l.end());
    adj.offsets.push_back(adj.targets.size());
  }
  return adj;
}

std::vector<std::uint32_t> component_labels(const SimpleAdjacency& adj) {
  const auto n = adj.vertex_count();
  std::vector<std::uint32_t> label(n, kUnreached);
  std::vector<VertexId> stack;
  std::uint32_t next = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (label[s] != kUnreached) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (const VertexId* w = adj.begin(v); w != adj.end(v); ++w) {
        if (label[*w] == kUnreached) {
          label[*w] = next;
          stack.push_back(*w);
        }
      }
    }
    ++next;
  }
  return label;
}

TeamingGraph censor(const TeamingGraph& graph, std::uint64_t min_weight, bool drop_isolates) {
  if (min_weight < 1) throw InvalidArgument("min_weight must be >= 1");
  std::vector<Edge> kept;
  for (const Edge& e : graph.edges()) {
    if (e.weight >= min_weight) kept.push_back(e);
  }
  if (!drop_isolates) {
    return TeamingGraph(graph.directedness(), graph.allows_self_loops(), graph.provenance(),
                        graph.vertices(), std::move(kept));
  }
  std::vector<bool> touched(graph.vertex_count(), false);
  for (const Edge& e : kept) touched[e.src] = touched[e.dst] = true;
  std::vector<VertexId> remap(graph.vertex_count(), 0);
  std::vector<std::string> names;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (touched[v]) {
      remap[v] = static_cast<VertexId>(names.size());
      names.push_back(graph.vertex_name(v));
    }
  }
  for (Edge& e : kept) {
    e.src = remap[e.src];
    e.dst = remap[e.dst];
  }
  return TeamingGraph(graph.directedness(), graph.allows_self_loops(), graph.provenance(),
                      std::move(names), std::move(kept));
}

std::uint64_t diameter(const TeamingGraph& graph, const MetricsOptions& options) {
  if (graph.vertex_count() == 0) throw EmptyGraph("diameter of an empty graph is undefined");
  SimpleAdjacency adj = undirected_support(graph);
  auto labels = component_labels(adj);
  auto [lco, lco_size] = largest_component(labels);
  std::vector<VertexId> sources;
  for (VertexId v = 0; v < adj.vertex_count(); ++v) {
    if (labels[v] == lco) sources.push_back(v);
  }
  if (options.diameter_sample_sources && *options.diameter_sample_sources < sources.size()) {
    Rng rng(options.sample_seed);
    for (std::size_t i = 0; i < *options.diameter_sample_sources; ++i) {
      std::swap(sources[i], sources[i + rng.below(sources.size() - i)]);
    }
    sources.resize(*options.diameter_sample_sources);
  }
  ChunkPlan plan{sources.size(), kSourcesPerChunk};
  std::vector<std::uint64_t> chunk_max(plan.chunks(), 0);
  parallel_for(plan.chunks(), options.threads, [&](std::size_t c) {
    std::vector<std::uint32_t> dist(adj.vertex_count());
    std::vector<VertexId> queue;
    for (std::size_t i = plan.begin(c); i < plan.end(c); ++i) {
      bfs(adj, sources[i], dist, queue);
      chunk_max[c] = std::max<std::uint64_t>(chunk_max[c], dist[queue.back()]);
    }
  });
  return chunk_max.empty() ? 0 : *std::max_element(chunk_max.begin(), chunk_max.end());
}

CentralityResult betweenness(const TeamingGraph& graph, bool normalized, unsigned threads) {
  const auto n = graph.vertex_count();
  if (normalized && n < 3) {
    throw TooSmallForNormalization("normalized betweenness needs at least 3 vertices, got " +
                                   std::to_string(n));
  }
  SimpleAdjacency adj = graph.directed() ? directed_out(graph) : undirected_support(graph);
  ChunkPlan plan{n, kSourcesPerChunk};
  std::vector<std::vector<double>> partial(plan.chunks());

  parallel_for(plan.chunks(), threads, [&](std::size_t c) {
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> dist(n);
    std::vector<double> sigma(n), delta(n);
    std::vector<VertexId> order;
    for (std::size_t s = plan.begin(c); s < plan.end(c); ++s) {
      std::fill(dist.begin(), dist.end(), kUnreached);
      std::fill(sigma.begin(), sigma.end(), 0.0);
      order.clear();
      dist[s] = 0;
      sigma[s] = 1.0;
      order.push_back(static_cast<VertexId>(s));
      for (std::size_t head = 0; head < order.size(); ++head) {
        VertexId v = order[head];
        for (const VertexId* w = adj.begin(v); w != adj.end(v); ++w) {
          if (dist[*w] == kUnreached) {
            dist[*w] = dist[v] + 1;
            order.push_back(*w);
          }
          if (dist[*w] == dist[v] + 1) sigma[*w] += sigma[v];
        }
      }
      for (VertexId v : order) delta[v] = 0.0;
      // Predecessors are recovered from distances instead of stored lists.
      for (auto it = order.rbegin(); it != order.rend(); ++it) {
        VertexId w = *it;
        for (const VertexId* v = adj.begin(w); v != adj.end(w); ++v) {
          if (dist[*v] != kUnreached && dist[*v] == dist[w] + 1) {
            delta[w] += sigma[w] / sigma[*v] * (1.0 + delta[*v]);
          }
        }
        if (w != s) acc[w] += delta[w];
      }
    }
    partial[c] = std::move(acc);
  });

  CentralityResult result;
  result.directed = graph.directed();
  result.raw.assign(n, 0.0);
  for (const auto& part : partial) {
    for (std::size_t v = 0; v < n; ++v) result.raw[v] += part[v];
  }
  if (!graph.directed()) {
    for (double& x : result.raw) x /= 2.0;
  }
  if (normalized) {
    double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    if (!graph.directed()) pairs /= 2.0;
    result.normalized.resize(n);
    for (std::size_t v = 0; v < n; ++v) result.normalized[v] = result.raw[v] / pairs;
  }
  return result;
}

DegreeMode parse_degree_mode(std::string_view text) {
  if (text == "total") return DegreeMode::total;
  if (text == "in") return DegreeMode::in;
  if (text == "out") return DegreeMode::out;
  throw InvalidArgument("unknown degree mode '" + std::string(text) + "'");
}

std::vector<std::uint64_t> vertex_degrees(const TeamingGraph& graph, DegreeMode mode) {
  std::vector<std::uint64_t> deg(graph.vertex_count(), 0);
  const bool directed = graph.directed();
  for (const Edge& e : graph.edges()) {
    if (!directed || mode == DegreeMode::total) {
      ++deg[e.src];
      ++deg[e.dst];
    } else if (mode == DegreeMode::out) {
      ++deg[e.src];
    } else {
      ++deg[e.dst];
    }
  }
  return deg;
}

DegreeDistribution degree_distribution(const TeamingGraph& graph, DegreeMode mode) {
  if (graph.vertex_count() == 0) throw EmptyGraph("degree distribution of an empty graph");
  auto deg = vertex_degrees(graph, mode);
  std::map<std::uint64_t, std::uint64_t> counts;
  for (auto k : deg) ++counts[k];
  DegreeDistribution d;
  d.k_max = counts.rbegin()->first;
  const double n = static_cast<double>(deg.size());
  for (const auto& [k, c] : counts) {
    d.rows.push_back({k, c, static_cast<double>(c) / n,
                      d.k_max > 0 ? static_cast<double>(k) / static_cast<double>(d.k_max) : 0.0});
  }
  return d;
}

NetworkMetrics summary_metrics(const TeamingGraph& graph, const MetricsOptions& options) {
  NetworkMetrics m;
  m.directed = graph.directed();
  const auto n = graph.vertex_count();
  m.vertex_count = n;
  m.edge_count = graph.edge_count();
  if (n == 0) return m;

  std::uint64_t loops = 0;
  std::vector<bool> has_loop(n, false);
  std::uint64_t weight_sum = 0;
  for (const Edge& e : graph.edges()) {
    if (e.src == e.dst) {
      ++loops;
      has_loop[e.src] = true;
    }
    weight_sum += e.weight;
    m.max_edge_weight = std::max(m.max_edge_weight, e.weight);
  }
  if (m.edge_count > 0) {
    m.self_loop_edge_fraction = static_cast<double>(loops) / static_cast<double>(m.edge_count);
    m.mean_edge_weight = static_cast<double>(weight_sum) / static_cast<double>(m.edge_count);
  }
  m.self_loop_vertex_fraction =
      static_cast<double>(std::count(has_loop.begin(), has_loop.end(), true)) / static_cast<double>(n);

  const std::uint64_t simple_edges = m.edge_count - loops;
  if (n >= 2) {
    double factor = graph.directed() ? 1.0 : 2.0;
    m.density = factor * static_cast<double>(simple_edges) /
                (static_cast<double>(n) * static_cast<double>(n - 1));
  }

  if (!graph.directed()) {
    m.reciprocity = 1.0;
  } else if (simple_edges > 0) {
    std::uint64_t reciprocated = 0;
    for (const Edge& e : graph.edges()) {
      if (e.src != e.dst && graph.weight(e.dst, e.src) > 0) ++reciprocated;
    }
    m.reciprocity = static_cast<double>(reciprocated) / static_cast<double>(simple_edges);
  }

  SimpleAdjacency adj = undirected_support(graph);

  // Transitivity: 3 * triangles / connected triples.
  std::uint64_t triangles = 0, triples = 0;
  for (VertexId u = 0; u < n; ++u) {
    std::uint64_t k = adj.degree(u);
    if (k >= 2) triples += k * (k - 1) / 2;
    for (const VertexId* v = adj.begin(u); v != adj.end(u); ++v) {
      if (*v <= u) continue;
      // Count common neighbours w > v so each triangle is seen once.
      const VertexId* a = std::upper_bound(adj.begin(u), adj.end(u), *v);
      const VertexId* b = std::upper_bound(adj.begin(*v), adj.end(*v), *v);
      while (a != adj.end(u) && b != adj.end(*v)) {
        if (*a < *b) {
          ++a;
        } else if (*b < *a) {
          ++b;
        } else {
          ++triangles;
          ++a;
          ++b;
        }
      }
    }
  }
  if (triples > 0) m.global_clustering = 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);

  // Degree assortativity over both orientations of each support edge, in
  // exact integer arithmetic so a zero variance is detected exactly.
  __int128 sum_xy = 0, sum_x = 0, sum_x2 = 0, n_edges = 0;
  for (VertexId u = 0; u < n; ++u) {
    for (const VertexId* v = adj.begin(u); v != adj.end(u); ++v) {
      if (*v <= u) continue;
      __int128 x = adj.degree(u), y = adj.degree(*v);
      sum_xy += x * y;
      sum_x += x + y;
      sum_x2 += x * x + y * y;
      ++n_edges;
    }
  }
  if (n_edges > 0) {
    __int128 num = 4 * n_edges * sum_xy - sum_x * sum_x;
    __int128 den = 2 * n_edges * sum_x2 - sum_x * sum_x;
    if (den != 0) m.assortativity = static_cast<double>(num) / static_cast<double>(den);
  }

  auto labels = component_labels(adj);
  m.lco_size = largest_component(labels).second;
  m.isolated_from_lco = n - m.lco_size;

  auto deg = vertex_degrees(graph, DegreeMode::total);
  m.max_degree = *std::max_element(deg.begin(), deg.end());
  m.mean_degree = static_cast<double>(std::accumulate(deg.begin(), deg.end(), std::uint64_t{0})) /
                  static_cast<double>(n);

  if (options.compute_diameter) m.diameter = diameter(graph, options);
  return m;
}

nlohmann::json to_json(const NetworkMetrics& m) {
  auto opt = [](const auto& v) -> nlohmann::json {
    if (v) return *v;
    return nullptr;
  };
  return nlohmann::json{
      {"directed", m.directed},
      {"vertex_count", m.vertex_count},
      {"edge_count", m.edge_count},
      {"self_loop_edge_fraction", m.self_loop_edge_fraction},
      {"self_loop_vertex_fraction", m.self_loop_vertex_fraction},
      {"diameter", opt(m.diameter)},
      {"assortativity", opt(m.assortativity)},
      {"reciprocity", opt(m.reciprocity)},
      {"global_clustering", m.global_clustering},
      {"density", m.density},
      {"lco_size", m.lco_size},
      {"isolated_from_lco", m.isolated_from_lco},
      {"max_degree", m.max_degree},
      {"mean_degree", m.mean_degree},
      {"max_edge_weight", m.max_edge_weight},
      {"mean_edge_weight", m.mean_edge_weight},
      {"conventions",
       {{"assortativity", "undirected simple support; null when endpoint-degree variance is zero"},
        {"global_clustering", "undirected simple support, self-loops ignored"},
        {"diameter", "unweighted, undirected support of the largest weak component"},
        {"density", "self-loops excluded"},
        {"reciprocity", "self-loops excluded; 1 for undirected graphs"}}},
  };
}

void write_betweenness_tsv(std::ostream& out, const TeamingGraph& graph, const CentralityResult& c) {
  out << "vertex\traw\tnormalized\n";
  auto prev = out.precision(17);
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    out << graph.vertex_name(v) << '\t' << c.raw[v] << '\t';
    if (c.normalized.empty()) {
      out << "NA";
    } else {
      out << c.normalized[v];
    }
    out << '\n';
  }
  out.precision(prev);
}

void write_degree_distribution_tsv(std::ostream& out, const DegreeDistribution& d) {
  out << "k\tcount\tp\tk_over_kmax\n";
  auto prev = out.precision(17);
  for (const auto& r : d.rows) out << r.k << '\t' << r.count << '\t' << r.p << '\t' << r.k_over_kmax << '\n';
  out.precision(prev);
}

}  // namespace teaming
