// SPDX-License-Identifier: Apache-2.0
#include "teaming/community.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>
#include <queue>

#include <nlohmann/json.hpp>

#include "teaming/construction.hpp"
#include "teaming/error.hpp"
#include "teaming/parallel.hpp"

namespace teaming {

namespace {

constexpr double kTieTolerance = 1e-9;
constexpr std::size_t kSourcesPerChunk = 32;

// Undirected multigraph without self-loops whose edges can be deleted.
struct SplitGraph {
  struct Arc {
    VertexId to;
    std::uint32_t edge;
  };
  std::size_t n = 0;
  std::vector<Edge> edges;  // canonical order, src < dst
  std::vector<char> alive;
  std::vector<std::vector<Arc>> adj;

  explicit SplitGraph(const TeamingGraph& g) : n(g.vertex_count()), adj(g.vertex_count()) {
    for (const Edge& e : g.edges()) {
      if (e.src == e.dst) continue;
      auto id = static_cast<std::uint32_t>(edges.size());
      edges.push_back(e);
      adj[e.src].push_back({e.dst, id});
      adj[e.dst].push_back({e.src, id});
    }
    alive.assign(edges.size(), 1);
  }

  // Vertices reachable from start over alive edges, ascending.
  std::vector<VertexId> component_of(VertexId start) const {
    std::vector<char> seen(n, 0);
    std::vector<VertexId> out{start}, stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (const Arc& a : adj[v]) {
        if (alive[a.edge] && !seen[a.to]) {
          seen[a.to] = 1;
          out.push_back(a.to);
          stack.push_back(a.to);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::uint32_t> labels() const {
    std::vector<std::uint32_t> label(n, std::numeric_limits<std::uint32_t>::max());
    std::uint32_t next = 0;
    for (VertexId s = 0; s < n; ++s) {
      if (label[s] != std::numeric_limits<std::uint32_t>::max()) continue;
      for (VertexId v : component_of(s)) label[v] = next;
      ++next;
    }
    return label;
  }
};

// Accumulates edge betweenness from one source into eb (pairs counted from
// both ends; callers halve). Lengths are hops, or 1/w when weighted.
void accumulate_from(const SplitGraph& g, VertexId s, bool weighted, std::vector<double>& eb,
                     std::vector<double>& sigma, std::vector<double>& dist, std::vector<double>& delta,
                     std::vector<std::vector<SplitGraph::Arc>>& preds, std::vector<VertexId>& touched) {
  std::vector<VertexId> order;
  touched.clear();
  auto reset = [&](VertexId v) {
    sigma[v] = 0.0;
    dist[v] = std::numeric_limits<double>::infinity();
    delta[v] = 0.0;
    preds[v].clear();
    touched.push_back(v);
  };
  reset(s);
  sigma[s] = 1.0;
  dist[s] = 0.0;
  if (!weighted) {
    std::deque<VertexId> queue{s};
    while (!queue.empty()) {
      VertexId v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (const auto& a : g.adj[v]) {
        if (!g.alive[a.edge]) continue;
        if (std::isinf(dist[a.to])) {
          reset(a.to);
          dist[a.to] = dist[v] + 1.0;
          queue.push_back(a.to);
        }
        if (dist[a.to] == dist[v] + 1.0) {
          sigma[a.to] += sigma[v];
          preds[a.to].push_back({v, a.edge});
        }
      }
    }
  } else {
    using Item = std::pair<double, VertexId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> done_flag(g.n, 0);
    heap.push({0.0, s});
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (done_flag[v] || d > dist[v]) continue;
      done_flag[v] = 1;
      order.push_back(v);
      for (const auto& a : g.adj[v]) {
        if (!g.alive[a.edge] || done_flag[a.to]) continue;
        double nd = d + 1.0 / static_cast<double>(g.edges[a.edge].weight);
        if (std::isinf(dist[a.to])) reset(a.to);
        double tol = 1e-12 * std::max(1.0, nd);
        if (nd < dist[a.to] - tol) {
          dist[a.to] = nd;
          sigma[a.to] = sigma[v];
          preds[a.to].assign(1, {v, a.edge});
          heap.push({nd, a.to});
        } else if (std::abs(nd - dist[a.to]) <= tol) {
          sigma[a.to] += sigma[v];
          preds[a.to].push_back({v, a.edge});
        }
      }
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    VertexId w = *it;
    for (const auto& p : preds[w]) {
      double c = sigma[p.to] / sigma[w] * (1.0 + delta[w]);
      eb[p.edge] += c;
      delta[p.to] += c;
    }
  }
}

// Recomputes edge betweenness for the edges inside `component`.
void recompute(const SplitGraph& g, const std::vector<VertexId>& component, bool weighted, unsigned threads,
               std::vector<double>& eb) {
  for (VertexId v : component) {
    for (const auto& a : g.adj[v]) eb[a.edge] = 0.0;
  }
  if (component.size() < 2) return;
  ChunkPlan plan{component.size(), kSourcesPerChunk};
  std::vector<std::vector<std::pair<std::uint32_t, double>>> partial(plan.chunks());
  parallel_for(plan.chunks(), threads, [&](std::size_t c) {
    std::vector<double> local(g.edges.size(), 0.0), sigma(g.n), dist(g.n, std::numeric_limits<double>::infinity()),
        delta(g.n);
    std::vector<std::vector<SplitGraph::Arc>> preds(g.n);
    std::vector<VertexId> touched;
    for (std::size_t i = plan.begin(c); i < plan.end(c); ++i) {
      accumulate_from(g, component[i], weighted, local, sigma, dist, delta, preds, touched);
      for (VertexId v : touched) {
        dist[v] = std::numeric_limits<double>::infinity();
        sigma[v] = 0.0;
      }
    }
    for (VertexId v : component) {
      for (const auto& a : g.adj[v]) {
        if (v < a.to && g.alive[a.edge]) partial[c].push_back({a.edge, local[a.edge]});
      }
    }
  });
  for (const auto& chunk : partial) {
    for (auto [e, value] : chunk) eb[e] += value / 2.0;
  }
}

std::vector<std::vector<std::string>> named_communities(const TeamingGraph& g,
                                                        const std::vector<std::uint32_t>& label) {
  std::uint32_t k = 0;
  for (auto l : label) k = std::max(k, l + 1);
  std::vector<std::vector<std::string>> out(k);
  for (VertexId v = 0; v < label.size(); ++v) out[label[v]].push_back(g.vertex_name(v));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a.front() < b.front();
  });
  return out;
}

double modularity_of_labels(const TeamingGraph& g, const std::vector<std::uint32_t>& label) {
  std::uint32_t k = 0;
  for (auto l : label) k = std::max(k, l + 1);
  std::vector<double> in(k, 0.0), tot(k, 0.0);
  double two_m = 0.0;
  for (const Edge& e : g.edges()) {
    double w = static_cast<double>(e.weight);
    tot[label[e.src]] += w;
    tot[label[e.dst]] += w;
    two_m += 2.0 * w;
    if (label[e.src] == label[e.dst]) in[label[e.src]] += 2.0 * w;
  }
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (std::uint32_t c = 0; c < k; ++c) q += in[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
  return q;
}

}  // namespace

CommunityPartition girvan_newman(const TeamingGraph& graph, const GirvanNewmanOptions& options) {
  if (graph.vertex_count() == 0) throw EmptyGraph("community detection needs at least one vertex");
  const TeamingGraph g = graph.directed() ? to_undirected(graph) : graph;
  SplitGraph split(g);

  std::vector<std::uint32_t> label = split.labels();
  std::size_t components = 0;
  for (auto l : label) components = std::max<std::size_t>(components, l + 1);
  const std::size_t cap = options.max_communities.value_or(std::numeric_limits<std::size_t>::max());

  std::vector<std::uint32_t> best_label = label;
  double best_q = modularity_of_labels(g, label);
  bool have_best = components <= cap;
  std::size_t levels = 1, removals = 0;

  std::vector<double> eb(split.edges.size(), 0.0);
  {
    std::vector<char> seen(split.n, 0);
    for (VertexId s = 0; s < split.n; ++s) {
      if (seen[s]) continue;
      auto comp = split.component_of(s);
      for (VertexId v : comp) seen[v] = 1;
      recompute(split, comp, options.weighted_betweenness, options.threads, eb);
    }
  }

  std::size_t alive = split.edges.size();
  while (alive > 0 && components < cap) {
    double top = -1.0;
    for (std::size_t e = 0; e < eb.size(); ++e) {
      if (split.alive[e]) top = std::max(top, eb[e]);
    }
    std::size_t pick = eb.size();
    for (std::size_t e = 0; e < eb.size(); ++e) {
      if (split.alive[e] && eb[e] >= top - kTieTolerance * std::max(1.0, top)) {
        pick = e;
        break;
      }
    }
    split.alive[pick] = 0;
    eb[pick] = 0.0;
    --alive;
    ++removals;
    const VertexId u = split.edges[pick].src, v = split.edges[pick].dst;
    auto side_u = split.component_of(u);
    bool separated = !std::binary_search(side_u.begin(), side_u.end(), v);
    recompute(split, side_u, options.weighted_betweenness, options.threads, eb);
    if (!separated) continue;
    auto side_v = split.component_of(v);
    recompute(split, side_v, options.weighted_betweenness, options.threads, eb);

    label = split.labels();
    ++components;
    ++levels;
    if (components > cap) break;
    double q = modularity_of_labels(g, label);
    if (!have_best || q > best_q + 1e-12) {
      best_q = q;
      best_label = label;
      have_best = true;
    }
  }

  CommunityPartition out;
  out.communities = named_communities(g, best_label);
  out.modularity = best_q;
  std::size_t loops = 0;
  for (const Edge& e : g.edges()) loops += e.src == e.dst;
  out.metadata = {
      {"algorithm", "girvan_newman"},
      {"selection", "max_modularity"},
      {"edge_betweenness", options.weighted_betweenness ? "weighted_inverse" : "unweighted"},
      {"tie_break", "smallest_canonical_edge_key"},
      {"collapsed_from_directed", graph.directed() ? "true" : "false"},
      {"self_loops_ignored_for_splitting", std::to_string(loops)},
      {"levels_evaluated", std::to_string(levels)},
      {"edges_removed", std::to_string(removals)},
  };
  if (options.max_communities) out.metadata["max_communities"] = std::to_string(*options.max_communities);
  return out;
}

double modularity(const TeamingGraph& graph, const std::vector<std::vector<std::string>>& communities) {
  const TeamingGraph g = graph.directed() ? to_undirected(graph) : graph;
  constexpr auto unset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> label(g.vertex_count(), unset);
  for (std::uint32_t c = 0; c < communities.size(); ++c) {
    for (const auto& name : communities[c]) {
      auto v = g.find_vertex(name);
      if (!v) throw InvalidPartition("vertex '" + name + "' is not in the graph");
      if (label[*v] != unset) throw InvalidPartition("vertex '" + name + "' is in more than one community");
      label[*v] = c;
    }
  }
  for (VertexId v = 0; v < label.size(); ++v) {
    if (label[v] == unset) throw InvalidPartition("vertex '" + g.vertex_name(v) + "' is not assigned");
  }
  return modularity_of_labels(g, label);
}

double CommunitySizeSummary::fraction_at_most(std::size_t k) const {
  if (ranked.empty()) return 0.0;
  auto n = std::count_if(ranked.begin(), ranked.end(), [k](std::size_t s) { return s <= k; });
  return static_cast<double>(n) / static_cast<double>(ranked.size());
}

CommunitySizeSummary community_size_histogram(const CommunityPartition& partition) {
  CommunitySizeSummary out;
  std::map<std::size_t, std::size_t> hist;
  for (const auto& c : partition.communities) {
    out.ranked.push_back(c.size());
    ++hist[c.size()];
  }
  std::sort(out.ranked.begin(), out.ranked.end(), std::greater<>());
  out.histogram.assign(hist.begin(), hist.end());
  return out;
}

void write_partition_tsv(std::ostream& out, const CommunityPartition& partition) {
  out << "vertex\tcommunity_id\n";
  for (std::size_t c = 0; c < partition.communities.size(); ++c) {
    for (const auto& v : partition.communities[c]) out << v << '\t' << c << '\n';
  }
}

nlohmann::json partition_summary_json(const CommunityPartition& partition) {
  auto sizes = community_size_histogram(partition);
  nlohmann::json hist = nlohmann::json::array();
  for (auto [size, count] : sizes.histogram) hist.push_back({{"size", size}, {"count", count}});
  return {{"modularity", partition.modularity},
          {"community_count", partition.communities.size()},
          {"ranked_sizes", sizes.ranked},
          {"size_histogram", hist},
          {"fraction_size_at_most_6", sizes.fraction_at_most(6)},
          {"metadata", partition.metadata}};
}

}  // namespace teaming
