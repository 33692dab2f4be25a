// SPDX-License-Identifier: Apache-2.0
#include "teaming/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "teaming/error.hpp"

namespace teaming {

namespace {

bool edge_key_less(const Edge& a, const Edge& b) {
  return a.src != b.src ? a.src < b.src : a.dst < b.dst;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

TeamingGraph::TeamingGraph(Directedness directedness, bool allows_self_loops, Provenance provenance,
                           std::vector<std::string> vertices, std::vector<Edge> edges)
    : directedness_(directedness),
      allows_self_loops_(allows_self_loops),
      provenance_(std::move(provenance)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)) {
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (!(vertices_[i - 1] < vertices_[i])) {
      throw InvalidArgument("vertex ids must be sorted and unique near '" + vertices_[i] + "'");
    }
  }
  const auto n = vertices_.size();
  for (Edge& e : edges_) {
    if (e.src >= n || e.dst >= n) throw InvalidArgument("edge endpoint outside vertex set");
    if (e.weight < 1) throw InvalidArgument("edge weights must be >= 1");
    if (e.src == e.dst && !allows_self_loops_) {
      throw InvalidArgument("self-loop on '" + vertices_[e.src] + "' in a graph without self-loops");
    }
    if (!directed() && e.src > e.dst) std::swap(e.src, e.dst);
  }
  std::sort(edges_.begin(), edges_.end(), edge_key_less);
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i - 1].src == edges_[i].src && edges_[i - 1].dst == edges_[i].dst) {
      throw InvalidArgument("duplicate edge " + vertices_[edges_[i].src] + " " + vertices_[edges_[i].dst]);
    }
  }
}

TeamingGraph TeamingGraph::from_named(Directedness directedness, bool allows_self_loops,
                                      Provenance provenance, std::span<const NamedEdge> edges,
                                      std::span<const std::string> extra_vertices) {
  std::vector<std::string> names(extra_vertices.begin(), extra_vertices.end());
  for (const auto& e : edges) {
    names.push_back(e.src);
    names.push_back(e.dst);
  }
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  auto index = [&](const std::string& id) {
    return static_cast<VertexId>(std::lower_bound(names.begin(), names.end(), id) - names.begin());
  };
  std::map<std::pair<VertexId, VertexId>, std::uint64_t> merged;
  for (const auto& e : edges) {
    VertexId s = index(e.src), d = index(e.dst);
    if (directedness == Directedness::undirected && s > d) std::swap(s, d);
    merged[{s, d}] += e.weight;
  }
  std::vector<Edge> out;
  out.reserve(merged.size());
  for (const auto& [key, w] : merged) out.push_back({key.first, key.second, w});
  return TeamingGraph(directedness, allows_self_loops, std::move(provenance), std::move(names),
                      std::move(out));
}

std::optional<VertexId> TeamingGraph::find_vertex(std::string_view id) const {
  auto it = std::lower_bound(vertices_.begin(), vertices_.end(), id,
                             [](const std::string& a, std::string_view b) { return a < b; });
  if (it == vertices_.end() || *it != id) return std::nullopt;
  return static_cast<VertexId>(it - vertices_.begin());
}

std::uint64_t TeamingGraph::weight(VertexId src, VertexId dst) const {
  if (!directed() && src > dst) std::swap(src, dst);
  Edge probe{src, dst, 0};
  auto it = std::lower_bound(edges_.begin(), edges_.end(), probe, edge_key_less);
  if (it == edges_.end() || it->src != src || it->dst != dst) return 0;
  return it->weight;
}

std::uint64_t TeamingGraph::weight(std::string_view src, std::string_view dst) const {
  auto s = find_vertex(src);
  auto d = find_vertex(dst);
  if (!s || !d) return 0;
  return weight(*s, *d);
}

TeamingGraph TeamingGraph::with_provenance(Provenance provenance) const {
  TeamingGraph copy = *this;
  copy.provenance_ = std::move(provenance);
  return copy;
}

bool TeamingGraph::same_structure(const TeamingGraph& other) const {
  return directedness_ == other.directedness_ && vertices_ == other.vertices_ &&
         edges_ == other.edges_;
}

void write_edge_list(std::ostream& out, const TeamingGraph& graph) {
  const auto& p = graph.provenance();
  out << "# directed: " << (graph.directed() ? "true" : "false") << '\n';
  out << "# algorithm: " << p.algorithm << '\n';
  out << "# tau_days: " << p.tau_days << '\n';
  out << "# weight_mode: " << to_string(p.weight_mode) << '\n';
  out << "# vertex_kind: " << to_string(p.vertex_kind) << '\n';
  out << "# self_loops: " << (graph.allows_self_loops() ? "true" : "false") << '\n';
  std::vector<bool> touched(graph.vertex_count(), false);
  for (const Edge& e : graph.edges()) touched[e.src] = touched[e.dst] = true;
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    if (!touched[v]) out << "# isolate\t" << graph.vertex_name(v) << '\n';
  }
  for (const Edge& e : graph.edges()) {
    out << graph.vertex_name(e.src) << '\t' << graph.vertex_name(e.dst) << '\t' << e.weight << '\n';
  }
}

void write_edge_list(const std::string& path, const TeamingGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw MissingFile("cannot open '" + path + "' for writing");
  write_edge_list(out, graph);
}

TeamingGraph read_edge_list(std::istream& in) {
  std::optional<bool> directed;
  std::optional<bool> self_loops;
  Provenance prov;
  std::vector<std::string> isolates;
  std::vector<TeamingGraph::NamedEdge> edges;
  std::map<std::pair<std::string, std::string>, std::size_t> seen;
  bool any_loop = false;

  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why) -> MalformedEdgeList {
    return MalformedEdgeList("edge list line " + std::to_string(line_no) + ": " + why);
  };
  auto parse_bool = [&](std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw fail("expected true|false, got '" + std::string(v) + "'");
  };

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (trim(view).empty()) continue;
    if (view.front() == '#') {
      std::string_view body = trim(view.substr(1));
      if (body.starts_with("isolate\t")) {
        auto id = trim(body.substr(8));
        if (id.empty()) throw fail("empty isolate id");
        isolates.emplace_back(id);
        continue;
      }
      auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;
      auto key = trim(body.substr(0, colon));
      auto value = trim(body.substr(colon + 1));
      try {
        if (key == "directed") {
          directed = parse_bool(value);
        } else if (key == "self_loops") {
          self_loops = parse_bool(value);
        } else if (key == "algorithm") {
          prov.algorithm = std::string(value);
        } else if (key == "tau_days") {
          auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), prov.tau_days);
          if (ec != std::errc{} || ptr != value.data() + value.size()) throw fail("bad tau_days");
        } else if (key == "weight_mode") {
          prov.weight_mode = parse_weight_mode(value);
        } else if (key == "vertex_kind") {
          prov.vertex_kind = parse_vertex_kind(value);
        }
      } catch (const InvalidArgument& e) {
        throw fail(e.what());
      }
      continue;
    }
    if (!directed) throw fail("edge row before '# directed:' header");
    std::string_view fields[3];
    std::size_t n_fields = 0;
    std::size_t start = 0;
    for (;;) {
      auto tab = view.find('\t', start);
      if (n_fields == 3) throw fail("expected 3 tab-separated fields");
      fields[n_fields++] = view.substr(start, tab == std::string_view::npos ? tab : tab - start);
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    if (n_fields != 3) throw fail("expected 3 tab-separated fields");
    std::uint64_t w = 0;
    auto wf = fields[2];
    auto [ptr, ec] = std::from_chars(wf.data(), wf.data() + wf.size(), w);
    if (ec != std::errc{} || ptr != wf.data() + wf.size() || w < 1) {
      throw fail("weight must be a positive integer, got '" + std::string(wf) + "'");
    }
    if (fields[0].empty() || fields[1].empty()) throw fail("empty vertex id");
    std::string s(fields[0]), d(fields[1]);
    if (s == d) any_loop = true;
    auto key = (!*directed && d < s) ? std::make_pair(d, s) : std::make_pair(s, d);
    if (!seen.emplace(key, line_no).second) throw fail("duplicate edge " + s + " " + d);
    edges.push_back({std::move(s), std::move(d), w});
  }
  if (!directed) throw MalformedEdgeList("edge list is missing the '# directed:' header");
  if (self_loops && !*self_loops && any_loop) {
    throw MalformedEdgeList("edge list declares self_loops: false but contains a self-loop");
  }
  return TeamingGraph::from_named(*directed ? Directedness::directed : Directedness::undirected,
                                  self_loops.value_or(any_loop), std::move(prov), edges, isolates);
}

TeamingGraph read_edge_list(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot open edge list '" + path + "'");
  return read_edge_list(in);
}

}  // namespace teaming
