// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "teaming/claims.hpp"

namespace teaming {

using VertexId = std::uint32_t;

enum class Directedness { directed, undirected };

struct Edge {
  VertexId src;
  VertexId dst;
  std::uint64_t weight;

  bool operator==(const Edge&) const = default;
};

struct Provenance {
  std::string algorithm;  // binning | sliding | trace_route | bipartite_projection | ...
  std::int64_t tau_days = 0;
  WeightMode weight_mode = WeightMode::shared_patients;
  VertexKind vertex_kind = VertexKind::provider;

  bool operator==(const Provenance&) const = default;
};

// Aggregated weighted teaming graph. Vertices are kept sorted by id, so the
// vertex index order is the lexicographic id order; undirected edges are
// stored once with src <= dst. Edges are sorted by (src, dst). Immutable
// once constructed.
class TeamingGraph {
 public:
  TeamingGraph() = default;

  // Validates every invariant; throws InvalidArgument on violation.
  // `vertices` must be sorted and unique; edges may be in any order but
  // must not repeat a key.
  TeamingGraph(Directedness directedness, bool allows_self_loops, Provenance provenance,
               std::vector<std::string> vertices, std::vector<Edge> edges);

  // Builds from string-keyed edges plus extra (possibly isolated) vertices.
  // Undirected keys are canonicalized; repeated keys are summed.
  struct NamedEdge {
    std::string src;
    std::string dst;
    std::uint64_t weight;
  };
  static TeamingGraph from_named(Directedness directedness, bool allows_self_loops,
                                 Provenance provenance, std::span<const NamedEdge> edges,
                                 std::span<const std::string> extra_vertices = {});

  bool directed() const { return directedness_ == Directedness::directed; }
  Directedness directedness() const { return directedness_; }
  bool allows_self_loops() const { return allows_self_loops_; }
  const Provenance& provenance() const { return provenance_; }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::string& vertex_name(VertexId v) const { return vertices_[v]; }
  std::span<const Edge> edges() const { return edges_; }

  std::optional<VertexId> find_vertex(std::string_view id) const;
  // Weight of the stored edge, 0 if absent. Undirected lookups accept either order.
  std::uint64_t weight(VertexId src, VertexId dst) const;
  std::uint64_t weight(std::string_view src, std::string_view dst) const;

  // Same graph with a different provenance record.
  TeamingGraph with_provenance(Provenance provenance) const;

  // Equality of structure: directedness, vertices, edges and weights.
  bool same_structure(const TeamingGraph& other) const;
  bool operator==(const TeamingGraph& other) const {
    return same_structure(other) && allows_self_loops_ == other.allows_self_loops_ &&
           provenance_ == other.provenance_;
  }

 private:
  Directedness directedness_ = Directedness::undirected;
  bool allows_self_loops_ = false;
  Provenance provenance_;
  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
};

// Edge-list TSV. Header comment lines carry directedness and provenance;
// vertices without incident edges are written as "# isolate<TAB>id" so a
// round trip preserves the vertex set.
void write_edge_list(std::ostream& out, const TeamingGraph& graph);
void write_edge_list(const std::string& path, const TeamingGraph& graph);
// Throws MalformedEdgeList with the offending line number.
TeamingGraph read_edge_list(std::istream& in);
TeamingGraph read_edge_list(const std::string& path);

}  // namespace teaming
