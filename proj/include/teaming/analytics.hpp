// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "teaming/graph.hpp"

namespace teaming {

// Keeps edges with weight >= min_weight (>= 1). With drop_isolates, vertices
// left without incident edges are removed.
TeamingGraph censor(const TeamingGraph& graph, std::uint64_t min_weight, bool drop_isolates);

// Undefined quantities (e.g. assortativity of a regular graph, diameter of an
// empty graph) are empty optionals and serialize as JSON null.
struct NetworkMetrics {
  bool directed = false;
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
  double self_loop_edge_fraction = 0.0;
  double self_loop_vertex_fraction = 0.0;
  std::optional<std::uint64_t> diameter;
  std::optional<double> assortativity;
  std::optional<double> reciprocity;
  double global_clustering = 0.0;
  double density = 0.0;
  std::uint64_t lco_size = 0;
  std::uint64_t isolated_from_lco = 0;
  std::uint64_t max_degree = 0;
  double mean_degree = 0.0;
  std::uint64_t max_edge_weight = 0;
  double mean_edge_weight = 0.0;
};

struct MetricsOptions {
  unsigned threads = 1;
  // Estimate the diameter from this many BFS sources instead of all of them.
  std::optional<std::size_t> diameter_sample_sources;
  std::uint64_t sample_seed = 1;
  // summary_metrics leaves the diameter empty when false.
  bool compute_diameter = true;
};

NetworkMetrics summary_metrics(const TeamingGraph& graph, const MetricsOptions& options = {});
nlohmann::json to_json(const NetworkMetrics& metrics);

// Longest shortest path (unweighted, self-loops ignored) inside the largest
// component of the undirected support. Throws EmptyGraph.
std::uint64_t diameter(const TeamingGraph& graph, const MetricsOptions& options = {});

struct CentralityResult {
  bool directed = false;
  std::vector<double> raw;
  // Empty unless normalization was requested.
  std::vector<double> normalized;
};

// Exact unweighted betweenness by dependency accumulation. Undirected pairs
// are counted once. Normalized values divide by (N-1)(N-2), halved for
// undirected graphs. Throws TooSmallForNormalization if normalized and N < 3.
CentralityResult betweenness(const TeamingGraph& graph, bool normalized, unsigned threads = 1);

enum class DegreeMode { total, in, out };
DegreeMode parse_degree_mode(std::string_view text);

// Per-vertex degree. A self-loop adds 2 to an undirected degree and one to
// each of in/out. On undirected graphs all modes equal the total degree.
std::vector<std::uint64_t> vertex_degrees(const TeamingGraph& graph, DegreeMode mode);

struct DegreeDistribution {
  struct Row {
    std::uint64_t k;
    std::uint64_t count;
    double p;
    double k_over_kmax;
  };
  std::vector<Row> rows;  // ascending k
  std::uint64_t k_max = 0;
};

// Throws EmptyGraph.
DegreeDistribution degree_distribution(const TeamingGraph& graph, DegreeMode mode);

void write_betweenness_tsv(std::ostream& out, const TeamingGraph& graph, const CentralityResult& c);
void write_degree_distribution_tsv(std::ostream& out, const DegreeDistribution& d);

// Compressed adjacency of the undirected simple support: self-loops dropped,
// arc pairs merged. Shared by the path-based metrics and community detection.
struct SimpleAdjacency {
  std::vector<std::size_t> offsets;
  std::vector<VertexId> targets;

  std::size_t vertex_count() const { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t degree(VertexId v) const { return offsets[v + 1] - offsets[v]; }
  const VertexId* begin(VertexId v) const { return targets.data() + offsets[v]; }
  const VertexId* end(VertexId v) const { return targets.data() + offsets[v + 1]; }
};

SimpleAdjacency undirected_support(const TeamingGraph& graph);

// Weakly connected component label per vertex; labels are numbered in order
// of each component's smallest vertex index.
std::vector<std::uint32_t> component_labels(const SimpleAdjacency& adj);

}  // namespace teaming
