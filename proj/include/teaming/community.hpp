// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "teaming/graph.hpp"

namespace teaming {

struct CommunityPartition {
  // Members sorted by id; communities ordered by size descending, then by
  // smallest member.
  std::vector<std::vector<std::string>> communities;
  double modularity = 0.0;
  std::map<std::string, std::string> metadata;
};

struct GirvanNewmanOptions {
  // Only dendrogram levels with at most this many components are eligible,
  // and edge removal stops once the count is reached.
  std::optional<std::size_t> max_communities;
  // Shortest paths with length 1/weight instead of hop count.
  bool weighted_betweenness = false;
  unsigned threads = 1;
};

// Removes the edge of highest edge betweenness (ties: smallest canonical
// edge key) until no edges remain, recomputing betweenness only inside the
// component that lost the edge, and returns the level of maximum modularity
// (earliest on ties). Directed graphs are collapsed first. Self-loops are
// ignored for splitting but counted in modularity. O(E^2 V).
// Throws EmptyGraph.
CommunityPartition girvan_newman(const TeamingGraph& graph, const GirvanNewmanOptions& options = {});

// Weighted modularity sum_c [in_c / 2m - (tot_c / 2m)^2], self-loops counting
// twice in both terms. Zero when the graph has no edge weight. Throws
// InvalidPartition unless the communities cover the vertex set disjointly.
double modularity(const TeamingGraph& graph, const std::vector<std::vector<std::string>>& communities);

struct CommunitySizeSummary {
  std::vector<std::size_t> ranked;                           // descending
  std::vector<std::pair<std::size_t, std::size_t>> histogram;  // (size, count) ascending by size

  // Fraction of communities with at most k members; 0 for an empty partition.
  double fraction_at_most(std::size_t k) const;
};

CommunitySizeSummary community_size_histogram(const CommunityPartition& partition);

// "vertex<TAB>community_id", community ids following partition order.
void write_partition_tsv(std::ostream& out, const CommunityPartition& partition);
nlohmann::json partition_summary_json(const CommunityPartition& partition);

}  // namespace teaming
