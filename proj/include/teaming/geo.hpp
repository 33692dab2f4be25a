// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "teaming/graph.hpp"
#include "teaming/ingestion.hpp"

namespace teaming {

inline constexpr double kEarthRadiusMiles = 3958.7613;

struct LatLon {
  double lat;  // degrees, [-90, 90]
  double lon;  // degrees, [-180, 180]
};

// Great-circle distance in statute miles. Throws InvalidCoordinate.
double haversine_miles(LatLon a, LatLon b);

// Bins are [0, b0), [b0, b1), ..., [b_last, inf).
class DistanceBinSpec {
 public:
  // 1, 2, 4, 10, 20, 40, 100, 200, 400, 600, 800, 1000, 1500, 2000, 3000 miles.
  DistanceBinSpec();
  // Throws InvalidArgument unless the bounds are positive and strictly increasing.
  explicit DistanceBinSpec(std::vector<double> upper_bounds);

  const std::vector<double>& upper_bounds() const { return bounds_; }
  std::size_t bin_count() const { return bounds_.size() + 1; }
  std::size_t bin_of(double miles) const;
  double lower(std::size_t bin) const;
  // Infinite for the last bin.
  double upper(std::size_t bin) const;
  // "edges_bin_<lo>_<hi>mi.tsv", with "inf" as the open upper bound.
  std::string file_name(std::size_t bin) const;

 private:
  std::vector<double> bounds_;
};

struct DistanceBinning {
  struct LocatedEdge {
    Edge edge;
    double miles;
  };
  DistanceBinSpec spec;
  std::vector<std::vector<LocatedEdge>> bins;  // per bin, graph edge order
  std::vector<std::uint64_t> total_weight;     // per bin
  std::vector<Edge> unlocated;                 // an endpoint missing from the registry

  std::size_t located_count() const;
};

// Assigns every edge whose endpoints both resolve in the registry to the bin
// of its endpoint distance (self-loops at distance 0).
DistanceBinning bin_edges_by_distance(const TeamingGraph& graph, const ProviderRegistry& registry,
                                      const DistanceBinSpec& spec = {}, unsigned threads = 1);

// One TSV per bin ("src<TAB>dst<TAB>weight<TAB>miles") in `directory`.
void write_bin_files(const std::string& directory, const TeamingGraph& graph, const DistanceBinning& binning);
nlohmann::json distance_histogram_json(const DistanceBinning& binning);

}  // namespace teaming
