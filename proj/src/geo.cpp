// SPDX-License-Identifier: Apache-2.0
#include "teaming/geo.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "teaming/error.hpp"
#include "teaming/parallel.hpp"

namespace teaming {

namespace {

constexpr std::size_t kEdgesPerChunk = 4096;

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

void check(LatLon p) {
  if (!std::isfinite(p.lat) || !std::isfinite(p.lon) || std::abs(p.lat) > 90.0 || std::abs(p.lon) > 180.0) {
    throw InvalidCoordinate("coordinate out of range: (" + std::to_string(p.lat) + ", " + std::to_string(p.lon) +
                            ")");
  }
}

std::string bound_text(double miles) {
  if (std::isinf(miles)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", miles);
  return buf;
}

}  // namespace

double haversine_miles(LatLon a, LatLon b) {
  check(a);
  check(b);
  const double dlat = radians(b.lat - a.lat);
  const double dlon = radians(b.lon - a.lon);
  const double s_lat = std::sin(dlat / 2.0), s_lon = std::sin(dlon / 2.0);
  double h = s_lat * s_lat + std::cos(radians(a.lat)) * std::cos(radians(b.lat)) * s_lon * s_lon;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusMiles * std::asin(std::sqrt(h));
}

DistanceBinSpec::DistanceBinSpec()
    : bounds_{1, 2, 4, 10, 20, 40, 100, 200, 400, 600, 800, 1000, 1500, 2000, 3000} {}

DistanceBinSpec::DistanceBinSpec(std::vector<double> upper_bounds) : bounds_(std::move(upper_bounds)) {
  for (std::size_t i = 0; i < bounds_.size(); ++i) {
    if (!(bounds_[i] > 0.0) || !std::isfinite(bounds_[i])) {
      throw InvalidArgument("distance bin bounds must be positive and finite");
    }
    if (i > 0 && !(bounds_[i] > bounds_[i - 1])) {
      throw InvalidArgument("distance bin bounds must be strictly increasing");
    }
  }
}

std::size_t DistanceBinSpec::bin_of(double miles) const {
  return static_cast<std::size_t>(std::upper_bound(bounds_.begin(), bounds_.end(), miles) - bounds_.begin());
}

double DistanceBinSpec::lower(std::size_t bin) const { return bin == 0 ? 0.0 : bounds_.at(bin - 1); }

double DistanceBinSpec::upper(std::size_t bin) const {
  return bin < bounds_.size() ? bounds_[bin] : std::numeric_limits<double>::infinity();
}

std::string DistanceBinSpec::file_name(std::size_t bin) const {
  return "edges_bin_" + bound_text(lower(bin)) + "_" + bound_text(upper(bin)) + "mi.tsv";
}

std::size_t DistanceBinning::located_count() const {
  std::size_t n = 0;
  for (const auto& b : bins) n += b.size();
  return n;
}

DistanceBinning bin_edges_by_distance(const TeamingGraph& graph, const ProviderRegistry& registry,
                                      const DistanceBinSpec& spec, unsigned threads) {
  std::vector<std::optional<LatLon>> where(graph.vertex_count());
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    auto it = registry.find(graph.vertex_name(v));
    if (it != registry.end()) where[v] = LatLon{it->second.latitude, it->second.longitude};
  }
  auto edges = graph.edges();
  ChunkPlan plan{edges.size(), kEdgesPerChunk};
  // Per edge: miles, or NaN when unlocated.
  std::vector<double> miles(edges.size());
  parallel_for(plan.chunks(), threads, [&](std::size_t c) {
    for (std::size_t i = plan.begin(c); i < plan.end(c); ++i) {
      const Edge& e = edges[i];
      if (!where[e.src] || !where[e.dst]) {
        miles[i] = std::numeric_limits<double>::quiet_NaN();
      } else {
        miles[i] = e.src == e.dst ? 0.0 : haversine_miles(*where[e.src], *where[e.dst]);
      }
    }
  });

  DistanceBinning out;
  out.spec = spec;
  out.bins.resize(spec.bin_count());
  out.total_weight.assign(spec.bin_count(), 0);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (std::isnan(miles[i])) {
      out.unlocated.push_back(edges[i]);
      continue;
    }
    std::size_t b = spec.bin_of(miles[i]);
    out.bins[b].push_back({edges[i], miles[i]});
    out.total_weight[b] += edges[i].weight;
  }
  return out;
}

void write_bin_files(const std::string& directory, const TeamingGraph& graph, const DistanceBinning& binning) {
  std::filesystem::create_directories(directory);
  auto open = [&](const std::string& name) {
    std::ofstream out(std::filesystem::path(directory) / name);
    if (!out) throw MissingFile("cannot write " + (std::filesystem::path(directory) / name).string());
    return out;
  };
  for (std::size_t b = 0; b < binning.bins.size(); ++b) {
    auto out = open(binning.spec.file_name(b));
    out << "src\tdst\tweight\tmiles\n";
    char buf[32];
    for (const auto& le : binning.bins[b]) {
      std::snprintf(buf, sizeof buf, "%.3f", le.miles);
      out << graph.vertex_name(le.edge.src) << '\t' << graph.vertex_name(le.edge.dst) << '\t' << le.edge.weight
          << '\t' << buf << '\n';
    }
  }
  auto out = open("edges_unlocated.tsv");
  out << "src\tdst\tweight\n";
  for (const Edge& e : binning.unlocated) {
    out << graph.vertex_name(e.src) << '\t' << graph.vertex_name(e.dst) << '\t' << e.weight << '\n';
  }
}

nlohmann::json distance_histogram_json(const DistanceBinning& binning) {
  nlohmann::json bins = nlohmann::json::array();
  for (std::size_t b = 0; b < binning.bins.size(); ++b) {
    double hi = binning.spec.upper(b);
    bins.push_back({{"lower_miles", binning.spec.lower(b)},
                    {"upper_miles", std::isinf(hi) ? nlohmann::json(nullptr) : nlohmann::json(hi)},
                    {"edge_count", binning.bins[b].size()},
                    {"total_weight", binning.total_weight[b]},
                    {"file", binning.spec.file_name(b)}});
  }
  std::uint64_t unlocated_weight = 0;
  for (const Edge& e : binning.unlocated) unlocated_weight += e.weight;
  return {{"unit", "statute_miles"},
          {"earth_radius_miles", kEarthRadiusMiles},
          {"bins", bins},
          {"located_edges", binning.located_count()},
          {"unlocated", {{"edge_count", binning.unlocated.size()}, {"total_weight", unlocated_weight}}}};
}

}  // namespace teaming
