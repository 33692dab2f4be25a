// SPDX-License-Identifier: Apache-2.0
// Brute-force reference implementations used only by the tests. They follow
// the textbook definitions directly and share no code with the library
// beyond the data types.
#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "teaming/claims.hpp"
#include "teaming/construction.hpp"
#include "teaming/graph.hpp"
#include "teaming/ingestion.hpp"

namespace oracle {

using teaming::TeamingGraph;

using EdgeMap = std::map<std::pair<std::string, std::string>, std::uint64_t>;

// Named edges of a graph; undirected keys ordered (min, max).
EdgeMap edge_map(const TeamingGraph& g);

// Edges implied by the construction definitions, evaluated on raw claims
// with explicit per-patient loops.
EdgeMap construction_edges(const std::vector<teaming::Claim>& claims, teaming::Algorithm algorithm,
                           const teaming::FrameParams& params);

// Graph from literal edges, e.g. {{"A", "B", 1}, ...}.
TeamingGraph make_graph(const std::vector<std::tuple<std::string, std::string, std::uint64_t>>& edges,
                        bool directed, bool self_loops = false, const std::vector<std::string>& isolates = {});

// G(n, p) with names v00, v01, ... and unit weights.
TeamingGraph random_graph(std::size_t n, double p, std::uint64_t seed, bool directed);

// Hop distances by Floyd-Warshall; -1 when unreachable. With
// follow_direction = false, arcs are treated as undirected.
std::vector<std::vector<int>> hop_distances(const TeamingGraph& g, bool follow_direction);

// Diameter of the largest component of the undirected support; ties between
// equally large components go to the one holding the lowest vertex index.
std::uint64_t diameter(const TeamingGraph& g);

// Raw betweenness by explicit enumeration of every shortest path.
std::vector<double> betweenness(const TeamingGraph& g);

// Edge betweenness of an undirected simple graph by path enumeration,
// keyed by vertex index pair (min, max).
std::map<std::pair<int, int>, double> edge_betweenness(const TeamingGraph& g);

// Q = (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j) on the
// symmetrized weight matrix with A_ii = 2 w_ii.
double modularity(const TeamingGraph& g, const std::vector<int>& community_of);

// All set partitions of {0..n-1} as restricted growth strings.
std::vector<std::vector<int>> set_partitions(int n);

// Discrete samplers by inverse-CDF tables.
class TableSampler {
 public:
  // pmf(x) up to normalization over x in [x_min, x_max].
  template <typename Pmf>
  TableSampler(std::uint64_t x_min, std::uint64_t x_max, Pmf pmf) : x_min_(x_min) {
    double total = 0.0;
    for (std::uint64_t x = x_min; x <= x_max; ++x) {
      total += pmf(static_cast<double>(x));
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
  }
  std::uint64_t operator()(std::mt19937_64& rng) const;

 private:
  std::uint64_t x_min_;
  std::vector<double> cdf_;
};

TableSampler power_law_table(double alpha, std::uint64_t x_min, std::uint64_t x_max = 200000);
TableSampler plec_table(double alpha, double lambda, std::uint64_t x_min, std::uint64_t x_max = 20000);

// Luhn check over "80840" + nine digits, written out digit by digit.
int npi_check_digit(const std::string& nine);

// Synthetic claims for the construction laws.
std::vector<teaming::Claim> synthetic_claims(std::uint64_t seed, bool allow_same_day, std::size_t max_claims);

}  // namespace oracle
