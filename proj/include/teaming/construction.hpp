// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string_view>

#include "teaming/claims.hpp"
#include "teaming/graph.hpp"

namespace teaming {

enum class Algorithm { binning, sliding, trace_route, bipartite_projection };

std::string_view to_string(Algorithm algorithm);
// Accepts "binning", "sliding", "trace-route"/"trace_route", "bipartite".
Algorithm parse_algorithm(std::string_view text);

// Undirected, no self-loops. Every unordered vertex pair seen by a patient
// within tau days (|t_l - t_k| <= tau) adds 1 per patient. Throws
// InvalidWeightMode for total_visits.
TeamingGraph build_binning(std::span<const PatientTimeline> timelines, const FrameParams& params,
                           unsigned threads = 1);

// Directed, no self-loops. Every ordered claim pair k before l with
// 0 < t_l - t_k <= tau (0 <= under the ordered same-day policy) between
// distinct vertices is an incidence v_k -> v_l.
TeamingGraph build_sliding(std::span<const PatientTimeline> timelines, const FrameParams& params,
                           unsigned threads = 1);

// Directed, self-loops allowed. Only consecutive claims of a timeline are
// paired, with the same frame condition as build_sliding.
TeamingGraph build_trace_route(std::span<const PatientTimeline> timelines,
                               const FrameParams& params, unsigned threads = 1);

// Reference unipartite projection of the patient x vertex incidence
// structure: weight(u, w) = number of patients seen by both u and w.
TeamingGraph project_bipartite_oracle(std::span<const PatientTimeline> timelines);

TeamingGraph build_network(Algorithm algorithm, std::span<const PatientTimeline> timelines,
                           const FrameParams& params, unsigned threads = 1);

// Collapses arc pairs: w(u, v) = w(u -> v) + w(v -> u). Throws
// AlreadyUndirected on undirected input.
TeamingGraph to_undirected(const TeamingGraph& graph);

}  // namespace teaming
