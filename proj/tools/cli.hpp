// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "teaming/claims.hpp"
#include "teaming/construction.hpp"

namespace teaming::cli {

inline constexpr std::uint64_t kDefaultSeed = 20130101;

enum ExitCode : int { kSuccess = 0, kDataError = 1, kUsageError = 2 };

// Settings shared by the subcommands. A JSON file given with --config
// supplies defaults; explicit flags override it.
struct PipelineConfig {
  std::string claims_path;
  std::string registry_path;
  Algorithm algorithm = Algorithm::sliding;
  std::int64_t tau_days = 30;
  VertexKind vertex_kind = VertexKind::provider;
  WeightMode weight_mode = WeightMode::shared_patients;
  SameDayPolicy same_day_policy = SameDayPolicy::strict;
  std::optional<std::uint64_t> censor_threshold;
  bool drop_isolates = false;
  std::string output_dir = ".";
  std::optional<std::uint64_t> rng_seed;
  unsigned threads = 1;

  // Throws InvalidArgument on unknown keys or bad values.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::string& path);
  nlohmann::json to_json() const;
};

// Runs the teamnet command line; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace teaming::cli
