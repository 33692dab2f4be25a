// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "teaming/claims.hpp"

namespace teaming {

enum class ProviderKind { individual, organization };

struct ProviderRecord {
  std::string npi;
  ProviderKind kind = ProviderKind::individual;
  double latitude = 0.0;
  double longitude = 0.0;
  std::string state;
  std::string specialty;
  // Optional trailing geocode-quality column (e.g. "zip_centroid").
  std::optional<std::string> geocode_quality;

  bool operator==(const ProviderRecord&) const = default;
};

using ProviderRegistry = std::map<std::string, ProviderRecord>;

struct Rejection {
  std::size_t row_number;  // physical line number, header is line 1
  std::string reason;
};

struct RejectionReport {
  std::size_t rows_read = 0;
  std::size_t rejected = 0;
  std::vector<Rejection> samples;  // ordered by row number

  void add(std::size_t row, std::string reason, std::size_t max_samples);
};

struct ClaimsFormatOptions {
  bool check_npi_luhn = true;
  std::size_t max_rejection_samples = 10000;
};

struct ClaimsParseResult {
  std::vector<Claim> claims;
  RejectionReport rejections;
};

struct RegistryParseResult {
  ProviderRegistry registry;
  std::size_t duplicate_npis = 0;
  RejectionReport rejections;
};

inline constexpr const char* kClaimsHeader = "claim_id,patient_id,provider_npi,org_npi,service_date";
inline constexpr const char* kRegistryHeader = "npi,kind,latitude,longitude,state,specialty";

// Throws MissingFile / BadHeader; malformed rows are reported, never thrown.
ClaimsParseResult parse_claims(std::istream& in, const ClaimsFormatOptions& options = {});
ClaimsParseResult parse_claims_file(const std::string& path, const ClaimsFormatOptions& options = {});
// Duplicate NPIs: last row wins and duplicate_npis counts the overrides.
RegistryParseResult parse_provider_registry(std::istream& in);
RegistryParseResult parse_provider_registry(const std::string& path);

void write_claims_csv(std::ostream& out, std::span<const Claim> claims);
void write_registry_csv(std::ostream& out, const ProviderRegistry& registry);
// One line per rejected row: row_number<TAB>reason.
void write_rejection_report(std::ostream& out, const RejectionReport& report);

struct SynthConfig {
  std::uint64_t n_patients = 1000;
  std::uint64_t n_providers = 200;
  std::uint64_t n_orgs = 20;
  double mean_visits_per_patient = 8.0;
  double provider_popularity_exponent = 1.2;
  Day start = Day::parse_iso("2013-01-01");
  Day end = Day::parse_iso("2013-12-31");
  std::uint64_t rng_seed = 20130101;
  // When false, no patient has two claims on the same day.
  bool allow_same_day = true;

  // Throws InvalidArgument when counts are zero or the date range is inverted.
  void validate() const;
};

struct SyntheticDataset {
  std::vector<Claim> claims;
  ProviderRegistry registry;
};

// Deterministic for a fixed config. Providers are picked with probability
// proportional to rank^-exponent; each provider belongs to one organization.
SyntheticDataset generate_synthetic_claims(const SynthConfig& config);

}  // namespace teaming
