// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace teaming {

// Calendar date at day resolution, stored as days since 1970-01-01.
class Day {
 public:
  constexpr Day() = default;
  constexpr explicit Day(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

  constexpr std::int32_t days_since_epoch() const { return days_; }
  constexpr auto operator<=>(const Day&) const = default;

  // Signed difference this - other in days.
  constexpr std::int64_t operator-(Day other) const {
    return static_cast<std::int64_t>(days_) - other.days_;
  }

  // Throws InvalidArgument unless `text` is a valid YYYY-MM-DD date.
  static Day parse_iso(std::string_view text);
  std::string to_iso() const;

 private:
  std::int32_t days_ = 0;
};

enum class VertexKind { provider, organization };
enum class WeightMode { shared_patients, total_visits };
enum class SameDayPolicy { strict, ordered };

std::string_view to_string(VertexKind kind);
std::string_view to_string(WeightMode mode);
std::string_view to_string(SameDayPolicy policy);
// Accept both the underscore and the dashed CLI spelling.
VertexKind parse_vertex_kind(std::string_view text);
WeightMode parse_weight_mode(std::string_view text);
SameDayPolicy parse_same_day_policy(std::string_view text);

struct Claim {
  std::string claim_id;
  std::string patient_id;
  std::string provider_id;
  std::string org_id;
  Day service_day;

  const std::string& vertex(VertexKind kind) const {
    return kind == VertexKind::provider ? provider_id : org_id;
  }

  bool operator==(const Claim&) const = default;
};

// Total order used for timelines: service day, then claim id.
bool timeline_less(const Claim& a, const Claim& b);

struct PatientTimeline {
  std::string patient_id;
  VertexKind vertex_kind = VertexKind::provider;
  std::vector<Claim> claims;
};

struct FrameParams {
  std::int64_t tau_days = 30;
  VertexKind vertex_kind = VertexKind::provider;
  WeightMode weight_mode = WeightMode::shared_patients;
  SameDayPolicy same_day_policy = SameDayPolicy::strict;

  // Throws InvalidArgument when tau_days < 1.
  void validate() const;
};

// Luhn check digit for the first nine digits of an NPI, computed over the
// "80840"-prefixed body. Throws MalformedId unless `prefix9` is 9 digits.
int npi_check_digit(std::string_view prefix9);

// True iff `npi` carries the right check digit. Throws MalformedId unless it
// is exactly ten ASCII digits.
bool validate_npi(std::string_view npi);

// One timeline per distinct patient, ordered by patient id. The result does
// not depend on the order of `claims`.
std::vector<PatientTimeline> build_timelines(std::span<const Claim> claims, VertexKind kind,
                                             unsigned threads = 1);

}  // namespace teaming
