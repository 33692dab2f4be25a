// SPDX-License-Identifier: Apache-2.0
#include "teaming/claims.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>

#include "teaming/error.hpp"
#include "teaming/parallel.hpp"

namespace teaming {

namespace {

bool all_digits(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

int parse_fixed(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

std::string normalize_token(std::string_view text) {
  std::string out(text);
  std::replace(out.begin(), out.end(), '-', '_');
  return out;
}

}  // namespace

Day Day::parse_iso(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-' || !all_digits(text.substr(0, 4)) ||
      !all_digits(text.substr(5, 2)) || !all_digits(text.substr(8, 2))) {
    throw InvalidArgument("invalid date '" + std::string(text) + "', expected YYYY-MM-DD");
  }
  using namespace std::chrono;
  year_month_day ymd{year{parse_fixed(text.substr(0, 4))},
                     month{static_cast<unsigned>(parse_fixed(text.substr(5, 2)))},
                     day{static_cast<unsigned>(parse_fixed(text.substr(8, 2)))}};
  if (!ymd.ok()) throw InvalidArgument("invalid calendar date '" + std::string(text) + "'");
  return Day(static_cast<std::int32_t>(sys_days(ymd).time_since_epoch().count()));
}

std::string Day::to_iso() const {
  using namespace std::chrono;
  year_month_day ymd{sys_days{days{days_}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string_view to_string(VertexKind kind) {
  return kind == VertexKind::provider ? "provider" : "organization";
}

std::string_view to_string(WeightMode mode) {
  return mode == WeightMode::shared_patients ? "shared_patients" : "total_visits";
}

std::string_view to_string(SameDayPolicy policy) {
  return policy == SameDayPolicy::strict ? "strict" : "ordered";
}

VertexKind parse_vertex_kind(std::string_view text) {
  auto t = normalize_token(text);
  if (t == "provider") return VertexKind::provider;
  if (t == "organization" || t == "org") return VertexKind::organization;
  throw InvalidArgument("unknown vertex kind '" + std::string(text) + "'");
}

WeightMode parse_weight_mode(std::string_view text) {
  auto t = normalize_token(text);
  if (t == "shared_patients") return WeightMode::shared_patients;
  if (t == "total_visits") return WeightMode::total_visits;
  throw InvalidArgument("unknown weight mode '" + std::string(text) + "'");
}

SameDayPolicy parse_same_day_policy(std::string_view text) {
  auto t = normalize_token(text);
  if (t == "strict") return SameDayPolicy::strict;
  if (t == "ordered") return SameDayPolicy::ordered;
  throw InvalidArgument("unknown same-day policy '" + std::string(text) + "'");
}

bool timeline_less(const Claim& a, const Claim& b) {
  if (a.service_day != b.service_day) return a.service_day < b.service_day;
  return a.claim_id < b.claim_id;
}

void FrameParams::validate() const {
  if (tau_days < 1) throw InvalidArgument("tau_days must be >= 1, got " + std::to_string(tau_days));
}

int npi_check_digit(std::string_view prefix9) {
  if (prefix9.size() != 9 || !all_digits(prefix9)) {
    throw MalformedId("NPI body must be 9 digits, got '" + std::string(prefix9) + "'");
  }
  // Luhn over "80840" + body: double every second digit counting from the
  // rightmost body digit (the check digit position is to its right).
  std::string digits = "80840";
  digits.append(prefix9);
  int sum = 0;
  bool dbl = true;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    int d = *it - '0';
    if (dbl) {
      d *= 2;
      if (d > 9) d -= 9;
    }
    sum += d;
    dbl = !dbl;
  }
  return (10 - sum % 10) % 10;
}

bool validate_npi(std::string_view npi) {
  if (npi.size() != 10 || !all_digits(npi)) {
    throw MalformedId("NPI must be exactly 10 digits, got '" + std::string(npi) + "'");
  }
  return npi_check_digit(npi.substr(0, 9)) == npi[9] - '0';
}

std::vector<PatientTimeline> build_timelines(std::span<const Claim> claims, VertexKind kind,
                                             unsigned threads) {
  std::map<std::string_view, std::vector<const Claim*>> grouped;
  for (const Claim& c : claims) grouped[c.patient_id].push_back(&c);

  std::vector<PatientTimeline> out(grouped.size());
  std::vector<const std::vector<const Claim*>*> groups;
  groups.reserve(grouped.size());
  std::size_t i = 0;
  for (auto& [patient, members] : grouped) {
    out[i].patient_id = std::string(patient);
    out[i].vertex_kind = kind;
    groups.push_back(&members);
    ++i;
  }

  parallel_for(out.size(), threads, [&](std::size_t t) {
    auto& claims_out = out[t].claims;
    claims_out.reserve(groups[t]->size());
    for (const Claim* c : *groups[t]) claims_out.push_back(*c);
    std::sort(claims_out.begin(), claims_out.end(), [](const Claim& a, const Claim& b) {
      if (timeline_less(a, b)) return true;
      if (timeline_less(b, a)) return false;
      // Duplicate claim ids are rejected at ingestion; keep the sort total anyway.
      return std::tie(a.provider_id, a.org_id) < std::tie(b.provider_id, b.org_id);
    });
  });
  return out;
}

}  // namespace teaming
