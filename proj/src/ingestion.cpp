// SPDX-License-Identifier: Apache-2.0
#include "teaming/ingestion.hpp"

#include <algorithm>
#include <limits>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include "csv.hpp"
#include "teaming/error.hpp"
#include "teaming/random.hpp"

namespace teaming {

namespace {

std::string strip_bom(std::string line) {
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
      static_cast<unsigned char>(line[1]) == 0xBB && static_cast<unsigned char>(line[2]) == 0xBF) {
    line.erase(0, 3);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

// Empty string when valid, otherwise the rejection reason.
std::string check_npi(const std::string& npi, const char* column, bool luhn) {
  try {
    if (!validate_npi(npi) && luhn) return std::string(column) + " '" + npi + "' fails the Luhn check";
  } catch (const MalformedId&) {
    return std::string(column) + " '" + npi + "' is not 10 digits";
  }
  return {};
}

std::optional<double> parse_coordinate(const std::string& text, std::size_t& decimals) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) return std::nullopt;
  auto dot = text.find('.');
  decimals = dot == std::string::npos ? 0 : text.size() - dot - 1;
  auto e = text.find_first_of("eE");
  if (e != std::string::npos) decimals = 0;
  return value;
}

std::string format_coordinate(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

void RejectionReport::add(std::size_t row, std::string reason, std::size_t max_samples) {
  ++rejected;
  if (samples.size() < max_samples) samples.push_back({row, std::move(reason)});
}

ClaimsParseResult parse_claims(std::istream& in, const ClaimsFormatOptions& options) {
  ClaimsParseResult result;
  std::string line;
  if (!std::getline(in, line) || strip_bom(line) != kClaimsHeader) {
    throw BadHeader(std::string("claims file header must be '") + kClaimsHeader + "'");
  }
  std::unordered_set<std::string> ids;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++result.rejections.rows_read;
    auto reject = [&](std::string reason) {
      result.rejections.add(row, std::move(reason), options.max_rejection_samples);
    };
    auto fields = csv::split(line);
    if (!fields) {
      reject("unterminated quoted field");
      continue;
    }
    if (fields->size() != 5) {
      reject("expected 5 fields, got " + std::to_string(fields->size()));
      continue;
    }
    auto& f = *fields;
    if (f[0].empty()) {
      reject("empty claim_id");
      continue;
    }
    if (f[1].empty()) {
      reject("empty patient_id");
      continue;
    }
    if (auto why = check_npi(f[2], "provider_npi", options.check_npi_luhn); !why.empty()) {
      reject(why);
      continue;
    }
    if (auto why = check_npi(f[3], "org_npi", options.check_npi_luhn); !why.empty()) {
      reject(why);
      continue;
    }
    Day day;
    try {
      day = Day::parse_iso(f[4]);
    } catch (const InvalidArgument& e) {
      reject(e.what());
      continue;
    }
    if (!ids.insert(f[0]).second) {
      reject("duplicate claim_id '" + f[0] + "'");
      continue;
    }
    result.claims.push_back(Claim{f[0], f[1], f[2], f[3], day});
  }
  return result;
}

ClaimsParseResult parse_claims_file(const std::string& path, const ClaimsFormatOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot open claims file '" + path + "'");
  return parse_claims(in, options);
}

RegistryParseResult parse_provider_registry(std::istream& in) {
  RegistryParseResult result;
  std::string line;
  if (!std::getline(in, line)) throw BadHeader("registry file is empty");
  line = strip_bom(line);
  const std::string base = kRegistryHeader;
  bool has_quality = false;
  if (line == base + ",geocode_quality") {
    has_quality = true;
  } else if (line != base) {
    throw BadHeader("registry header must be '" + base + "' (optionally followed by ',geocode_quality')");
  }
  const std::size_t expected = has_quality ? 7 : 6;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++result.rejections.rows_read;
    auto reject = [&](std::string reason) {
      result.rejections.add(row, std::move(reason), std::numeric_limits<std::size_t>::max());
    };
    auto fields = csv::split(line);
    if (!fields || fields->size() != expected) {
      reject("expected " + std::to_string(expected) + " fields");
      continue;
    }
    auto& f = *fields;
    if (auto why = check_npi(f[0], "npi", true); !why.empty()) {
      reject(why);
      continue;
    }
    ProviderRecord rec;
    rec.npi = f[0];
    if (f[1] == "I") {
      rec.kind = ProviderKind::individual;
    } else if (f[1] == "O") {
      rec.kind = ProviderKind::organization;
    } else {
      reject("kind must be I or O, got '" + f[1] + "'");
      continue;
    }
    std::size_t lat_dec = 0, lon_dec = 0;
    auto lat = parse_coordinate(f[2], lat_dec);
    auto lon = parse_coordinate(f[3], lon_dec);
    if (!lat || !lon) {
      reject("unparseable coordinates");
      continue;
    }
    if (*lat < -90.0 || *lat > 90.0) {
      reject("latitude " + f[2] + " outside [-90, 90]");
      continue;
    }
    if (*lon < -180.0 || *lon > 180.0) {
      reject("longitude " + f[3] + " outside [-180, 180]");
      continue;
    }
    if (lat_dec < 2 || lon_dec < 2) {
      reject("coordinates need at least 2 decimal places");
      continue;
    }
    if (!f[4].empty() && f[4].size() != 2) {
      reject("state must be a 2-letter code");
      continue;
    }
    rec.latitude = *lat;
    rec.longitude = *lon;
    rec.state = f[4];
    rec.specialty = f[5];
    if (has_quality && !f[6].empty()) rec.geocode_quality = f[6];
    auto [it, inserted] = result.registry.insert_or_assign(rec.npi, rec);
    if (!inserted) ++result.duplicate_npis;
  }
  return result;
}

RegistryParseResult parse_provider_registry(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile("cannot open registry file '" + path + "'");
  return parse_provider_registry(in);
}

void write_claims_csv(std::ostream& out, std::span<const Claim> claims) {
  out << kClaimsHeader << '\n';
  for (const Claim& c : claims) {
    out << csv::quote(c.claim_id) << ',' << csv::quote(c.patient_id) << ',' << c.provider_id << ','
        << c.org_id << ',' << c.service_day.to_iso() << '\n';
  }
}

void write_registry_csv(std::ostream& out, const ProviderRegistry& registry) {
  bool quality = std::any_of(registry.begin(), registry.end(),
                             [](const auto& kv) { return kv.second.geocode_quality.has_value(); });
  out << kRegistryHeader << (quality ? ",geocode_quality" : "") << '\n';
  for (const auto& [npi, r] : registry) {
    out << npi << ',' << (r.kind == ProviderKind::individual ? 'I' : 'O') << ','
        << format_coordinate(r.latitude) << ',' << format_coordinate(r.longitude) << ','
        << csv::quote(r.state) << ',' << csv::quote(r.specialty);
    if (quality) out << ',' << csv::quote(r.geocode_quality.value_or(""));
    out << '\n';
  }
}

void write_rejection_report(std::ostream& out, const RejectionReport& report) {
  for (const auto& r : report.samples) out << r.row_number << '\t' << r.reason << '\n';
}

void SynthConfig::validate() const {
  if (n_patients < 1 || n_providers < 1 || n_orgs < 1) {
    throw InvalidArgument("patient, provider and organization counts must be >= 1");
  }
  if (!(mean_visits_per_patient > 0.0) || !std::isfinite(mean_visits_per_patient)) {
    throw InvalidArgument("mean_visits_per_patient must be positive");
  }
  if (!(provider_popularity_exponent >= 0.0) || !std::isfinite(provider_popularity_exponent)) {
    throw InvalidArgument("provider_popularity_exponent must be >= 0");
  }
  if (end < start) throw InvalidArgument("date range start must not be after end");
}

namespace {

struct Metro {
  double lat;
  double lon;
  const char* state;
};

constexpr Metro kMetros[] = {
    {40.7128, -74.0060, "NY"}, {43.1566, -77.6088, "NY"}, {42.8864, -78.8784, "NY"},
    {25.7617, -80.1918, "FL"}, {27.9506, -82.4572, "FL"}, {42.3601, -71.0589, "MA"},
    {41.8781, -87.6298, "IL"}, {29.7604, -95.3698, "TX"}, {34.0522, -118.2437, "CA"},
    {47.6062, -122.3321, "WA"},
};

constexpr const char* kSpecialties[] = {"Internal Medicine", "Family Practice", "Cardiology",
                                        "Nephrology", "Oncology", "Radiology", "Geriatrics"};

std::string make_npi(Rng& rng, char lead, std::set<std::string>& used) {
  for (;;) {
    std::string body(1, lead);
    for (int i = 0; i < 8; ++i) body.push_back(static_cast<char>('0' + rng.below(10)));
    std::string npi = body + static_cast<char>('0' + npi_check_digit(body));
    if (used.insert(npi).second) return npi;
  }
}

double round4(double v) { return std::round(v * 1e4) / 1e4; }

}  // namespace

SyntheticDataset generate_synthetic_claims(const SynthConfig& config) {
  config.validate();
  Rng rng(config.rng_seed);
  SyntheticDataset out;
  std::set<std::string> used;

  std::vector<std::string> orgs;
  std::vector<std::pair<double, double>> org_coords;
  for (std::uint64_t i = 0; i < config.n_orgs; ++i) {
    const Metro& m = kMetros[rng.below(std::size(kMetros))];
    std::string npi = make_npi(rng, '2', used);
    double lat = round4(m.lat + (rng.uniform() - 0.5) * 0.6);
    double lon = round4(m.lon + (rng.uniform() - 0.5) * 0.6);
    out.registry[npi] = ProviderRecord{npi, ProviderKind::organization, lat, lon, m.state, "", std::nullopt};
    orgs.push_back(npi);
    org_coords.emplace_back(lat, lon);
  }

  std::vector<std::string> providers;
  std::vector<std::size_t> provider_org;
  for (std::uint64_t i = 0; i < config.n_providers; ++i) {
    std::size_t org = rng.below(orgs.size());
    std::string npi = make_npi(rng, '1', used);
    double lat = round4(std::clamp(org_coords[org].first + (rng.uniform() - 0.5) * 0.1, -90.0, 90.0));
    double lon = round4(std::clamp(org_coords[org].second + (rng.uniform() - 0.5) * 0.1, -180.0, 180.0));
    const char* specialty = kSpecialties[rng.below(std::size(kSpecialties))];
    out.registry[npi] = ProviderRecord{npi, ProviderKind::individual, lat, lon,
                                       out.registry.at(orgs[org]).state, specialty, std::nullopt};
    providers.push_back(npi);
    provider_org.push_back(org);
  }

  // Zipf-like popularity: P(rank r) proportional to r^-exponent.
  std::vector<double> cdf(providers.size());
  double total = 0.0;
  for (std::size_t r = 0; r < providers.size(); ++r) {
    total += std::pow(static_cast<double>(r + 1), -config.provider_popularity_exponent);
    cdf[r] = total;
  }
  auto pick_provider = [&]() {
    double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
  };

  const std::int64_t span = (config.end - config.start) + 1;
  std::uint64_t claim_counter = 0;
  char buf[32];
  for (std::uint64_t p = 0; p < config.n_patients; ++p) {
    std::snprintf(buf, sizeof buf, "P%08llu", static_cast<unsigned long long>(p + 1));
    std::string patient = buf;
    std::uint64_t visits = rng.poisson(config.mean_visits_per_patient);
    std::vector<std::int64_t> offsets;
    if (config.allow_same_day) {
      for (std::uint64_t v = 0; v < visits; ++v) offsets.push_back(static_cast<std::int64_t>(rng.below(span)));
    } else {
      visits = std::min<std::uint64_t>(visits, static_cast<std::uint64_t>(span));
      std::set<std::int64_t> taken;
      while (offsets.size() < visits) {
        auto d = static_cast<std::int64_t>(rng.below(span));
        if (taken.insert(d).second) offsets.push_back(d);
      }
    }
    for (std::int64_t off : offsets) {
      std::size_t prov = pick_provider();
      std::snprintf(buf, sizeof buf, "C%010llu", static_cast<unsigned long long>(++claim_counter));
      out.claims.push_back(Claim{buf, patient, providers[prov], orgs[provider_org[prov]],
                                 Day(config.start.days_since_epoch() + static_cast<std::int32_t>(off))});
    }
  }
  return out;
}

}  // namespace teaming
