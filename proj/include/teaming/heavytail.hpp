// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "teaming/random.hpp"

namespace teaming {

// Discrete families fitted on the tail x >= x_min.
//   power_law    p(x) ~ x^-alpha
//   plec         p(x) ~ x^-alpha e^-lambda x
//   exponential  p(x) ~ e^-lambda x
//   lognormal    unit-interval mass of a lognormal(mu, sigma)
//   weibull      unit-interval mass of a Weibull(shape, scale)
//   yule         p(x) ~ B(x, alpha)  (Yule-Simon)
enum class Family { power_law, plec, exponential, lognormal, weibull, yule };

std::string_view to_string(Family family);
// Throws InvalidArgument on an unknown token.
Family parse_family(std::string_view text);

inline constexpr Family kAlternativeFamilies[] = {Family::plec, Family::exponential,
                                                  Family::lognormal, Family::weibull, Family::yule};
inline constexpr std::size_t kMinFitSample = 50;

// Multiset of positive integer observations, kept sorted.
class DegreeSample {
 public:
  // Throws InvalidArgument if any value is 0.
  explicit DegreeSample(std::vector<std::uint64_t> values);

  std::size_t size() const { return values_.size(); }
  std::span<const std::uint64_t> values() const { return values_; }
  // Distinct values ascending with their multiplicities.
  std::span<const std::uint64_t> distinct() const { return distinct_; }
  std::span<const std::uint64_t> counts() const { return counts_; }

 private:
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> distinct_;
  std::vector<std::uint64_t> counts_;
};

struct DegreeFitResult {
  Family family = Family::power_law;
  // power_law: {alpha}; plec: {alpha, lambda}; exponential: {lambda};
  // lognormal: {mu, sigma}; weibull: {shape, scale}; yule: {alpha}.
  std::vector<double> parameters;
  std::uint64_t x_min = 1;
  double ks_statistic = 0.0;
  double log_likelihood = 0.0;
  std::optional<double> bootstrap_p;
  std::uint64_t n_tail = 0;
};

std::vector<std::string> parameter_names(Family family);

// log P(X = x | X >= x_min) under a fitted model; -inf outside the support.
double log_pmf(const DegreeFitResult& fit, std::uint64_t x);

// Scans x_min over the distinct values up to the 95th percentile of the
// distinct values, fits alpha by maximum likelihood on each tail and keeps
// the x_min with the smallest KS distance. Throws SampleTooSmall (< 50
// observations) or DegenerateSample (all values equal).
DegreeFitResult fit_power_law(const DegreeSample& sample);

// Maximum-likelihood alpha for a fixed x_min (score root).
double power_law_alpha_mle(const DegreeSample& sample, std::uint64_t x_min);

// Exact draw from the discrete power law on [x_min, inf), alpha > 1.
std::uint64_t sample_discrete_power_law(Rng& rng, double alpha, std::uint64_t x_min);

struct BootstrapOptions {
  std::size_t n_reps = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct BootstrapResult {
  double p = 1.0;
  std::size_t reps = 0;
  std::size_t failed_refits = 0;  // counted as KS >= observed
  std::optional<std::string> warning;
};

// Semiparametric goodness-of-fit bootstrap: each replicate draws the body
// empirically and the tail from the fitted power law, refits, and compares
// KS distances. Replicate r uses seed derive_seed(seed, r).
BootstrapResult bootstrap_p(const DegreeSample& sample, const DegreeFitResult& fit,
                            const BootstrapOptions& options = {});

// ML fit of an alternative family on the tail x >= x_min, converged to 1e-8
// in log-likelihood. Throws NonConvergence, SampleTooSmall, InvalidArgument
// (family == power_law).
DegreeFitResult fit_alternative(const DegreeSample& sample, Family family, std::uint64_t x_min);

enum class LrMethod { vuong, nested_chi2 };
std::string_view to_string(LrMethod method);

struct LrComparison {
  Family alternative = Family::plec;
  LrMethod method = LrMethod::vuong;
  double log_ratio = 0.0;         // sum of per-observation log pmf differences (power law - alt)
  double normalized_ratio = 0.0;  // log_ratio / (sigma sqrt(n))
  double p_value = 1.0;

  // Alternative preferred iff the ratio is negative and p < 0.05.
  bool alternative_preferred() const { return log_ratio < 0.0 && p_value < 0.05; }
};

// Vuong test for non-nested alternatives; nested likelihood-ratio test with a
// chi-square(1) p-value for plec. Throws MismatchedTails.
LrComparison compare(const DegreeSample& sample, const DegreeFitResult& power_law,
                     const DegreeFitResult& alternative);

struct HeavyTailReport {
  DegreeFitResult power_law;
  BootstrapResult bootstrap;
  std::vector<DegreeFitResult> alternatives;
  std::vector<LrComparison> comparisons;
  // Most negative significant log ratio, else power_law if bootstrap p > 0.1.
  std::optional<Family> best;
  bool power_law_plausible = false;
};

struct ReportOptions {
  BootstrapOptions bootstrap;
  std::vector<Family> alternatives{std::begin(kAlternativeFamilies), std::end(kAlternativeFamilies)};
};

HeavyTailReport full_report(const DegreeSample& sample, const ReportOptions& options = {});

nlohmann::json to_json(const DegreeFitResult& fit);
nlohmann::json to_json(const HeavyTailReport& report);
// Header and one row in the order: label, PL-p, then LR and p for plec,
// exponential, lognormal, weibull, yule. Missing comparisons print NA.
void write_report_tsv_header(std::ostream& out);
void write_report_tsv_row(std::ostream& out, std::string_view label, const HeavyTailReport& report);

}  // namespace teaming
