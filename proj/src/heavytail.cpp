// SPDX-License-Identifier: Apache-2.0
#include "teaming/heavytail.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <ostream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <nlohmann/json.hpp>

#include "teaming/error.hpp"
#include "teaming/parallel.hpp"
#include "teaming/special_functions.hpp"

namespace teaming {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLikelihoodTolerance = 1e-8;
constexpr double kXminQuantile = 0.95;
constexpr std::uint64_t kDirectGap = 64;

// Tail statistics of a sample for a given x_min.
struct Tail {
  std::size_t first = 0;  // index into distinct()
  std::uint64_t x_min = 1;
  std::uint64_t n = 0;
  double sum_ln = 0.0;
  double sum_excess = 0.0;  // sum of (x - x_min)
};

Tail tail_of(const DegreeSample& sample, std::uint64_t x_min) {
  Tail t;
  t.x_min = x_min;
  auto d = sample.distinct();
  auto c = sample.counts();
  t.first = static_cast<std::size_t>(std::lower_bound(d.begin(), d.end(), x_min) - d.begin());
  for (std::size_t i = t.first; i < d.size(); ++i) {
    t.n += c[i];
    t.sum_ln += static_cast<double>(c[i]) * std::log(static_cast<double>(d[i]));
    t.sum_excess += static_cast<double>(c[i]) * static_cast<double>(d[i] - x_min);
  }
  return t;
}

// ----------------------------------------------------------------------------
// Power law

// Root of the likelihood score: E_alpha[ln X] = mean ln x on the tail.
double solve_alpha(double mean_ln, std::uint64_t x_min) {
  const double m = static_cast<double>(x_min);
  auto score = [&](double alpha) {
    ZetaValue z = hurwitz_zeta_with_derivative(alpha, m);
    return mean_ln + z.derivative / z.value;
  };
  double excess = mean_ln - std::log(m - 0.5);
  double guess = excess > 0.0 ? 1.0 + 1.0 / excess : 3.0;
  double lo = std::max(1.0 + 1e-9, guess - 0.25);
  double hi = std::max(lo + 0.5, guess + 0.25);
  double f_lo = score(lo), f_hi = score(hi);
  for (int i = 0; f_lo > 0.0; ++i) {
    if (lo - 1.0 < 1e-12 || i > 60) throw NonConvergence("power-law alpha root not bracketed below");
    hi = lo;
    f_hi = f_lo;
    lo = 1.0 + (lo - 1.0) / 4.0;
    f_lo = score(lo);
  }
  for (int i = 0; f_hi < 0.0; ++i) {
    if (hi > 1e3 || i > 60) throw NonConvergence("power-law alpha root not bracketed above");
    lo = hi;
    f_lo = f_hi;
    hi = 1.0 + (hi - 1.0) * 2.0;
    f_hi = score(hi);
  }
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  std::uintmax_t max_iter = 100;
  auto [a, b] = boost::math::tools::toms748_solve(score, lo, hi, f_lo, f_hi,
                                                  boost::math::tools::eps_tolerance<double>(45), max_iter);
  return 0.5 * (a + b);
}

// Sup over integers x >= x_min of |empirical CDF - model CDF| on the tail.
double power_law_ks(const DegreeSample& sample, const Tail& tail, double alpha) {
  auto d = sample.distinct();
  auto c = sample.counts();
  const double z_min = hurwitz_zeta(alpha, static_cast<double>(tail.x_min));
  const double n = static_cast<double>(tail.n);
  double survival = 1.0;  // P(X >= current value)
  double cum = 0.0;
  double ks = 0.0;
  for (std::size_t j = tail.first; j < d.size(); ++j) {
    double v = static_cast<double>(d[j]);
    double after = survival - std::exp(-alpha * std::log(v)) / z_min;  // P(X >= v + 1)
    cum += static_cast<double>(c[j]);
    double emp = cum / n;
    ks = std::max(ks, std::abs(emp - (1.0 - after)));
    if (j + 1 == d.size()) break;
    std::uint64_t gap = d[j + 1] - d[j] - 1;
    double next_survival = after;
    if (gap > kDirectGap) {
      next_survival = hurwitz_zeta(alpha, static_cast<double>(d[j + 1])) / z_min;
    } else {
      for (std::uint64_t k = d[j] + 1; k < d[j + 1]; ++k) {
        next_survival -= std::exp(-alpha * std::log(static_cast<double>(k))) / z_min;
      }
    }
    if (gap > 0) ks = std::max(ks, std::abs(emp - (1.0 - next_survival)));
    survival = next_survival;
  }
  return ks;
}

void require_fit_size(const DegreeSample& sample) {
  if (sample.size() < kMinFitSample) {
    throw SampleTooSmall("need at least " + std::to_string(kMinFitSample) + " observations, got " +
                         std::to_string(sample.size()));
  }
}

// ----------------------------------------------------------------------------
// Normalized tail models

// Z(alpha, lambda) = sum_{x >= m} x^-alpha e^{-lambda (x - m)}.
double plec_normalizer(double alpha, double lambda, std::uint64_t x_min) {
  const double m = static_cast<double>(x_min);
  if (lambda <= 0.0) return alpha > 1.0 ? hurwitz_zeta(alpha, m) : kInf;
  constexpr int kDirect = 64;
  double sum = 0.0;
  for (int k = 0; k < kDirect; ++k) sum += std::exp(-alpha * std::log(m + k) - lambda * k);
  const double a = m + kDirect;
  const double fa = std::exp(-alpha * std::log(a) - lambda * kDirect);
  if (fa == 0.0) return sum;
  // Integral of f over [a, inf) as fa * int_0^inf (1 + t/a)^-alpha e^{-lambda t} dt.
  static thread_local boost::math::quadrature::exp_sinh<double> integrator;
  double integral = integrator.integrate(
      [&](double t) { return std::exp(-alpha * std::log1p(t / a) - lambda * t); }, 1e-13);
  const double g1 = -alpha / a - lambda;
  const double g2 = alpha / (a * a);
  const double g3 = -2.0 * alpha / (a * a * a);
  const double f1 = fa * g1;
  const double f3 = fa * (g1 * g1 * g1 + 3.0 * g1 * g2 + g3);
  return sum + fa * integral + 0.5 * fa - f1 / 12.0 + f3 / 720.0;
}

double lognormal_log_sf(double x, double mu, double sigma) {
  return std::log(0.5) + log_erfc((std::log(x) - mu) / (sigma * M_SQRT2));
}
double lognormal_log_cdf(double x, double mu, double sigma) {
  return std::log(0.5) + log_erfc(-(std::log(x) - mu) / (sigma * M_SQRT2));
}

struct TailModel {
  Family family;
  std::vector<double> p;
  std::uint64_t x_min;
  double log_norm = 0.0;  // family-specific normalization term

  TailModel(Family f, std::vector<double> params, std::uint64_t m)
      : family(f), p(std::move(params)), x_min(m) {
    const double md = static_cast<double>(m);
    switch (family) {
      case Family::power_law:
        log_norm = p[0] > 1.0 ? std::log(hurwitz_zeta(p[0], md)) : kInf;
        break;
      case Family::plec:
        log_norm = std::log(plec_normalizer(p[0], p[1], m));
        break;
      case Family::exponential:
        log_norm = p[0] > 0.0 ? log1m_exp(-p[0]) : -kInf;
        break;
      case Family::lognormal:
        log_norm = lognormal_log_sf(md - 0.5, p[0], p[1]);
        break;
      case Family::weibull:
        log_norm = -std::pow((md - 0.5) / p[1], p[0]);
        break;
      case Family::yule:
        log_norm = p[0] > 1.0 ? std::log(p[0] - 1.0) + std::lgamma(md + p[0] - 1.0) - std::lgamma(md) : -kInf;
        break;
    }
  }

  double log_pmf(std::uint64_t xi) const {
    if (xi < x_min) return -kInf;
    const double x = static_cast<double>(xi);
    const double m = static_cast<double>(x_min);
    switch (family) {
      case Family::power_law:
        return -p[0] * std::log(x) - log_norm;
      case Family::plec:
        return -p[0] * std::log(x) - p[1] * (x - m) - log_norm;
      case Family::exponential:
        return log_norm - p[0] * (x - m);
      case Family::lognormal: {
        double mu = p[0], sigma = p[1];
        double mass;
        if (std::log(x) > mu) {
          double lo = lognormal_log_sf(x - 0.5, mu, sigma), hi = lognormal_log_sf(x + 0.5, mu, sigma);
          mass = lo + log1m_exp(hi - lo);
        } else {
          double lo = lognormal_log_cdf(x - 0.5, mu, sigma), hi = lognormal_log_cdf(x + 0.5, mu, sigma);
          mass = hi + log1m_exp(lo - hi);
        }
        return mass - log_norm;
      }
      case Family::weibull: {
        double lo = -std::pow((x - 0.5) / p[1], p[0]);
        double hi = -std::pow((x + 0.5) / p[1], p[0]);
        return lo + log1m_exp(hi - lo) - log_norm;
      }
      case Family::yule:
        return log_norm + std::lgamma(x) - std::lgamma(x + p[0]);
    }
    return -kInf;
  }
};

double tail_log_likelihood(const DegreeSample& sample, const Tail& tail, const TailModel& model) {
  auto d = sample.distinct();
  auto c = sample.counts();
  double ll = 0.0;
  for (std::size_t i = tail.first; i < d.size(); ++i) ll += static_cast<double>(c[i]) * model.log_pmf(d[i]);
  return std::isnan(ll) ? -kInf : ll;
}

// KS distance of a fitted model by walking every integer of the tail range.
double model_ks(const DegreeSample& sample, const Tail& tail, const TailModel& model) {
  auto d = sample.distinct();
  auto c = sample.counts();
  const double n = static_cast<double>(tail.n);
  double cdf = 0.0, cum = 0.0, ks = 0.0;
  std::size_t j = tail.first;
  for (std::uint64_t x = tail.x_min; j < d.size(); ++x) {
    double lp = model.log_pmf(x);
    if (std::isfinite(lp)) cdf += std::exp(lp);
    if (x == d[j]) {
      cum += static_cast<double>(c[j]);
      ++j;
    }
    ks = std::max(ks, std::abs(cum / n - std::min(cdf, 1.0)));
  }
  return ks;
}

// ----------------------------------------------------------------------------
// Nelder-Mead on R^k.

struct Minimum {
  std::vector<double> x;
  double f;
  bool converged;
  int evaluations;
};

Minimum nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                    const std::vector<double>& step, int max_evals = 4000) {
  const std::size_t k = x0.size();
  std::vector<std::vector<double>> simplex(k + 1, x0);
  std::vector<double> fv(k + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    double v = f(x);
    return std::isnan(v) ? kInf : v;
  };
  for (std::size_t i = 0; i < k; ++i) simplex[i + 1][i] += step[i];
  for (std::size_t i = 0; i <= k; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> order(k + 1);
  bool converged = false;
  while (evals < max_evals) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[k - 1];
    if (std::isfinite(fv[worst]) && fv[worst] - fv[best] <= kLikelihoodTolerance) {
      converged = true;
      break;
    }
    std::vector<double> centroid(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t v = 0; v < k; ++v) centroid[v] += simplex[order[i]][v] / static_cast<double>(k);
    }
    auto along = [&](double t) {
      std::vector<double> x(k);
      for (std::size_t v = 0; v < k; ++v) x[v] = centroid[v] + t * (simplex[worst][v] - centroid[v]);
      return x;
    };
    auto xr = along(-1.0);
    double fr = eval(xr);
    if (fr < fv[best]) {
      auto xe = along(-2.0);
      double fe = eval(xe);
      if (fe < fr) {
        simplex[worst] = xe;
        fv[worst] = fe;
      } else {
        simplex[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[worst] = xr;
      fv[worst] = fr;
    } else {
      auto xc = fr < fv[worst] ? along(-0.5) : along(0.5);
      double fc = eval(xc);
      if (fc < std::min(fr, fv[worst])) {
        simplex[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 1; i <= k; ++i) {
          auto& x = simplex[order[i]];
          for (std::size_t v = 0; v < k; ++v) x[v] = simplex[best][v] + 0.5 * (x[v] - simplex[best][v]);
          fv[order[i]] = eval(x);
        }
      }
    }
  }
  auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
  return {simplex[best], fv[best], converged, evals};
}

// Runs Nelder-Mead from each start and restarts from the best point once.
Minimum minimize(const std::function<double(const std::vector<double>&)>& f,
                 const std::vector<std::vector<double>>& starts, const std::vector<double>& step,
                 const char* what) {
  Minimum best{{}, kInf, false, 0};
  int evals = 0;
  for (const auto& s : starts) {
    Minimum m = nelder_mead(f, s, step);
    evals += m.evaluations;
    if (m.f < best.f || best.x.empty()) best = m;
  }
  if (best.x.empty() || !std::isfinite(best.f)) {
    throw NonConvergence(std::string(what) + ": no finite log-likelihood found from any start");
  }
  std::vector<double> small(step.size());
  for (std::size_t i = 0; i < step.size(); ++i) small[i] = step[i] * 0.1;
  Minimum polished = nelder_mead(f, best.x, small);
  evals += polished.evaluations;
  if (polished.f <= best.f) best = polished;
  if (!polished.converged) {
    throw NonConvergence(std::string(what) + ": Nelder-Mead did not reach tolerance " +
                         std::to_string(kLikelihoodTolerance) + " after " + std::to_string(evals) +
                         " evaluations (best -logL " + std::to_string(best.f) + ")");
  }
  best.evaluations = evals;
  return best;
}

}  // namespace

// ----------------------------------------------------------------------------

std::string_view to_string(Family family) {
  switch (family) {
    case Family::power_law: return "power_law";
    case Family::plec: return "plec";
    case Family::exponential: return "exponential";
    case Family::lognormal: return "lognormal";
    case Family::weibull: return "weibull";
    case Family::yule: return "yule";
  }
  return "unknown";
}

Family parse_family(std::string_view text) {
  std::string t(text);
  std::replace(t.begin(), t.end(), '-', '_');
  for (Family f : {Family::power_law, Family::plec, Family::exponential, Family::lognormal,
                   Family::weibull, Family::yule}) {
    if (t == to_string(f)) return f;
  }
  if (t == "truncated_power_law") return Family::plec;
  throw InvalidArgument("unknown distribution family '" + std::string(text) + "'");
}

std::string_view to_string(LrMethod method) {
  return method == LrMethod::vuong ? "vuong" : "nested_chi2";
}

std::vector<std::string> parameter_names(Family family) {
  switch (family) {
    case Family::power_law: return {"alpha"};
    case Family::plec: return {"alpha", "lambda"};
    case Family::exponential: return {"lambda"};
    case Family::lognormal: return {"mu", "sigma"};
    case Family::weibull: return {"shape", "scale"};
    case Family::yule: return {"alpha"};
  }
  return {};
}

DegreeSample::DegreeSample(std::vector<std::uint64_t> values) : values_(std::move(values)) {
  if (std::find(values_.begin(), values_.end(), 0u) != values_.end()) {
    throw InvalidArgument("degree samples must contain only values >= 1");
  }
  std::sort(values_.begin(), values_.end());
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i == 0 || values_[i] != values_[i - 1]) {
      distinct_.push_back(values_[i]);
      counts_.push_back(0);
    }
    ++counts_.back();
  }
}

double log_pmf(const DegreeFitResult& fit, std::uint64_t x) {
  return TailModel(fit.family, fit.parameters, fit.x_min).log_pmf(x);
}

double power_law_alpha_mle(const DegreeSample& sample, std::uint64_t x_min) {
  Tail t = tail_of(sample, x_min);
  if (t.n == 0) throw SampleTooSmall("no observations at or above x_min");
  if (t.sum_excess == 0.0) throw DegenerateSample("tail has a single distinct value");
  return solve_alpha(t.sum_ln / static_cast<double>(t.n), x_min);
}

DegreeFitResult fit_power_law(const DegreeSample& sample) {
  require_fit_size(sample);
  auto d = sample.distinct();
  auto c = sample.counts();
  if (d.size() < 2) throw DegenerateSample("all observations are equal");

  // Suffix sums let every candidate tail be summarized in O(1).
  std::vector<double> suffix_n(d.size() + 1, 0.0), suffix_ln(d.size() + 1, 0.0);
  for (std::size_t i = d.size(); i-- > 0;) {
    suffix_n[i] = suffix_n[i + 1] + static_cast<double>(c[i]);
    suffix_ln[i] = suffix_ln[i + 1] + static_cast<double>(c[i]) * std::log(static_cast<double>(d[i]));
  }
  const auto last = static_cast<std::size_t>(std::floor(kXminQuantile * static_cast<double>(d.size() - 1)));

  DegreeFitResult best;
  best.family = Family::power_law;
  best.ks_statistic = kInf;
  for (std::size_t i = 0; i <= last; ++i) {
    Tail t;
    t.first = i;
    t.x_min = d[i];
    t.n = static_cast<std::uint64_t>(suffix_n[i]);
    t.sum_ln = suffix_ln[i];
    double alpha = solve_alpha(t.sum_ln / suffix_n[i], t.x_min);
    double ks = power_law_ks(sample, t, alpha);
    if (ks < best.ks_statistic) {
      best.ks_statistic = ks;
      best.x_min = t.x_min;
      best.n_tail = t.n;
      best.parameters = {alpha};
      best.log_likelihood = -alpha * t.sum_ln - suffix_n[i] * std::log(hurwitz_zeta(alpha, static_cast<double>(t.x_min)));
    }
  }
  return best;
}

std::uint64_t sample_discrete_power_law(Rng& rng, double alpha, std::uint64_t x_min) {
  // Rejection from floor(Y), Y continuous Pareto on [x_min, inf). The
  // acceptance ratio h(x_min) / h(x) uses h(x) = sum-to-integral ratio,
  // which increases in x, so the envelope is exact.
  const double m = static_cast<double>(x_min);
  const double am1 = alpha - 1.0;
  auto h = [&](double x) { return -x * std::expm1(-am1 * std::log1p(1.0 / x)); };
  const double h_min = h(m);
  constexpr double kCap = 9.0e18;
  for (;;) {
    double y = m * std::exp(-std::log(rng.uniform_open()) / am1);
    double x = std::floor(std::min(y, kCap));
    if (rng.uniform() * h(x) <= h_min) return static_cast<std::uint64_t>(x);
  }
}

BootstrapResult bootstrap_p(const DegreeSample& sample, const DegreeFitResult& fit,
                            const BootstrapOptions& options) {
  BootstrapResult result;
  result.reps = options.n_reps;
  if (options.n_reps == 0) {
    result.p = 1.0;
    result.warning = "bootstrap requested with 0 replicates; p defined as 1";
    return result;
  }
  if (fit.family != Family::power_law) throw InvalidArgument("bootstrap_p needs a power-law fit");
  const double alpha = fit.parameters.at(0);
  std::vector<std::uint64_t> body;
  for (auto v : sample.values()) {
    if (v < fit.x_min) body.push_back(v);
  }
  const std::size_t n = sample.size();
  const double p_tail = static_cast<double>(fit.n_tail) / static_cast<double>(n);

  std::vector<double> ks(options.n_reps, kInf);
  parallel_for(options.n_reps, options.threads, [&](std::size_t r) {
    Rng rng(derive_seed(options.seed, r));
    std::vector<std::uint64_t> synthetic(n);
    for (auto& x : synthetic) {
      if (body.empty() || rng.uniform() < p_tail) {
        x = sample_discrete_power_law(rng, alpha, fit.x_min);
      } else {
        x = body[rng.below(body.size())];
      }
    }
    try {
      ks[r] = fit_power_law(DegreeSample(std::move(synthetic))).ks_statistic;
    } catch (const Error&) {
      ks[r] = kInf;
    }
  });
  std::size_t at_least = 0;
  for (double k : ks) {
    if (k == kInf) ++result.failed_refits;
    if (k >= fit.ks_statistic) ++at_least;
  }
  result.p = static_cast<double>(at_least) / static_cast<double>(options.n_reps);
  return result;
}

DegreeFitResult fit_alternative(const DegreeSample& sample, Family family, std::uint64_t x_min) {
  if (family == Family::power_law) throw InvalidArgument("fit_alternative: use fit_power_law for the power law");
  require_fit_size(sample);
  if (x_min < 1) throw InvalidArgument("x_min must be >= 1");
  Tail tail = tail_of(sample, x_min);
  if (tail.n == 0) throw SampleTooSmall("no observations at or above x_min");
  if (tail.sum_excess == 0.0) throw DegenerateSample("tail has a single distinct value");
  const double n = static_cast<double>(tail.n);
  const double m = static_cast<double>(x_min);

  auto neg_ll = [&](Family f, std::vector<double> params) {
    TailModel model(f, std::move(params), x_min);
    if (!std::isfinite(model.log_norm)) return kInf;
    double ll = tail_log_likelihood(sample, tail, model);
    return std::isfinite(ll) ? -ll : kInf;
  };

  std::vector<double> params;
  switch (family) {
    case Family::exponential: {
      params = {std::log1p(n / tail.sum_excess)};
      break;
    }
    case Family::plec: {
      const double alpha_pl = solve_alpha(tail.sum_ln / n, x_min);
      const double mean_excess = tail.sum_excess / n;
      auto f = [&](const std::vector<double>& v) { return neg_ll(Family::plec, {v[0], v[1] * v[1]}); };
      std::vector<std::vector<double>> starts;
      for (double lambda0 : {1e-4, 1e-2, 1.0 / (mean_excess + 1.0)}) starts.push_back({alpha_pl, std::sqrt(lambda0)});
      starts.push_back({std::max(0.0, alpha_pl - 1.0), std::sqrt(1.0 / (mean_excess + 1.0))});
      Minimum best = minimize(f, starts, {0.2, 0.05}, "plec fit");
      params = {best.x[0], best.x[1] * best.x[1]};
      // The lambda = 0 boundary is the power law itself; the nested model can
      // never do worse than it.
      if (neg_ll(Family::power_law, {alpha_pl}) < best.f) params = {alpha_pl, 0.0};
      break;
    }
    case Family::lognormal: {
      double mean = tail.sum_ln / n, var = 0.0;
      auto d = sample.distinct();
      auto c = sample.counts();
      for (std::size_t i = tail.first; i < d.size(); ++i) {
        double dl = std::log(static_cast<double>(d[i])) - mean;
        var += static_cast<double>(c[i]) * dl * dl;
      }
      double sd = std::max(0.1, std::sqrt(var / n));
      auto f = [&](const std::vector<double>& v) { return neg_ll(Family::lognormal, {v[0], std::exp(v[1])}); };
      Minimum best = minimize(f, {{mean, std::log(sd)}, {std::log(m), std::log(2.0 * sd)}}, {0.5, 0.3},
                              "lognormal fit");
      params = {best.x[0], std::exp(best.x[1])};
      break;
    }
    case Family::weibull: {
      double mean = tail.sum_excess / n + m;
      auto f = [&](const std::vector<double>& v) {
        return neg_ll(Family::weibull, {std::exp(v[0]), std::exp(v[1])});
      };
      Minimum best = minimize(f, {{std::log(0.5), std::log(mean)}, {0.0, std::log(mean)}}, {0.3, 0.5},
                              "weibull fit");
      params = {std::exp(best.x[0]), std::exp(best.x[1])};
      break;
    }
    case Family::yule: {
      // alpha = 1 + e^u; brent over u.
      auto f = [&](double u) { return neg_ll(Family::yule, {1.0 + std::exp(u)}); };
      auto [u, fu] = boost::math::tools::brent_find_minima(f, -20.0, 8.0, std::numeric_limits<double>::digits / 2);
      (void)fu;
      params = {1.0 + std::exp(u)};
      break;
    }
    case Family::power_law:
      break;
  }

  TailModel model(family, params, x_min);
  DegreeFitResult fit;
  fit.family = family;
  fit.parameters = params;
  fit.x_min = x_min;
  fit.n_tail = tail.n;
  fit.log_likelihood = tail_log_likelihood(sample, tail, model);
  if (!std::isfinite(fit.log_likelihood)) {
    throw NonConvergence(std::string(to_string(family)) + " fit produced a non-finite log-likelihood");
  }
  fit.ks_statistic = model_ks(sample, tail, model);
  return fit;
}

LrComparison compare(const DegreeSample& sample, const DegreeFitResult& power_law,
                     const DegreeFitResult& alternative) {
  if (power_law.x_min != alternative.x_min || power_law.n_tail != alternative.n_tail) {
    throw MismatchedTails("compared fits must share x_min and tail (" + std::to_string(power_law.x_min) +
                          "/" + std::to_string(power_law.n_tail) + " vs " +
                          std::to_string(alternative.x_min) + "/" + std::to_string(alternative.n_tail) + ")");
  }
  Tail tail = tail_of(sample, power_law.x_min);
  if (tail.n != power_law.n_tail) throw MismatchedTails("fit tail size does not match this sample");

  TailModel pl(power_law.family, power_law.parameters, power_law.x_min);
  TailModel alt(alternative.family, alternative.parameters, alternative.x_min);
  auto d = sample.distinct();
  auto c = sample.counts();
  const double n = static_cast<double>(tail.n);
  std::vector<double> diffs;
  double sum = 0.0;
  for (std::size_t i = tail.first; i < d.size(); ++i) {
    double l = pl.log_pmf(d[i]) - alt.log_pmf(d[i]);
    diffs.push_back(l);
    sum += static_cast<double>(c[i]) * l;
  }
  const double mean = sum / n;
  double var = 0.0;
  for (std::size_t i = tail.first, k = 0; i < d.size(); ++i, ++k) {
    double dl = diffs[k] - mean;
    var += static_cast<double>(c[i]) * dl * dl;
  }
  var /= n;

  LrComparison out;
  out.alternative = alternative.family;
  out.log_ratio = sum;
  const double sigma = std::sqrt(var);
  if (sigma > 0.0) {
    out.normalized_ratio = sum / (sigma * std::sqrt(n));
  } else {
    out.normalized_ratio = sum == 0.0 ? 0.0 : std::copysign(kInf, sum);
  }
  if (alternative.family == Family::plec && power_law.family == Family::power_law) {
    out.method = LrMethod::nested_chi2;
    // 2 (logL_plec - logL_pl) ~ chi2(1); its survival is erfc(sqrt(-R)).
    out.p_value = sum < 0.0 ? std::erfc(std::sqrt(-sum)) : 1.0;
  } else {
    out.method = LrMethod::vuong;
    out.p_value = sigma > 0.0 ? std::erfc(std::abs(out.normalized_ratio) / M_SQRT2) : (sum == 0.0 ? 1.0 : 0.0);
  }
  return out;
}

HeavyTailReport full_report(const DegreeSample& sample, const ReportOptions& options) {
  HeavyTailReport report;
  report.power_law = fit_power_law(sample);
  report.bootstrap = bootstrap_p(sample, report.power_law, options.bootstrap);
  report.power_law.bootstrap_p = report.bootstrap.p;
  report.power_law_plausible = report.bootstrap.p > 0.1;
  double most_negative = 0.0;
  for (Family f : options.alternatives) {
    if (f == Family::power_law) continue;
    DegreeFitResult alt = fit_alternative(sample, f, report.power_law.x_min);
    LrComparison cmp = compare(sample, report.power_law, alt);
    if (cmp.alternative_preferred() && cmp.log_ratio < most_negative) {
      most_negative = cmp.log_ratio;
      report.best = f;
    }
    report.alternatives.push_back(std::move(alt));
    report.comparisons.push_back(cmp);
  }
  if (!report.best && report.power_law_plausible) report.best = Family::power_law;
  return report;
}

nlohmann::json to_json(const DegreeFitResult& fit) {
  nlohmann::json params = nlohmann::json::object();
  auto names = parameter_names(fit.family);
  for (std::size_t i = 0; i < fit.parameters.size() && i < names.size(); ++i) params[names[i]] = fit.parameters[i];
  nlohmann::json j{{"family", to_string(fit.family)},
                   {"parameters", params},
                   {"x_min", fit.x_min},
                   {"n_tail", fit.n_tail},
                   {"ks_statistic", fit.ks_statistic},
                   {"log_likelihood", fit.log_likelihood}};
  if (fit.bootstrap_p) j["bootstrap_p"] = *fit.bootstrap_p;
  return j;
}

nlohmann::json to_json(const HeavyTailReport& report) {
  nlohmann::json comparisons = nlohmann::json::array();
  for (std::size_t i = 0; i < report.comparisons.size(); ++i) {
    const auto& c = report.comparisons[i];
    comparisons.push_back({{"alternative", to_string(c.alternative)},
                           {"method", to_string(c.method)},
                           {"log_ratio", c.log_ratio},
                           {"normalized_ratio", c.normalized_ratio},
                           {"p_value", c.p_value},
                           {"alternative_preferred", c.alternative_preferred()},
                           {"fit", to_json(report.alternatives[i])}});
  }
  nlohmann::json j{{"power_law", to_json(report.power_law)},
                   {"bootstrap", {{"p", report.bootstrap.p},
                                  {"replicates", report.bootstrap.reps},
                                  {"failed_refits", report.bootstrap.failed_refits}}},
                   {"power_law_plausible", report.power_law_plausible},
                   {"comparisons", comparisons},
                   {"best", report.best ? nlohmann::json(to_string(*report.best)) : nlohmann::json(nullptr)},
                   {"conventions",
                    {{"plausibility", "bootstrap p > 0.1"},
                     {"preference", "alternative preferred iff log_ratio < 0 and p < 0.05"},
                     {"plec_test", "nested likelihood-ratio test, chi-square(1) p-value"},
                     {"non_nested_test", "Vuong normalized log-likelihood ratio, two-sided p-value"},
                     {"x_min_search", "distinct values up to the 95th percentile of distinct values"},
                     {"discretization", "lognormal and weibull use unit-interval mass around each integer"}}}};
  if (report.bootstrap.warning) j["bootstrap"]["warning"] = *report.bootstrap.warning;
  return j;
}

void write_report_tsv_header(std::ostream& out) {
  out << "network\tpl_p";
  for (Family f : kAlternativeFamilies) out << '\t' << to_string(f) << "_lr\t" << to_string(f) << "_p";
  out << '\n';
}

void write_report_tsv_row(std::ostream& out, std::string_view label, const HeavyTailReport& report) {
  auto prev = out.precision(10);
  out << label << '\t' << report.bootstrap.p;
  for (Family f : kAlternativeFamilies) {
    auto it = std::find_if(report.comparisons.begin(), report.comparisons.end(),
                           [f](const LrComparison& c) { return c.alternative == f; });
    if (it == report.comparisons.end()) {
      out << "\tNA\tNA";
    } else {
      out << '\t' << it->normalized_ratio << '\t' << it->p_value;
    }
  }
  out << '\n';
  out.precision(prev);
}

}  // namespace teaming
