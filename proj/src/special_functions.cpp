// SPDX-License-Identifier: Apache-2.0
#include "teaming/special_functions.hpp"

#include <cmath>
#include <limits>

namespace teaming {

namespace {

// B_{2j} / (2j)! for j = 1..10.
constexpr double kBernoulliOverFactorial[] = {
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
};

// Shift so the Euler-Maclaurin remainder is negligible.
double em_anchor(double s) { return 16.0 + s; }

template <bool WithDerivative>
ZetaValue hurwitz_impl(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) {
    return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  }
  double value = 0.0, deriv = 0.0;
  double x = q;
  const double anchor = em_anchor(s);
  while (x < anchor) {
    double lx = std::log(x);
    double t = std::exp(-s * lx);
    value += t;
    if constexpr (WithDerivative) deriv -= lx * t;
    x += 1.0;
  }
  const double la = std::log(x);
  const double a_s = std::exp(-s * la);  // a^-s
  const double sm1 = s - 1.0;
  value += x * a_s / sm1 + 0.5 * a_s;
  if constexpr (WithDerivative) {
    deriv += x * a_s * (-la / sm1 - 1.0 / (sm1 * sm1)) - 0.5 * la * a_s;
  }
  // Correction terms c_j * P_j(s) * a^(-s-2j+1), P_j(s) = s(s+1)...(s+2j-2).
  double poly = s;
  double poly_dlog = 1.0 / s;  // P_j'(s) / P_j(s)
  double a_pow = a_s / x;      // a^(-s-1)
  const double inv_a2 = 1.0 / (x * x);
  for (int j = 0; j < 10; ++j) {
    double term = kBernoulliOverFactorial[j] * poly * a_pow;
    value += term;
    if constexpr (WithDerivative) deriv += term * (poly_dlog - la);
    if (std::abs(term) < 1e-17 * value) break;
    double k1 = s + 2.0 * j + 1.0, k2 = s + 2.0 * j + 2.0;
    poly *= k1 * k2;
    poly_dlog += 1.0 / k1 + 1.0 / k2;
    a_pow *= inv_a2;
  }
  return {value, deriv};
}

}  // namespace

double hurwitz_zeta(double s, double q) { return hurwitz_impl<false>(s, q).value; }

ZetaValue hurwitz_zeta_with_derivative(double s, double q) { return hurwitz_impl<true>(s, q); }

double log_erfc(double x) {
  if (x < 20.0) return std::log(std::erfc(x));
  // Asymptotic expansion of erfc for large x.
  double x2 = x * x;
  double series = 1.0 - 1.0 / (2.0 * x2) + 3.0 / (4.0 * x2 * x2) - 15.0 / (8.0 * x2 * x2 * x2);
  return -x2 - std::log(x * std::sqrt(M_PI)) + std::log(series);
}

double log1m_exp(double x) {
  if (x > -0.6931471805599453) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

}  // namespace teaming
