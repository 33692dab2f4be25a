// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace teaming {

struct ZetaValue {
  double value;       // zeta(s, q)
  double derivative;  // d/ds zeta(s, q)
};

// Hurwitz zeta sum_{k>=0} (q + k)^-s for s > 1, q > 0, by direct summation
// up to a shift and an Euler-Maclaurin tail (absolute error below 1e-12 for
// the parameter ranges used in degree fitting).
double hurwitz_zeta(double s, double q);
ZetaValue hurwitz_zeta_with_derivative(double s, double q);

// log(erfc(x)) without underflow for large positive x.
double log_erfc(double x);

// log(1 - exp(x)) for x <= 0.
double log1m_exp(double x);

}  // namespace teaming
