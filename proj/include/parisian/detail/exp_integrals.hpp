#ifndef PARISIAN_DETAIL_EXP_INTEGRALS_HPP
#define PARISIAN_DETAIL_EXP_INTEGRALS_HPP

#include <cmath>
#include <complex>
#include <cstdlib>

namespace parisian::detail {

// power_moment(m, delta, L) = integral_0^L t^m e^{delta t} dt.
//
// The upward recurrence J_m = (L^m e^{dL} - m J_{m-1})/d cancels badly when
// |delta L| is small, so a Taylor series takes over there. Needed for
// m <= 4 (products of confluent scale-function terms).
inline std::complex<double> power_moment(int m, std::complex<double> delta, double L) {
  using cd = std::complex<double>;
  if (L == 0.0) return 0.0;
  const double scale = std::abs(delta) * std::abs(L);
  if (scale < 0.5) {
    // J_m = L^{m+1} sum_k (delta L)^k / (k! (m+k+1))
    const cd z = delta * L;
    cd term = 1.0, sum = 1.0 / double(m + 1);
    for (int k = 1; k < 40; ++k) {
      term *= z / double(k);
      const cd add = term / double(m + k + 1);
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return std::pow(cd(L, 0.0), m + 1) * sum;
  }
  const cd eL = std::exp(delta * L);
  cd j = (eL - 1.0) / delta;
  double Lp = 1.0;
  for (int k = 1; k <= m; ++k) {
    Lp *= L;
    j = (Lp * eL - double(k) * j) / delta;
  }
  return j;
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r *= double(n - k + j) / double(j);
  return r;
}

// integral_{lo}^{hi} t^m e^{delta t} dt, evaluated relative to the interval
// start (t = lo + u) so the result never comes out of a near-equal
// difference of antiderivatives.
inline std::complex<double> power_moment(int m, std::complex<double> delta, double lo, double hi) {
  using cd = std::complex<double>;
  if (hi <= lo) return 0.0;
  if (lo == 0.0) return power_moment(m, delta, hi);
  const double span = hi - lo;
  cd sum = 0.0;
  double lo_pow = 1.0; // lo^{m-j}
  // walk j = m down to 0 so lo_pow accumulates multiplicatively
  cd parts[5];
  for (int j = 0; j <= m; ++j) parts[j] = power_moment(j, delta, span);
  for (int j = m; j >= 0; --j) {
    sum += binomial(m, j) * lo_pow * parts[j];
    lo_pow *= lo;
  }
  return std::exp(delta * lo) * sum;
}

inline double factorial(int n) {
  double r = 1.0;
  for (int j = 2; j <= n; ++j) r *= double(j);
  return r;
}

} // namespace parisian::detail

#endif
