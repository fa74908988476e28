#ifndef PARISIAN_DETAIL_QUADRATURE_HPP
#define PARISIAN_DETAIL_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parisian::detail {

struct GaussRule {
  std::vector<double> nodes;   // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n; computed once,
// accurate to machine precision (no transcribed tables).
const GaussRule& gauss_legendre_15();

struct QuadratureError : std::runtime_error {
  double achieved;
  QuadratureError(const std::string& what, double achieved_err)
      : std::runtime_error(what), achieved(achieved_err) {}
};

// Adaptive 15-point Gauss-Legendre with interval bisection.
// rel_tol is relative to the accumulated integral (with an absolute floor);
// throws QuadratureError reporting the achieved error if depth runs out.
double adaptive_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                               double rel_tol = 1e-10, int max_depth = 30);

// Convenience: same, with interior breakpoints the integrand is split at
// (kinks of scale functions at argument zero).
double adaptive_gauss_legendre_split(const std::function<double(double)>& f, double a, double b,
                                     const std::vector<double>& breakpoints,
                                     double rel_tol = 1e-10, int max_depth = 30);

} // namespace parisian::detail

#endif
