#include "parisian/detail/poly_roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace parisian::detail {

namespace {

// One or two Newton steps; the closed-form seeds are already close, this
// just scrubs the last couple of bits.
cdouble polish(const std::vector<double>& coeffs, cdouble x) {
  for (int it = 0; it < 4; ++it) {
    cdouble p = 0.0, dp = 0.0;
    for (std::size_t k = coeffs.size(); k-- > 0;) {
      dp = dp * x + p;
      p = p * x + coeffs[k];
    }
    if (std::abs(dp) < 1e-300) break; // multiple root; leave to clustering
    cdouble step = p / dp;
    x -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
  }
  return x;
}

} // namespace

cdouble poly_eval(const std::vector<double>& coeffs, cdouble x) {
  cdouble p = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) p = p * x + coeffs[k];
  return p;
}

std::vector<cdouble> solve_quadratic(double b, double c) {
  const double disc = b * b - 4.0 * c;
  if (disc >= 0.0) {
    // Avoid cancellation: compute the large-magnitude root first.
    const double s = std::sqrt(disc);
    const double q = -0.5 * (b + (b >= 0.0 ? s : -s));
    double r1 = q;
    double r2 = (q != 0.0) ? c / q : -b - q;
    return {cdouble(r1, 0.0), cdouble(r2, 0.0)};
  }
  const double re = -0.5 * b;
  const double im = 0.5 * std::sqrt(-disc);
  return {cdouble(re, im), cdouble(re, -im)};
}

std::vector<cdouble> solve_cubic(double a, double b, double c) {
  // Depressed form t^3 + p t + q with x = t - a/3.
  const double shift = a / 3.0;
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;

  std::vector<cdouble> roots;
  const double half_q = 0.5 * q;
  const double disc = half_q * half_q + p * p * p / 27.0;
  if (disc <= 0.0) {
    // Three real roots, trigonometric form.
    const double m = std::sqrt(std::max(0.0, -p / 3.0));
    double arg = (m > 0.0) ? (-half_q / (m * m * m)) : 0.0;
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    constexpr double two_pi_3 = 2.0 * std::numbers::pi / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots.emplace_back(2.0 * m * std::cos(phi - two_pi_3 * k) - shift, 0.0);
    }
  } else {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-half_q + s);
    const double v = std::cbrt(-half_q - s);
    const double real_root = u + v - shift;
    const double re = -0.5 * (u + v) - shift;
    const double im = 0.5 * std::sqrt(3.0) * (u - v);
    roots.emplace_back(real_root, 0.0);
    roots.emplace_back(re, im);
    roots.emplace_back(re, -im);
  }
  return roots;
}

std::vector<cdouble> poly_roots(const std::vector<double>& coeffs) {
  const std::size_t deg = coeffs.size() - 1;
  if (deg != 2 && deg != 3) throw std::invalid_argument("poly_roots: degree must be 2 or 3");
  const double lead = coeffs[deg];
  if (lead == 0.0) throw std::invalid_argument("poly_roots: zero leading coefficient");

  std::vector<cdouble> roots;
  if (deg == 2) {
    roots = solve_quadratic(coeffs[1] / lead, coeffs[0] / lead);
  } else {
    roots = solve_cubic(coeffs[2] / lead, coeffs[1] / lead, coeffs[0] / lead);
  }
  for (auto& r : roots) {
    r = polish(coeffs, r);
    // Real cubics produce conjugate pairs; tiny imaginary leakage from the
    // polish is snapped back to the axis.
    if (std::abs(r.imag()) < 1e-12 * (1.0 + std::abs(r.real()))) r = cdouble(r.real(), 0.0);
  }
  return roots;
}

} // namespace parisian::detail
