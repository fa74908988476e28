#ifndef PARISIAN_DETAIL_POLY_ROOTS_HPP
#define PARISIAN_DETAIL_POLY_ROOTS_HPP

#include <array>
#include <complex>
#include <vector>

namespace parisian::detail {

using cdouble = std::complex<double>;

// Roots of x^2 + b x + c.
std::vector<cdouble> solve_quadratic(double b, double c);

// Roots of x^3 + a x^2 + b x + c.
std::vector<cdouble> solve_cubic(double a, double b, double c);

// Roots of sum_k coeffs[k] x^k (ascending order, degree 2 or 3, real
// coefficients, nonzero leading coefficient). Roots are Newton-polished
// on the input polynomial.
std::vector<cdouble> poly_roots(const std::vector<double>& coeffs);

cdouble poly_eval(const std::vector<double>& coeffs, cdouble x);

} // namespace parisian::detail

#endif
