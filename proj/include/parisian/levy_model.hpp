#ifndef PARISIAN_LEVY_MODEL_HPP
#define PARISIAN_LEVY_MODEL_HPP

#include <complex>
#include <string>
#include <vector>

namespace parisian {

// Catalog of spectrally negative Levy models with rational Laplace
// exponents. Claims (downward jumps) are exponential with rate
// jump_mean_inv, arriving at rate jump_rate. The drift parameter is the
// natural one (premium rate c for CramerLundbergExp), not the
// Levy-Khintchine gamma; with finite-activity exponential jumps the two
// differ by jump_rate * E[J 1{J<1}], which no formula here needs.
enum class Family {
  BrownianDrift,     // X_t = mu t + sigma B_t
  CramerLundbergExp, // X_t = c t - compound Poisson(exponential claims)
  JumpDiffusionExp,  // both
};

enum class VariationClass { Bounded, Unbounded };

struct LevyModel {
  Family family = Family::BrownianDrift;
  double mu = 0.0;            // drift rate; premium rate c for CramerLundbergExp
  double sigma = 0.0;         // Gaussian coefficient
  double jump_rate = 0.0;     // Poisson intensity eta of downward jumps
  double jump_mean_inv = 1.0; // rate alpha of the exponential claim law (mean 1/alpha)

  static LevyModel brownian_drift(double mu, double sigma);
  static LevyModel cramer_lundberg_exp(double premium, double eta, double alpha);
  static LevyModel jump_diffusion_exp(double mu, double sigma, double eta, double alpha);
};

const char* family_name(Family f);

// Every violated structural invariant, named; empty if the model is valid.
std::vector<std::string> model_violations(const LevyModel& m);

// Throws std::domain_error listing all violations.
void validate_model(const LevyModel& m);

VariationClass variation_class(const LevyModel& m);

// psi(lam) = log E[e^{lam X_1}] for lam >= 0; throws std::domain_error for
// lam < 0.
double laplace_exponent(const LevyModel& m, double lam);

// Analytic continuation, valid for Re(lam) > -alpha (everywhere for
// BrownianDrift). Used by the contour inversion and by the Chernoff
// horizon bound.
std::complex<double> laplace_exponent(const LevyModel& m, std::complex<double> lam);
double laplace_exponent_ext(const LevyModel& m, double lam);

double laplace_exponent_derivative(const LevyModel& m, double lam);

// Largest nonnegative root of psi(lam) = q (right inverse of psi).
double phi(const LevyModel& m, double q);

// psi'(0+) = E[X_1], in closed form.
double net_profit_drift(const LevyModel& m);

// W^{(q)}(0+): 1/c for bounded variation, 0 otherwise.
double w_at_zero(const LevyModel& m, double q);

// Parses the JSON model file format:
//   {"family": "...", "mu": ..., "sigma": ..., "jump_rate": ..., "jump_mean_inv": ...}
// Unknown fields are rejected; family and mu are required, the rest default
// to 0/0/1. Throws std::invalid_argument (parse/schema) or std::domain_error
// (invariant violations).
LevyModel model_from_json(const std::string& text);
std::string model_to_json(const LevyModel& m);

} // namespace parisian

#endif
