#ifndef PARISIAN_GERBER_SHIU_HPP
#define PARISIAN_GERBER_SHIU_HPP

#include <functional>

#include "parisian/levy_model.hpp"
#include "parisian/scale_functions.hpp"

namespace parisian {

// Query for the Parisian Gerber-Shiu density
//   E_x[e^{-theta tau_q}, X_{tau_q} in dy, tau_q < tau_b^+ ^ tau_{-a}^-] / dy
// with exponential implementation-delay rate q, lower barrier depth a
// (ruin-by-exit level -a) and upper exit level b.
struct GerberShiuQuery {
  double theta = 0.0; // discount rate
  double q = 1.0;     // delay clock rate, must be > 0
  double a = 0.0;     // lower barrier depth
  double b = 0.0;     // upper exit level
  double x = 0.0;     // initial surplus
  double y = 0.0;     // deficit coordinate, y <= 0
};

struct DensityValue {
  double value = 0.0;
};

// Evaluator for one (model, theta, q) triple; caches scale-function data so
// y-grids and quadratures do not re-solve for roots.
//
// Densities are Lebesgue densities in y throughout; nothing special is done
// at y = 0 even for bounded-variation paths (callers sampling y = 0 get the
// density limit from the left).
class ParisianEvaluator {
 public:
  ParisianEvaluator(const LevyModel& model, double theta, double q,
                    ScaleMethod method = ScaleMethod::RationalInversion);

  const LevyModel& model() const { return model_; }
  double theta() const { return theta_; }
  double q() const { return q_; }
  double phi_theta() const { return w_theta_.phi_q(); }
  double phi_theta_q() const { return w_theta_q_.phi_q(); }

  // Evaluate both g representations and fail loudly if they disagree;
  // meant for test/validation runs, off by default.
  void set_cross_check(bool on) { cross_check_ = on; }

  double g(double x, double y) const;      // production form
  double g_check(double x, double y) const; // the other representation
  double h_theta_q(double x) const;        // H^{(theta, q)}(x)
  double h_thetaq_negq(double x) const;    // H^{(theta+q, -q)}(x)

  double density_two_sided(double a, double b, double x, double y) const;
  double density_lower(double a, double x, double y) const;
  double density_upper(double b, double x, double y) const;
  double density_unrestricted(double x, double y) const;

  double laplace_ruin_before_b(double b, double x) const;
  double exponential_penalty(double lambda, double b, double x) const;

  // y-integrals of the densities (adaptive quadrature; the unbounded ones
  // truncate when three consecutive unit panels fall below 1e-14 of the
  // running total).
  double mass_two_sided(double a, double b, double x) const;
  double mass_lower(double a, double x) const;
  double mass_upper(double b, double x) const;
  double mass_unrestricted(double x) const;

 private:
  double integrate_lower_tail(const std::function<double(double)>& f, double x) const;

  // y-dependence of g and H as mixtures in u = -y. The coefficients of
  // every nonnegative rate cancel analytically (that is what makes the
  // densities integrable); dropping them symbolically is what keeps the
  // far tail evaluable, where the direct difference of e^{Phi(theta+q)u}
  // sized terms would be pure rounding noise.
  ExpMixture g_u_mixture(double v) const; // g(v, u), valid u >= max(0, -v)
  ExpMixture h_u_mixture() const;          // H^{(theta,q)}(u), u >= 0
  double density_upper_tail(double b, double x, double u) const;
  double density_unrestricted_tail(double x, double u) const;

  LevyModel model_;
  double theta_ = 0.0;
  double q_ = 0.0;
  ScaleContext w_theta_;
  ScaleContext w_theta_q_;
  bool stable_tail_ = true; // false when the theta and theta+q root sets nearly collide
  bool cross_check_ = false;
};

// Free-function forms of the individual operations.
DensityValue gs_density_two_sided(const LevyModel& model, const GerberShiuQuery& query);
DensityValue gs_density_lower(const LevyModel& model, double theta, double q, double a, double x,
                              double y);
DensityValue gs_density_upper(const LevyModel& model, double theta, double q, double b, double x,
                              double y);
DensityValue gs_density_unrestricted(const LevyModel& model, double theta, double q, double x,
                                     double y);

// E_x[e^{-theta tau_q}; tau_q < tau_b^+]
double laplace_ruin_before_b(const LevyModel& model, double theta, double q, double b, double x);

// P_x(tau_q < infinity); requires the net profit condition psi'(0+) > 0.
double parisian_ruin_prob(const LevyModel& model, double q, double x);

// E_x[e^{-theta tau_q + lambda X_{tau_q}}; tau_q < tau_b^+]
double gs_exponential_penalty(const LevyModel& model, double theta, double q, double lambda,
                              double b, double x);

} // namespace parisian

#endif
