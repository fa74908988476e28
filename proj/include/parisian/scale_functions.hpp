#ifndef PARISIAN_SCALE_FUNCTIONS_HPP
#define PARISIAN_SCALE_FUNCTIONS_HPP

#include <complex>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "parisian/levy_model.hpp"

namespace parisian {

// Finite sum of terms coef * x^power * e^{rate x} on x >= 0 (zero on x < 0).
// Rational Laplace transforms invert to exactly this shape; conjugate root
// pairs carry conjugate coefficients, so the real part of the sum is the
// usual damped-oscillation combination.
struct ExpMixture {
  struct Term {
    std::complex<double> coef;
    std::complex<double> rate;
    int power = 0;
  };
  std::vector<Term> terms;

  double eval(double x) const;    // 0 for x < 0
  double laplace(double s) const; // integral_0^inf e^{-s x} mixture(x) dx
  // integral_0^inf e^{-s u} mixture(u + x) du for x >= 0; requires
  // s > max Re(rate).
  double laplace_shifted(double s, double x) const;
  // Antiderivative vanishing at 0, again an ExpMixture (picks up a
  // constant term and, for rate ~ 0 terms, a higher power).
  ExpMixture antiderivative() const;
};

enum class ScaleMethod { ClosedForm, RationalInversion, NumericInversion };

// W^{(q)} roots/partial-fraction data for one (model, q) pair.
// RationalInversion works for the whole catalog; ClosedForm is the
// hand-derived two-exponential form (BrownianDrift / CramerLundbergExp
// only); NumericInversion is a fixed-Talbot contour used as a cross-check.
class ScaleContext {
 public:
  ScaleContext(const LevyModel& model, double q,
               ScaleMethod method = ScaleMethod::RationalInversion);

  const LevyModel& model() const { return model_; }
  double q() const { return q_; }
  ScaleMethod method() const { return method_; }
  double phi_q() const { return phi_q_; }
  // True when roots of psi = q coincided within 1e-9 and the confluent
  // (polynomial x exponential) inversion form is in use.
  bool confluent() const { return confluent_; }

  double w(double x) const; // W^{(q)}(x); 0 for x < 0
  double z(double x) const; // Z^{(q)}(x); 1 for x <= 0

  bool has_mixture() const { return method_ != ScaleMethod::NumericInversion; }
  const ExpMixture& mixture() const; // throws for NumericInversion

 private:
  struct Memo {
    std::mutex mutex;
    std::unordered_map<long long, double> values;
  };

  double w_uncached(double x) const;
  double talbot(double x) const;

  LevyModel model_;
  double q_ = 0.0;
  ScaleMethod method_ = ScaleMethod::RationalInversion;
  double phi_q_ = 0.0;
  bool confluent_ = false;
  ExpMixture mix_;   // valid unless NumericInversion
  ExpMixture zmix_;  // Z^{(q)} as a mixture (includes the constant 1)
  std::unique_ptr<Memo> memo_; // behind a pointer so contexts stay movable
};

// Partial-fraction representation of W^{(q)} (RationalInversion route).
ExpMixture scale_mixture(const LevyModel& model, double q);

// m(v + u) expanded as a mixture in u. For v < 0 the expansion is formal
// and only valid where v + u >= 0.
ExpMixture expand_shift(const ExpMixture& m, double v);

// The convolution (a * b)(u) = integral_0^u a(u-z) b(z) dz as a mixture
// (product of the Laplace transforms, re-expanded by partial fractions;
// rates coinciding within 1e-9 merge into higher-power terms).
ExpMixture mixture_convolve(const ExpMixture& a, const ExpMixture& b);

// Merge terms with equal (rate, power); drops negligible coefficients.
void consolidate_mixture(ExpMixture& m);

// H^{(p,q_shift)}(x) = e^{Phi(p)x} (1 + q_shift int_0^x e^{-Phi(p)y} W^{(p+q_shift)}(y) dy);
// equals e^{Phi(p)x} for x <= 0. Requires p >= 0 and p + q_shift >= 0.
// For q_shift < 0 the equivalent tail form
//   -q_shift int_0^inf e^{-Phi(p)u} W^{(p+q_shift)}(u + x) du
// is used; the direct form cancels catastrophically at large x.
double h_aux(const LevyModel& model, double p, double q_shift, double x);

// Same, with precomputed pieces (phi_p = Phi(p), w_pq = W^{(p+q_shift)}).
double h_aux(const ExpMixture& w_pq, double phi_p, double q_shift, double x);

// g(theta, q, x, y) in its two algebraically equal representations:
//   g_fn:     W^{(theta+q)}(x+y) - q int_0^x W^{(theta)}(x-z) W^{(theta+q)}(z+y) dz
//   g_fn_alt: W^{(theta)}(x+y) + q int_0^y W^{(theta)}(x+y-z) W^{(theta+q)}(z) dz
// g_fn_alt is the numerically preferred (all-positive) form for y >= 0.
double g_fn(const LevyModel& model, double theta, double q, double x, double y);
double g_fn_alt(const LevyModel& model, double theta, double q, double x, double y);
double g_fn(const ScaleContext& w_theta, const ScaleContext& w_theta_q, double q, double x,
            double y);
double g_fn_alt(const ScaleContext& w_theta, const ScaleContext& w_theta_q, double q, double x,
                double y);

// integral_{lower}^{upper} W_a(outer - z) W_b(z + shift) dz. Closed-form
// product integration when both contexts carry mixtures, adaptive
// Gauss-Legendre otherwise.
double convolve_scale(const ScaleContext& wa, const ScaleContext& wb, double outer, double lower,
                      double upper, double shift);

// | integral_0^L e^{-lam x} W^{(q)}(x) dx - 1/(psi(lam)-q) | with L chosen
// from the e^{(Phi(q)-lam)L} tail bound. Requires lam > Phi(q).
double laplace_identity_residual(const ScaleContext& ctx, double lam);

} // namespace parisian

#endif
