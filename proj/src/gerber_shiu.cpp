#include "parisian/gerber_shiu.hpp"

#include <cmath>
#include <stdexcept>

#include "parisian/detail/quadrature.hpp"

namespace parisian {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw std::domain_error(what);
}

// Remove terms whose rate matches one of `rates`; their coefficients are
// analytically zero, so anything beyond rounding residue is an algebra bug.
void drop_rates(ExpMixture& m, const std::vector<std::complex<double>>& rates) {
  double scale = 0.0;
  for (const auto& t : m.terms) scale += std::abs(t.coef);
  ExpMixture kept;
  for (const auto& t : m.terms) {
    bool matches = false;
    for (const auto& r : rates) {
      matches = matches || std::abs(t.rate - r) <= 1e-6 * std::max(1.0, std::abs(r));
    }
    if (!matches) {
      kept.terms.push_back(t);
      continue;
    }
    if (std::abs(t.coef) > 1e-8 * scale) {
      throw std::logic_error("tail mixture cancellation failed; residual coefficient too large");
    }
  }
  m = kept;
}

} // namespace

ParisianEvaluator::ParisianEvaluator(const LevyModel& model, double theta, double q,
                                     ScaleMethod method)
    : model_(model),
      theta_(theta),
      q_(q),
      w_theta_(model, theta, method),
      w_theta_q_(model, theta + q, method) {
  require(theta >= 0.0, "theta must be >= 0");
  require(q > 0.0, "q must be > 0 (exponential delay rate)");
  if (method == ScaleMethod::NumericInversion) {
    throw std::invalid_argument(
        "ParisianEvaluator needs a mixture-backed method (ClosedForm or RationalInversion)");
  }
  for (const auto& ts : w_theta_.mixture().terms) {
    for (const auto& tq : w_theta_q_.mixture().terms) {
      if (std::abs(ts.rate - tq.rate) < 1e-6 * std::max(1.0, std::abs(ts.rate))) {
        stable_tail_ = false; // root sets nearly collide (tiny q); fall back
      }
    }
  }
}

ExpMixture ParisianEvaluator::g_u_mixture(double v) const {
  if (v < 0.0) return expand_shift(g_u_mixture(0.0), v);
  const ExpMixture shifted = expand_shift(w_theta_.mixture(), v);
  ExpMixture g = mixture_convolve(shifted, w_theta_q_.mixture());
  for (auto& t : g.terms) t.coef *= q_;
  for (const auto& t : shifted.terms) g.terms.push_back(t);
  consolidate_mixture(g);
  std::vector<std::complex<double>> theta_rates;
  for (const auto& t : w_theta_.mixture().terms) theta_rates.push_back(t.rate);
  drop_rates(g, theta_rates);
  return g;
}

ExpMixture ParisianEvaluator::h_u_mixture() const {
  ExpMixture unit;
  unit.terms.push_back({1.0, w_theta_.phi_q(), 0});
  ExpMixture h = mixture_convolve(unit, w_theta_q_.mixture());
  for (auto& t : h.terms) t.coef *= q_;
  h.terms.push_back(unit.terms[0]);
  consolidate_mixture(h);
  drop_rates(h, {std::complex<double>(w_theta_.phi_q(), 0.0)});
  return h;
}

double ParisianEvaluator::density_upper_tail(double b, double x, double u) const {
  const double K = h_thetaq_negq(x) / h_thetaq_negq(b);
  const ExpMixture gb = g_u_mixture(b);
  if (u < -x) return q_ * K * gb.eval(u); // g(x, u) still zero here
  ExpMixture far = g_u_mixture(x);
  for (auto& t : far.terms) t.coef *= -1.0;
  for (const auto& t : gb.terms) far.terms.push_back({t.coef * K, t.rate, t.power});
  consolidate_mixture(far);
  drop_rates(far, {std::complex<double>(w_theta_q_.phi_q(), 0.0)});
  return q_ * far.eval(u);
}

double ParisianEvaluator::density_unrestricted_tail(double x, double u) const {
  const double prefactor = w_theta_q_.phi_q() - w_theta_.phi_q();
  const double hx = h_thetaq_negq(x);
  const ExpMixture h_u = h_u_mixture();
  if (u < -x) return prefactor * hx * h_u.eval(u);
  ExpMixture far = g_u_mixture(x);
  for (auto& t : far.terms) t.coef *= -q_;
  for (const auto& t : h_u.terms) {
    far.terms.push_back({t.coef * prefactor * hx, t.rate, t.power});
  }
  consolidate_mixture(far);
  drop_rates(far, {std::complex<double>(w_theta_q_.phi_q(), 0.0)});
  return far.eval(u);
}

double ParisianEvaluator::g(double x, double y) const {
  const double v = g_fn_alt(w_theta_, w_theta_q_, q_, x, y);
  if (cross_check_) {
    const double other = g_fn(w_theta_, w_theta_q_, q_, x, y);
    const double scale = std::max({1.0, std::abs(v), std::abs(other)});
    if (std::abs(v - other) > 1e-6 * scale) {
      throw std::runtime_error("g representations disagree beyond 1e-6");
    }
  }
  return v;
}

double ParisianEvaluator::g_check(double x, double y) const {
  return g_fn(w_theta_, w_theta_q_, q_, x, y);
}

double ParisianEvaluator::h_theta_q(double x) const {
  return h_aux(w_theta_q_.mixture(), w_theta_.phi_q(), q_, x);
}

double ParisianEvaluator::h_thetaq_negq(double x) const {
  return h_aux(w_theta_.mixture(), w_theta_q_.phi_q(), -q_, x);
}

double ParisianEvaluator::density_two_sided(double a, double b, double x, double y) const {
  require(a >= 0.0 && b >= 0.0, "a and b must be >= 0");
  require(x >= -a && x < b, "x must lie in [-a, b)");
  require(y >= -a && y <= 0.0, "y must lie in [-a, 0]");
  const double gba = g(b, a);
  require(gba > 1e-300, "g(theta,q,b,a) underflowed; barriers too wide");
  return q_ * (g(x, a) * g(b, -y) / gba - g(x, -y));
}

double ParisianEvaluator::density_lower(double a, double x, double y) const {
  require(a >= 0.0, "a must be >= 0");
  require(x >= -a, "x must be >= -a");
  require(y >= -a && y <= 0.0, "y must lie in [-a, 0]");
  return q_ * (g(x, a) * h_theta_q(-y) / h_theta_q(a) - g(x, -y));
}

double ParisianEvaluator::density_upper(double b, double x, double y) const {
  require(b >= 0.0, "b must be >= 0");
  require(x <= b, "x must be <= b");
  require(y <= 0.0, "y must be <= 0");
  const double direct_ok = 20.0 / std::max(0.2, w_theta_q_.phi_q());
  if (stable_tail_) {
    const double v = density_upper_tail(b, x, -y);
    if (cross_check_ && -y <= direct_ok && b <= direct_ok) {
      const double direct = q_ * (h_thetaq_negq(x) * g(b, -y) / h_thetaq_negq(b) - g(x, -y));
      if (std::abs(v - direct) > 1e-6 * std::max({1.0, std::abs(v), std::abs(direct)})) {
        throw std::runtime_error("upper density representations disagree beyond 1e-6");
      }
    }
    return v;
  }
  return q_ * (h_thetaq_negq(x) * g(b, -y) / h_thetaq_negq(b) - g(x, -y));
}

double ParisianEvaluator::density_unrestricted(double x, double y) const {
  require(y <= 0.0, "y must be <= 0");
  const double prefactor = w_theta_q_.phi_q() - w_theta_.phi_q();
  if (stable_tail_) {
    const double v = density_unrestricted_tail(x, -y);
    if (cross_check_ && -y <= 20.0 / std::max(0.2, w_theta_q_.phi_q())) {
      const double direct = prefactor * h_thetaq_negq(x) * h_theta_q(-y) - q_ * g(x, -y);
      if (std::abs(v - direct) > 1e-6 * std::max({1.0, std::abs(v), std::abs(direct)})) {
        throw std::runtime_error("unrestricted density representations disagree beyond 1e-6");
      }
    }
    return v;
  }
  return prefactor * h_thetaq_negq(x) * h_theta_q(-y) - q_ * g(x, -y);
}

double ParisianEvaluator::laplace_ruin_before_b(double b, double x) const {
  require(b >= 0.0, "b must be >= 0");
  require(x <= b, "x must be <= b");
  const double hx = h_thetaq_negq(x);
  const double hb = h_thetaq_negq(b);
  return q_ / (theta_ + q_) * (w_theta_.z(x) - hx * w_theta_.z(b) / hb);
}

double ParisianEvaluator::integrate_lower_tail(const std::function<double(double)>& f,
                                               double x) const {
  // integral over y in (-inf, 0], taken panel by panel away from 0; the
  // integrand decays exponentially through W^{(theta)}. Stops after three
  // consecutive panels below 1e-14 of the running total.
  const double panel = 1.0;
  double total = 0.0;
  int faint = 0;
  for (int k = 0; k < 100000; ++k) {
    const double hi = -panel * k;
    const double lo = hi - panel;
    const double piece =
        detail::adaptive_gauss_legendre_split(f, lo, hi, {x}, 1e-10);
    total += piece;
    if (std::abs(piece) < 1e-14 * std::max(std::abs(total), 1e-300)) {
      if (++faint >= 3) return total;
    } else {
      faint = 0;
    }
  }
  throw std::runtime_error("lower-tail truncation bound unreachable");
}

double ParisianEvaluator::exponential_penalty(double lambda, double b, double x) const {
  require(lambda >= 0.0, "lambda must be >= 0");
  require(x <= b, "x must be <= b");
  auto f = [&](double y) { return std::exp(lambda * y) * density_upper(b, x, y); };
  return integrate_lower_tail(f, x);
}

double ParisianEvaluator::mass_two_sided(double a, double b, double x) const {
  auto f = [&](double y) { return density_two_sided(a, b, x, y); };
  return detail::adaptive_gauss_legendre_split(f, -a, 0.0, {x}, 1e-10);
}

double ParisianEvaluator::mass_lower(double a, double x) const {
  auto f = [&](double y) { return density_lower(a, x, y); };
  return detail::adaptive_gauss_legendre_split(f, -a, 0.0, {x}, 1e-10);
}

double ParisianEvaluator::mass_upper(double b, double x) const {
  auto f = [&](double y) { return density_upper(b, x, y); };
  return integrate_lower_tail(f, x);
}

double ParisianEvaluator::mass_unrestricted(double x) const {
  auto f = [&](double y) { return density_unrestricted(x, y); };
  return integrate_lower_tail(f, x);
}

// ---------------------------------------------------------------------------
// Free functions

DensityValue gs_density_two_sided(const LevyModel& model, const GerberShiuQuery& query) {
  ParisianEvaluator ev(model, query.theta, query.q);
  return {ev.density_two_sided(query.a, query.b, query.x, query.y)};
}

DensityValue gs_density_lower(const LevyModel& model, double theta, double q, double a, double x,
                              double y) {
  ParisianEvaluator ev(model, theta, q);
  return {ev.density_lower(a, x, y)};
}

DensityValue gs_density_upper(const LevyModel& model, double theta, double q, double b, double x,
                              double y) {
  ParisianEvaluator ev(model, theta, q);
  return {ev.density_upper(b, x, y)};
}

DensityValue gs_density_unrestricted(const LevyModel& model, double theta, double q, double x,
                                     double y) {
  ParisianEvaluator ev(model, theta, q);
  return {ev.density_unrestricted(x, y)};
}

double laplace_ruin_before_b(const LevyModel& model, double theta, double q, double b, double x) {
  ParisianEvaluator ev(model, theta, q);
  return ev.laplace_ruin_before_b(b, x);
}

double parisian_ruin_prob(const LevyModel& model, double q, double x) {
  require(q > 0.0, "q must be > 0 (exponential delay rate)");
  const double drift = net_profit_drift(model);
  require(drift > 0.0, "net profit condition psi'(0+) > 0 violated");
  const double phi_q = phi(model, q);
  const ExpMixture w0 = scale_mixture(model, 0.0);
  const double h = h_aux(w0, phi_q, -q, x);
  return 1.0 - drift * phi_q / q * h;
}

double gs_exponential_penalty(const LevyModel& model, double theta, double q, double lambda,
                              double b, double x) {
  ParisianEvaluator ev(model, theta, q);
  return ev.exponential_penalty(lambda, b, x);
}

} // namespace parisian
