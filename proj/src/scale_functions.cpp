#include "parisian/scale_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "parisian/detail/exp_integrals.hpp"
#include "parisian/detail/poly_roots.hpp"
#include "parisian/detail/quadrature.hpp"

namespace parisian {

using detail::cdouble;

// ---------------------------------------------------------------------------
// ExpMixture

double ExpMixture::eval(double x) const {
  if (x < 0.0) return 0.0;
  cdouble sum = 0.0;
  for (const Term& t : terms) {
    double xp = 1.0;
    for (int k = 0; k < t.power; ++k) xp *= x;
    sum += t.coef * xp * std::exp(t.rate * x);
  }
  return sum.real();
}

double ExpMixture::laplace(double s) const {
  cdouble sum = 0.0;
  for (const Term& t : terms) {
    // int_0^inf x^p e^{(rate - s)x} dx = p! / (s - rate)^{p+1}
    sum += t.coef * detail::factorial(t.power) / std::pow(cdouble(s, 0.0) - t.rate, t.power + 1);
  }
  return sum.real();
}

double ExpMixture::laplace_shifted(double s, double x) const {
  cdouble sum = 0.0;
  for (const Term& t : terms) {
    const cdouble d = cdouble(s, 0.0) - t.rate;
    // int_0^inf e^{-su} (u+x)^p e^{rate(u+x)} du
    //   = e^{rate x} sum_j C(p,j) x^{p-j} j! / d^{j+1}
    cdouble inner = 0.0;
    std::vector<double> xpow(t.power + 1, 1.0);
    for (int k = 1; k <= t.power; ++k) xpow[k] = xpow[k - 1] * x;
    for (int j = 0; j <= t.power; ++j) {
      inner += detail::binomial(t.power, j) * xpow[t.power - j] * detail::factorial(j) /
               std::pow(d, j + 1);
    }
    sum += t.coef * std::exp(t.rate * x) * inner;
  }
  return sum.real();
}

ExpMixture ExpMixture::antiderivative() const {
  ExpMixture out;
  cdouble constant = 0.0;
  for (const Term& t : terms) {
    if (std::abs(t.rate) < 1e-14) {
      out.terms.push_back({t.coef / double(t.power + 1), 0.0, t.power + 1});
      continue;
    }
    // int x^p e^{rx} dx = e^{rx} sum_{j=0..p} (-1)^j p!/(p-j)! x^{p-j} / r^{j+1}
    cdouble rpow = t.rate;
    double fall = 1.0;
    for (int j = 0; j <= t.power; ++j) {
      const cdouble c = t.coef * (j % 2 == 0 ? 1.0 : -1.0) * fall / rpow;
      out.terms.push_back({c, t.rate, t.power - j});
      if (t.power - j == 0) constant -= c; // subtract value at x = 0
      fall *= double(t.power - j);
      rpow *= t.rate;
    }
  }
  if (std::abs(constant) > 0.0) out.terms.push_back({constant, 0.0, 0});
  return out;
}

// ---------------------------------------------------------------------------
// Partial fractions of 1/(psi - q)

namespace {

struct RationalForm {
  std::vector<double> numer; // ascending coefficients of N
  std::vector<double> denom; // ascending coefficients of P = (psi - q) * (alpha + lam)^{0|1}
};

RationalForm rational_form(const LevyModel& m, double q) {
  RationalForm rf;
  const double half_s2 = 0.5 * m.sigma * m.sigma;
  switch (m.family) {
    case Family::BrownianDrift:
      rf.numer = {1.0};
      rf.denom = {-q, m.mu, half_s2};
      break;
    case Family::CramerLundbergExp: {
      const double c = m.mu, eta = m.jump_rate, a = m.jump_mean_inv;
      rf.numer = {a, 1.0};
      rf.denom = {-q * a, c * a - eta - q, c};
      break;
    }
    case Family::JumpDiffusionExp: {
      const double eta = m.jump_rate, a = m.jump_mean_inv;
      rf.numer = {a, 1.0};
      rf.denom = {-q * a, m.mu * a - eta - q, m.mu + half_s2 * a, half_s2};
      break;
    }
  }
  return rf;
}

cdouble eval_poly(const std::vector<double>& c, cdouble x) { return detail::poly_eval(c, x); }

} // namespace

ExpMixture scale_mixture(const LevyModel& model, double q) {
  validate_model(model);
  if (q < 0.0) throw std::domain_error("q must be >= 0");
  const RationalForm rf = rational_form(model, q);
  std::vector<cdouble> roots = detail::poly_roots(rf.denom);
  const double lead = rf.denom.back();

  // Snap the dominant real root to the Newton-accurate Phi(q).
  const double phi_q = phi(model, q);
  std::size_t dominant = 0;
  for (std::size_t i = 1; i < roots.size(); ++i) {
    if (roots[i].real() > roots[dominant].real()) dominant = i;
  }
  roots[dominant] = cdouble(phi_q, 0.0);

  // Cluster roots that coincide within 1e-9 (confluent inversion form).
  std::vector<std::pair<cdouble, int>> clusters; // (root, multiplicity)
  for (const cdouble& r : roots) {
    bool merged = false;
    for (auto& cl : clusters) {
      if (std::abs(r - cl.first) <= 1e-9 * std::max(1.0, std::abs(r))) {
        cl.first = (cl.first * double(cl.second) + r) / double(cl.second + 1);
        cl.second += 1;
        merged = true;
        break;
      }
    }
    if (!merged) clusters.emplace_back(r, 1);
  }

  auto numer = [&](cdouble x) { return eval_poly(rf.numer, x); };
  auto numer_deriv = [&]() { return rf.numer.size() > 1 ? rf.numer[1] : 0.0; };

  ExpMixture mix;
  if (clusters.size() == roots.size()) {
    // All simple: residue N(r)/P'(r) with P'(r) = lead * prod_{j != i}(r_i - r_j).
    for (std::size_t i = 0; i < roots.size(); ++i) {
      cdouble dp = lead;
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (j != i) dp *= roots[i] - roots[j];
      }
      mix.terms.push_back({numer(roots[i]) / dp, roots[i], 0});
    }
    return mix;
  }

  // Confluent cases (degree <= 3: one double root plus at most one simple
  // root, or one triple root).
  if (clusters.size() == 1 && clusters[0].second == 3) {
    // Triple root rho: N(x) = N(rho) + N'(rho)(x - rho).
    const cdouble rho = clusters[0].first;
    mix.terms.push_back({numer(rho) / lead / 2.0, rho, 2});
    mix.terms.push_back({numer_deriv() / lead, rho, 1});
    return mix;
  }
  // One double root and, for cubics, one simple root.
  cdouble rho, rho_s;
  bool have_simple = false;
  for (const auto& cl : clusters) {
    if (cl.second == 2) rho = cl.first;
    else {
      rho_s = cl.first;
      have_simple = true;
    }
  }
  // P = lead (x-rho)^2 (x-rho_s)^{0|1};  h = N / (lead (x-rho_s)^{0|1})
  auto Q = [&](cdouble x) { return have_simple ? lead * (x - rho_s) : cdouble(lead, 0.0); };
  const cdouble h = numer(rho) / Q(rho);
  cdouble hp; // h'(rho)
  if (have_simple) {
    const cdouble d = rho - rho_s;
    hp = (numer_deriv() * d - numer(rho)) / (lead * d * d);
  } else {
    hp = numer_deriv() / lead;
  }
  mix.terms.push_back({h, rho, 1});
  mix.terms.push_back({hp, rho, 0});
  if (have_simple) {
    const cdouble d = rho_s - rho;
    mix.terms.push_back({numer(rho_s) / (lead * d * d), rho_s, 0});
  }
  return mix;
}

ExpMixture expand_shift(const ExpMixture& m, double v) {
  ExpMixture out;
  for (const auto& t : m.terms) {
    const cdouble base = t.coef * std::exp(t.rate * v);
    double vp = 1.0; // v^{p-k}, built downward
    for (int k = t.power; k >= 0; --k) {
      out.terms.push_back({base * detail::binomial(t.power, k) * vp, t.rate, k});
      vp *= v;
    }
  }
  consolidate_mixture(out);
  return out;
}

ExpMixture mixture_convolve(const ExpMixture& a, const ExpMixture& b) {
  ExpMixture out;
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      const int m = ta.power + 1, n = tb.power + 1;
      const cdouble scale =
          ta.coef * tb.coef * detail::factorial(ta.power) * detail::factorial(tb.power);
      const cdouble gap = ta.rate - tb.rate;
      if (std::abs(gap) <= 1e-9 * std::max({1.0, std::abs(ta.rate), std::abs(tb.rate)})) {
        // coincident rates: 1/(s-r)^{m+n} -> u^{m+n-1} e^{ru}/(m+n-1)!
        const cdouble r = 0.5 * (ta.rate + tb.rate);
        out.terms.push_back({scale / detail::factorial(m + n - 1), r, m + n - 1});
        continue;
      }
      // 1/((s-sig)^m (s-rho)^n) = sum_k A_k/(s-sig)^k + sum_k B_k/(s-rho)^k
      for (int k = 1; k <= m; ++k) {
        const double sign = ((m - k) % 2 == 0) ? 1.0 : -1.0;
        const cdouble ak = sign * detail::binomial(m + n - k - 1, m - k) / std::pow(gap, m + n - k);
        out.terms.push_back({scale * ak / detail::factorial(k - 1), ta.rate, k - 1});
      }
      for (int k = 1; k <= n; ++k) {
        const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
        const cdouble bk =
            sign * detail::binomial(m + n - k - 1, n - k) / std::pow(-gap, m + n - k);
        out.terms.push_back({scale * bk / detail::factorial(k - 1), tb.rate, k - 1});
      }
    }
  }
  consolidate_mixture(out);
  return out;
}

void consolidate_mixture(ExpMixture& m) {
  ExpMixture out;
  for (const auto& t : m.terms) {
    bool merged = false;
    for (auto& o : out.terms) {
      if (o.power == t.power &&
          std::abs(o.rate - t.rate) <= 1e-9 * std::max({1.0, std::abs(o.rate), std::abs(t.rate)})) {
        o.coef += t.coef;
        merged = true;
        break;
      }
    }
    if (!merged) out.terms.push_back(t);
  }
  m.terms.clear();
  for (const auto& t : out.terms) {
    if (std::abs(t.coef) > 1e-300) m.terms.push_back(t);
  }
}

// ---------------------------------------------------------------------------
// ScaleContext

namespace {

ExpMixture closed_form_mixture(const LevyModel& m, double q) {
  // Hand-derived two-exponential forms; same object the generic route
  // produces, kept as an independent construction path.
  ExpMixture mix;
  if (m.family == Family::BrownianDrift) {
    const double half_s2 = 0.5 * m.sigma * m.sigma;
    const double disc = m.mu * m.mu + 4.0 * half_s2 * q;
    const double s = std::sqrt(disc);
    const double rp = (-m.mu + s) / (2.0 * half_s2);
    const double rm = (-m.mu - s) / (2.0 * half_s2);
    if (s < 1e-9 * std::max(1.0, std::abs(m.mu))) {
      // q = 0, mu = 0 boundary: W(x) = x / half_s2
      mix.terms.push_back({1.0 / half_s2, rp, 1});
      return mix;
    }
    const double c = 1.0 / (half_s2 * (rp - rm));
    mix.terms.push_back({c, rp, 0});
    mix.terms.push_back({-c, rm, 0});
    return mix;
  }
  if (m.family == Family::CramerLundbergExp) {
    const double c = m.mu, eta = m.jump_rate, a = m.jump_mean_inv;
    const double B = c * a - eta - q; // c lam^2 + B lam - q a
    const double disc = B * B + 4.0 * c * q * a;
    const double s = std::sqrt(std::max(0.0, disc));
    const double rp = (-B + s) / (2.0 * c);
    const double rm = (-B - s) / (2.0 * c);
    if (s <= 1e-9 * std::max(1.0, std::abs(B))) {
      // double root (q = 0 at the net-profit boundary): W = ((a+rho)x + 1)/c * e^{rho x}
      mix.terms.push_back({(a + rp) / c, rp, 1});
      mix.terms.push_back({1.0 / c, rp, 0});
      return mix;
    }
    mix.terms.push_back({(a + rp) / (c * (rp - rm)), rp, 0});
    mix.terms.push_back({(a + rm) / (c * (rm - rp)), rm, 0});
    return mix;
  }
  throw std::invalid_argument(
      "closed form unavailable for jump_diffusion_exp; use RationalInversion");
}

} // namespace

ScaleContext::ScaleContext(const LevyModel& model, double q, ScaleMethod method)
    : model_(model), q_(q), method_(method), memo_(std::make_unique<Memo>()) {
  validate_model(model);
  if (q < 0.0) throw std::domain_error("q must be >= 0");
  phi_q_ = phi(model, q);
  if (method_ == ScaleMethod::NumericInversion) return;
  mix_ = (method_ == ScaleMethod::ClosedForm) ? closed_form_mixture(model, q)
                                              : scale_mixture(model, q);
  for (const auto& t : mix_.terms) confluent_ = confluent_ || (t.power > 0);
  zmix_ = mix_.antiderivative();
  for (auto& t : zmix_.terms) t.coef *= q_;
  zmix_.terms.push_back({1.0, 0.0, 0});
}

const ExpMixture& ScaleContext::mixture() const {
  if (!has_mixture()) throw std::logic_error("NumericInversion context has no mixture");
  return mix_;
}

double ScaleContext::w_uncached(double x) const {
  if (method_ == ScaleMethod::NumericInversion) return talbot(x);
  return mix_.eval(x);
}

double ScaleContext::w(double x) const {
  if (x < 0.0) return 0.0;
  const long long key = std::llround(x * 1e12);
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    auto it = memo_->values.find(key);
    if (it != memo_->values.end()) return it->second;
  }
  const double v = w_uncached(x);
  {
    std::lock_guard<std::mutex> lock(memo_->mutex);
    memo_->values.emplace(key, v);
  }
  return v;
}

double ScaleContext::z(double x) const {
  if (x <= 0.0) return 1.0;
  if (method_ != ScaleMethod::NumericInversion) return zmix_.eval(x);
  // quadrature over contour-inverted values; don't chase below their noise
  return 1.0 +
         q_ * detail::adaptive_gauss_legendre([this](double y) { return w(y); }, 0.0, x, 1e-7);
}

double ScaleContext::talbot(double x) const {
  // Fixed-Talbot contour applied to the Esscher-shifted transform
  //   F(s) = 1/(psi(s + Phi(q)) - q),
  // whose singularities all satisfy Re(s) <= 0; W^{(q)}(x) = e^{Phi(q)x} f(x).
  if (x < 1e-8) return w_at_zero(model_, q_);
  constexpr int M = 48;
  const double r = 2.0 * M / (5.0 * x);
  auto F = [&](cdouble s) {
    return 1.0 / (laplace_exponent(model_, s + phi_q_) - q_);
  };
  double sum = 0.5 * std::exp(r * x) * F(cdouble(r, 0.0)).real();
  for (int k = 1; k < M; ++k) {
    const double theta = k * std::numbers::pi / M;
    const double cot = std::cos(theta) / std::sin(theta);
    const cdouble s(r * theta * cot, r * theta);
    const double sigma = theta + (theta * cot - 1.0) * cot;
    const cdouble val = std::exp(s * x) * F(s) * cdouble(1.0, sigma);
    sum += val.real();
  }
  const double f = (r / M) * sum;
  const double w = std::exp(phi_q_ * x) * f;
  if (!std::isfinite(w)) throw std::runtime_error("talbot inversion did not converge");
  return w;
}

// ---------------------------------------------------------------------------
// H, g, convolution

double h_aux(const ExpMixture& w_pq, double phi_p, double q_shift, double x) {
  if (x <= 0.0 || q_shift == 0.0) return std::exp(phi_p * x);
  if (q_shift < 0.0) {
    // tail form: -q_shift * int_0^inf e^{-Phi(p) u} W^{(p+q_shift)}(u + x) du
    return -q_shift * w_pq.laplace_shifted(phi_p, x);
  }
  cdouble integral = 0.0;
  for (const auto& t : w_pq.terms) {
    integral += t.coef * detail::power_moment(t.power, t.rate - phi_p, x);
  }
  return std::exp(phi_p * x) * (1.0 + q_shift * integral.real());
}

double h_aux(const LevyModel& model, double p, double q_shift, double x) {
  if (p < 0.0) throw std::domain_error("p must be >= 0");
  if (p + q_shift < 0.0) throw std::domain_error("p + q_shift must be >= 0");
  const double phi_p = phi(model, p);
  if (x <= 0.0 || q_shift == 0.0) return std::exp(phi_p * x);
  const ExpMixture w_pq = scale_mixture(model, p + q_shift);
  return h_aux(w_pq, phi_p, q_shift, x);
}

namespace {

// Closed-form integral_{lower}^{upper} A(outer - z) B(z + shift) dz over two
// mixtures, honouring the zero-on-negatives support of each factor.
double convolve_mixtures(const ExpMixture& A, const ExpMixture& B, double outer, double lower,
                         double upper, double shift) {
  double lo = std::max(lower, -shift); // B argument >= 0
  double hi = std::min(upper, outer);  // A argument >= 0
  if (!(hi > lo)) return 0.0;
  const double D = outer + shift;
  cdouble total = 0.0;
  for (const auto& ta : A.terms) {
    for (const auto& tb : B.terms) {
      // substitute t = z + shift in [lo+shift, hi+shift] subset [0, D]
      const double t0 = lo + shift, t1 = hi + shift;
      const cdouble delta = tb.rate - ta.rate;
      cdouble piece = 0.0;
      for (int j = 0; j <= ta.power; ++j) {
        const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        double Dp = 1.0;
        for (int k = 0; k < ta.power - j; ++k) Dp *= D;
        piece += detail::binomial(ta.power, j) * sgn * Dp *
                 detail::power_moment(tb.power + j, delta, t0, t1);
      }
      total += ta.coef * tb.coef * std::exp(ta.rate * D) * piece;
    }
  }
  return total.real();
}

} // namespace

double convolve_scale(const ScaleContext& wa, const ScaleContext& wb, double outer, double lower,
                      double upper, double shift) {
  if (!(lower <= upper)) throw std::domain_error("lower must be <= upper");
  if (lower == upper) return 0.0;
  if (wa.has_mixture() && wb.has_mixture()) {
    return convolve_mixtures(wa.mixture(), wb.mixture(), outer, lower, upper, shift);
  }
  auto f = [&](double z) { return wa.w(outer - z) * wb.w(z + shift); };
  // split at the support kinks of the two factors; the contour-inverted
  // values carry a ~1e-8 noise floor, so don't chase tighter
  return detail::adaptive_gauss_legendre_split(f, lower, upper, {outer, -shift}, 1e-7);
}

double g_fn(const ScaleContext& w_theta, const ScaleContext& w_theta_q, double q, double x,
            double y) {
  const double head = w_theta_q.w(x + y);
  if (x <= 0.0) return head;
  return head - q * convolve_scale(w_theta, w_theta_q, x, 0.0, x, y);
}

double g_fn_alt(const ScaleContext& w_theta, const ScaleContext& w_theta_q, double q, double x,
                double y) {
  const double head = w_theta.w(x + y);
  if (y <= 0.0) return head;
  return head + q * convolve_scale(w_theta, w_theta_q, x + y, 0.0, y, 0.0);
}

double g_fn(const LevyModel& model, double theta, double q, double x, double y) {
  ScaleContext wt(model, theta), wtq(model, theta + q);
  return g_fn(wt, wtq, q, x, y);
}

double g_fn_alt(const LevyModel& model, double theta, double q, double x, double y) {
  ScaleContext wt(model, theta), wtq(model, theta + q);
  return g_fn_alt(wt, wtq, q, x, y);
}

double laplace_identity_residual(const ScaleContext& ctx, double lam) {
  const double phi_q = ctx.phi_q();
  if (!(lam > phi_q)) throw std::domain_error("lam must exceed Phi(q)");
  const double gap = lam - phi_q;
  // e^{(Phi(q)-lam)L} tail below 1e-10 of the transform value
  const double L = std::min(46.0 / gap + 10.0, 2e4);
  const double target = laplace_exponent(ctx.model(), lam) - ctx.q();
  // Composite fixed-panel GL15: panel width tied to the decay rate keeps
  // the smooth-part error negligible, and a fixed node set is immune to the
  // ~1e-8 noise floor of contour-inverted W values (adaptive refinement
  // would chase that noise without converging).
  const double h = std::min(0.5, 2.0 / lam);
  const auto& rule = detail::gauss_legendre_15();
  double integral = 0.0;
  for (double a = 0.0; a < L; a += h) {
    const double b = std::min(a + h, L);
    const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
    double panel = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double x = mid + hw * rule.nodes[i];
      panel += rule.weights[i] * std::exp(-lam * x) * ctx.w(x);
    }
    integral += hw * panel;
  }
  return std::abs(integral - 1.0 / target);
}

} // namespace parisian
