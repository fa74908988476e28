#include "parisian/levy_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace parisian {

LevyModel LevyModel::brownian_drift(double mu, double sigma) {
  LevyModel m;
  m.family = Family::BrownianDrift;
  m.mu = mu;
  m.sigma = sigma;
  m.jump_rate = 0.0;
  m.jump_mean_inv = 1.0;
  return m;
}

LevyModel LevyModel::cramer_lundberg_exp(double premium, double eta, double alpha) {
  LevyModel m;
  m.family = Family::CramerLundbergExp;
  m.mu = premium;
  m.sigma = 0.0;
  m.jump_rate = eta;
  m.jump_mean_inv = alpha;
  return m;
}

LevyModel LevyModel::jump_diffusion_exp(double mu, double sigma, double eta, double alpha) {
  LevyModel m;
  m.family = Family::JumpDiffusionExp;
  m.mu = mu;
  m.sigma = sigma;
  m.jump_rate = eta;
  m.jump_mean_inv = alpha;
  return m;
}

const char* family_name(Family f) {
  switch (f) {
    case Family::BrownianDrift: return "brownian_drift";
    case Family::CramerLundbergExp: return "cramer_lundberg_exp";
    case Family::JumpDiffusionExp: return "jump_diffusion_exp";
  }
  return "?";
}

std::vector<std::string> model_violations(const LevyModel& m) {
  std::vector<std::string> v;
  if (!std::isfinite(m.mu) || !std::isfinite(m.sigma) || !std::isfinite(m.jump_rate) ||
      !std::isfinite(m.jump_mean_inv)) {
    v.push_back("parameters must be finite");
    return v;
  }
  if (m.sigma < 0.0) v.push_back("sigma must be >= 0");
  if (m.jump_rate < 0.0) v.push_back("jump_rate must be >= 0");
  switch (m.family) {
    case Family::BrownianDrift:
      if (m.sigma <= 0.0) v.push_back("sigma must be > 0 for brownian_drift");
      if (m.jump_rate != 0.0) v.push_back("jump_rate must be 0 for brownian_drift");
      break;
    case Family::CramerLundbergExp:
      if (m.sigma != 0.0) v.push_back("sigma must be 0 for cramer_lundberg_exp");
      if (m.mu <= 0.0) v.push_back("mu (premium rate) must be > 0 for cramer_lundberg_exp");
      if (m.jump_rate <= 0.0) v.push_back("jump_rate must be > 0 for cramer_lundberg_exp");
      if (m.jump_mean_inv <= 0.0) v.push_back("jump_mean_inv must be > 0");
      break;
    case Family::JumpDiffusionExp:
      if (m.sigma <= 0.0) v.push_back("sigma must be > 0 for jump_diffusion_exp");
      if (m.jump_rate <= 0.0) v.push_back("jump_rate must be > 0 for jump_diffusion_exp");
      if (m.jump_mean_inv <= 0.0) v.push_back("jump_mean_inv must be > 0");
      break;
  }
  return v;
}

void validate_model(const LevyModel& m) {
  const auto v = model_violations(m);
  if (v.empty()) return;
  std::ostringstream os;
  os << "invalid model:";
  for (const auto& s : v) os << " [" << s << "]";
  throw std::domain_error(os.str());
}

VariationClass variation_class(const LevyModel& m) {
  return m.sigma == 0.0 ? VariationClass::Bounded : VariationClass::Unbounded;
}

std::complex<double> laplace_exponent(const LevyModel& m, std::complex<double> lam) {
  std::complex<double> psi = m.mu * lam + 0.5 * m.sigma * m.sigma * lam * lam;
  if (m.jump_rate > 0.0) {
    psi -= m.jump_rate * lam / (m.jump_mean_inv + lam);
  }
  return psi;
}

double laplace_exponent_ext(const LevyModel& m, double lam) {
  if (m.jump_rate > 0.0 && lam <= -m.jump_mean_inv) {
    throw std::domain_error("laplace exponent undefined at or below -jump_mean_inv");
  }
  return laplace_exponent(m, std::complex<double>(lam, 0.0)).real();
}

double laplace_exponent(const LevyModel& m, double lam) {
  if (lam < 0.0) throw std::domain_error("lam must be >= 0");
  return laplace_exponent_ext(m, lam);
}

double laplace_exponent_derivative(const LevyModel& m, double lam) {
  double d = m.mu + m.sigma * m.sigma * lam;
  if (m.jump_rate > 0.0) {
    const double apl = m.jump_mean_inv + lam;
    d -= m.jump_rate * m.jump_mean_inv / (apl * apl);
  }
  return d;
}

double net_profit_drift(const LevyModel& m) {
  double d = m.mu;
  if (m.jump_rate > 0.0) d -= m.jump_rate / m.jump_mean_inv;
  return d;
}

double phi(const LevyModel& m, double q) {
  if (q < 0.0) throw std::domain_error("q must be >= 0");
  if (q == 0.0 && net_profit_drift(m) >= 0.0) return 0.0;

  // Bracket: psi is convex with psi(0) = 0 and psi(inf) = inf, so doubling
  // from 1 finds an upper bound with psi > q; then safeguarded Newton.
  double hi = 1.0;
  while (laplace_exponent(m, hi) <= q) {
    hi *= 2.0;
    if (hi > 1e300) throw std::runtime_error("phi: bracket growth failed");
  }
  double lo = 0.0;
  double x = hi;
  const double tol = 1e-12 * std::max(1.0, q);
  for (int it = 0; it < 200; ++it) {
    const double f = laplace_exponent(m, x) - q;
    if (std::abs(f) <= tol) return x;
    if (f > 0.0) hi = x;
    else lo = x;
    const double df = laplace_exponent_derivative(m, x);
    double next = (df > 0.0) ? x - f / df : std::numeric_limits<double>::quiet_NaN();
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi); // bisection fallback
    x = next;
  }
  const double resid = laplace_exponent(m, x) - q;
  throw std::runtime_error("phi: no convergence, residual " + std::to_string(resid));
}

double w_at_zero(const LevyModel& m, double /*q*/) {
  if (variation_class(m) == VariationClass::Bounded) return 1.0 / m.mu;
  return 0.0;
}

LevyModel model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("model JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("model JSON must be an object");

  static const std::vector<std::string> known = {"family", "mu", "sigma", "jump_rate",
                                                 "jump_mean_inv"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const auto& k : known) ok = ok || (it.key() == k);
    if (!ok) throw std::invalid_argument("unknown field '" + it.key() + "' in model JSON");
  }
  if (!j.contains("family")) throw std::invalid_argument("missing field 'family'");
  if (!j.contains("mu")) throw std::invalid_argument("missing field 'mu'");

  LevyModel m;
  const std::string fam = j.at("family").get<std::string>();
  if (fam == "brownian_drift") m.family = Family::BrownianDrift;
  else if (fam == "cramer_lundberg_exp") m.family = Family::CramerLundbergExp;
  else if (fam == "jump_diffusion_exp") m.family = Family::JumpDiffusionExp;
  else throw std::invalid_argument("unknown family '" + fam + "'");

  auto num = [&](const char* key, double dflt) {
    if (!j.contains(key)) return dflt;
    if (!j.at(key).is_number()) throw std::invalid_argument(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
  };
  m.mu = num("mu", 0.0);
  m.sigma = num("sigma", 0.0);
  m.jump_rate = num("jump_rate", 0.0);
  m.jump_mean_inv = num("jump_mean_inv", 1.0);
  validate_model(m);
  return m;
}

std::string model_to_json(const LevyModel& m) {
  nlohmann::json j;
  j["family"] = family_name(m.family);
  j["mu"] = m.mu;
  j["sigma"] = m.sigma;
  j["jump_rate"] = m.jump_rate;
  j["jump_mean_inv"] = m.jump_mean_inv;
  return j.dump();
}

} // namespace parisian
