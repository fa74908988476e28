#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "parisian/gerber_shiu.hpp"
#include "parisian/levy_model.hpp"
#include "parisian/scale_functions.hpp"
#include "parisian/simulator.hpp"

using namespace parisian;

namespace {
const LevyModel kBm = LevyModel::brownian_drift(1.0, 1.0);
const LevyModel kCl = LevyModel::cramer_lundberg_exp(1.5, 1.0, 1.0);

SimConfig event_cfg(long long n, double horizon, std::uint64_t seed) {
  SimConfig cfg;
  cfg.scheme = Scheme::EventDriven;
  cfg.n_paths = n;
  cfg.horizon = horizon;
  cfg.seed = seed;
  return cfg;
}

} // namespace

TEST_CASE("sample_increment: pure drift is deterministic") {
  LevyModel drift_only;
  drift_only.family = Family::BrownianDrift;
  drift_only.mu = 1.0;
  drift_only.sigma = 0.0;
  drift_only.jump_rate = 0.0;
  Rng rng(1);
  CHECK(sample_increment(drift_only, 0.5, rng) == 0.5);
  CHECK_THROWS_AS(sample_increment(drift_only, 0.0, rng), std::domain_error);
}

TEST_CASE("sample_increment: mean matches psi'(0+) dt") {
  const double dt = 0.1;
  for (const auto& m : {kBm, kCl, LevyModel::jump_diffusion_exp(1.0, 1.0, 1.0, 2.0)}) {
    Rng rng(99);
    const long long n = 1000000;
    double sum = 0.0, sumsq = 0.0;
    for (long long i = 0; i < n; ++i) {
      const double v = sample_increment(m, dt, rng);
      sum += v;
      sumsq += v * v;
    }
    const double mean = sum / double(n);
    const double sd = std::sqrt((sumsq - n * mean * mean) / double(n - 1));
    const double se = sd / std::sqrt(double(n));
    CHECK(std::abs(mean - net_profit_drift(m) * dt) <= 4.0 * se);
  }
}

TEST_CASE("sample_increment: Brownian variance") {
  const double dt = 0.05;
  Rng rng(7);
  const long long n = 1000000;
  double sum = 0.0, sumsq = 0.0;
  for (long long i = 0; i < n; ++i) {
    const double v = sample_increment(kBm, dt, rng);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / double(n);
  const double var = (sumsq - n * mean * mean) / double(n - 1);
  // SE of the sample variance of a Gaussian is var * sqrt(2/(n-1))
  const double se_var = kBm.sigma * kBm.sigma * dt * std::sqrt(2.0 / double(n - 1));
  CHECK(std::abs(var - kBm.sigma * kBm.sigma * dt) <= 4.0 * se_var);
}

TEST_CASE("simulate_parisian: boundary starts") {
  SimConfig cfg = event_cfg(1, 100.0, 1);
  PathRng rng = PathRng::for_path(1, 0);
  const RuinOutcome at_b = simulate_parisian(kCl, 1.0, 2.0, kNoBarrier, 2.0, cfg, rng);
  CHECK(at_b.kind == OutcomeKind::UpperExit);
  CHECK(at_b.time == 0.0);
  CHECK(at_b.position == 2.0);

  PathRng rng2 = PathRng::for_path(1, 0);
  CHECK_THROWS_AS(simulate_parisian(kCl, 1.0, 3.0, kNoBarrier, 2.0, cfg, rng2),
                  std::domain_error);
  PathRng rng3 = PathRng::for_path(1, 0);
  CHECK_THROWS_AS(simulate_parisian(kBm, 1.0, 0.0, 1.0, 2.0, cfg, rng3), std::domain_error);
}

TEST_CASE("upward creep: upper exits land exactly on b") {
  SimConfig cfg = event_cfg(2000, 50.0, 11);
  int upper = 0;
  for (long long i = 0; i < cfg.n_paths; ++i) {
    PathRng rng = PathRng::for_path(cfg.seed, i);
    const RuinOutcome o = simulate_parisian(kCl, 0.7, 0.5, 1.0, 1.5, cfg, rng);
    if (o.kind == OutcomeKind::UpperExit) {
      ++upper;
      CHECK(o.position == 1.5);
    }
    if (o.kind == OutcomeKind::ParisianRuin) CHECK(o.position < 0.0);
    if (o.kind == OutcomeKind::LowerExit) CHECK(o.position < -1.0);
  }
  CHECK(upper > 0);
}

TEST_CASE("large q: Parisian ruin collapses to first passage below 0") {
  // two-sided setting: P(tau_q < tau_b^+) -> P(tau_0^- < tau_b^+) = 1 - W(x)/W(b)
  SimConfig cfg = event_cfg(20000, 1e4, 17);
  const double x = 0.5, b = 2.0, q = 1e6;
  Estimate est = estimate_gs(kCl, 0.0, q, x, kNoBarrier, b, Penalty::one(), cfg);
  ScaleContext w0(kCl, 0.0);
  const double classical = 1.0 - w0.w(x) / w0.w(b);
  CHECK(std::abs(est.mean - classical) <= 3.0 * est.std_error);
}

TEST_CASE("tiny q: ruin fraction vanishes") {
  SimConfig cfg = event_cfg(5000, 50.0, 23);
  Estimate est = estimate_gs(kCl, 0.0, 1e-6, 0.0, kNoBarrier, kNoBarrier, Penalty::one(), cfg);
  CHECK(est.mean <= 3.0 / 5000.0);
}

TEST_CASE("horizon reached reports Survived at the horizon") {
  SimConfig cfg = event_cfg(1, 1.0, 101);
  PathRng rng = PathRng::for_path(cfg.seed, 0);
  const RuinOutcome o = simulate_parisian(kCl, 1e-9, 10.0, kNoBarrier, kNoBarrier, cfg, rng);
  CHECK(o.kind == OutcomeKind::Survived);
  CHECK(o.time == 1.0);
  CHECK(std::isfinite(o.position));
}

TEST_CASE("estimate CI is mean +- 1.96 se") {
  SimConfig cfg = event_cfg(2000, 100.0, 103);
  const Estimate est = estimate_gs(kCl, 0.0, 1.0, 0.5, 1.0, 2.0, Penalty::one(), cfg);
  CHECK(est.ci95.first == doctest::Approx(est.mean - 1.96 * est.std_error).epsilon(1e-14));
  CHECK(est.ci95.second == doctest::Approx(est.mean + 1.96 * est.std_error).epsilon(1e-14));
  CHECK(est.std_error >= 0.0);
}

TEST_CASE("theta large: discounted estimate vanishes") {
  SimConfig cfg = event_cfg(2000, 100.0, 29);
  Estimate est = estimate_gs(kCl, 50.0, 1.0, 0.0, 1.0, 2.0, Penalty::one(), cfg);
  CHECK(est.mean <= 1e-3);
}

TEST_CASE("zero ruin events produce a flagged estimate with binomial CI") {
  SimConfig cfg = event_cfg(100, 5.0, 31);
  // x far above 0 with a tight horizon: no ruin possible in the sample
  Estimate est = estimate_gs(kCl, 0.0, 1.0, 30.0, kNoBarrier, kNoBarrier, Penalty::one(), cfg);
  CHECK(est.zero_events);
  CHECK(est.mean == 0.0);
  CHECK(est.ci95.first == 0.0);
  CHECK(est.ci95.second == doctest::Approx(1.0 - std::pow(0.025, 1.0 / 100.0)));
}

TEST_CASE("reproducibility: identical config, bit-identical estimates") {
  SimConfig cfg = event_cfg(5000, 100.0, 37);
  const Estimate a = estimate_gs(kCl, 0.1, 1.0, 0.5, 1.0, 2.0, Penalty::one(), cfg);
  const Estimate b = estimate_gs(kCl, 0.1, 1.0, 0.5, 1.0, 2.0, Penalty::one(), cfg);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);

  cfg.n_workers = 3;
  const Estimate c = estimate_gs(kCl, 0.1, 1.0, 0.5, 1.0, 2.0, Penalty::one(), cfg);
  const Estimate d = estimate_gs(kCl, 0.1, 1.0, 0.5, 1.0, 2.0, Penalty::one(), cfg);
  CHECK(c.mean == d.mean);
  CHECK(c.std_error == d.std_error);
  // same per-path values regardless of partition; sums agree to rounding
  CHECK(a.mean == doctest::Approx(c.mean).epsilon(1e-12));
}

TEST_CASE("epsilon scan: coupled monotonicity, zero violations") {
  SimConfig cfg = event_cfg(3000, 50.0, 41);
  const EpsScanResult scan = epsilon_bias_scan(kCl, 1.0, 0.0, cfg, {0.5, 0.2, 0.1, 0.05, 0.0});
  CHECK(scan.coupling_violations == 0);
  for (std::size_t k = 0; k + 1 < scan.estimates.size(); ++k) {
    // pathwise inclusion implies weakly increasing estimates as eps drops
    CHECK(scan.estimates[k].mean <= scan.estimates[k + 1].mean + 1e-15);
  }
  CHECK_THROWS_AS(epsilon_bias_scan(kCl, 1.0, 0.0, cfg, {0.1, 0.2}), std::domain_error);
}

TEST_CASE("epsilon = 0 scan matches simulate_parisian path for path") {
  SimConfig cfg = event_cfg(500, 50.0, 43);
  cfg.epsilon = 0.0;
  const EpsScanResult scan = epsilon_bias_scan(kCl, 1.0, 0.0, cfg, {0.0});
  long long ruined = 0;
  for (long long i = 0; i < cfg.n_paths; ++i) {
    PathRng rng = PathRng::for_path(cfg.seed, i);
    const RuinOutcome o = simulate_parisian(kCl, 1.0, 0.0, kNoBarrier, kNoBarrier, cfg, rng);
    if (o.kind == OutcomeKind::ParisianRuin) ++ruined;
  }
  CHECK(scan.estimates[0].mean == doctest::Approx(double(ruined) / 500.0).epsilon(1e-15));
}

TEST_CASE("epsilon deeper than the lower barrier: no Parisian channel") {
  // every crossing of -eps also crosses -a at the same jump, and the lower
  // exit wins; the Parisian channel is structurally empty
  SimConfig cfg = event_cfg(2000, 50.0, 47);
  cfg.epsilon = 1.0;
  long long parisian = 0;
  for (long long i = 0; i < cfg.n_paths; ++i) {
    PathRng rng = PathRng::for_path(cfg.seed, i);
    const RuinOutcome o = simulate_parisian(kCl, 1.0, 0.5, 0.5, 2.0, cfg, rng);
    if (o.kind == OutcomeKind::ParisianRuin) ++parisian;
  }
  CHECK(parisian == 0);
}

TEST_CASE("classical ruin probability cross-check (2/3)") {
  SimConfig cfg = event_cfg(20000, suggest_horizon(kCl, 0.0, 1e-4), 53);
  const Estimate est = estimate_classical_ruin(kCl, 0.0, cfg);
  CHECK(std::abs(est.mean - 2.0 / 3.0) <= 3.0 * est.std_error + 1e-4);
}

TEST_CASE("discounted two-sided exit identity") {
  SimConfig cfg = event_cfg(20000, 0.0, 59);
  const double q = 0.5, x = 1.0, a = 2.0;
  const Estimate est = estimate_upper_exit_discount(kCl, q, x, a, cfg);
  ScaleContext wq(kCl, q);
  CHECK(std::abs(est.mean - wq.w(x) / wq.w(a)) <= 3.0 * est.std_error);
  // x = a: immediate exit, value exactly 1
  const Estimate unit = estimate_upper_exit_discount(kCl, q, a, a, cfg);
  CHECK(unit.mean == 1.0);
  CHECK(unit.std_error == 0.0);
}

TEST_CASE("occupation density identity on coarse bins") {
  const double q = 0.5, x = 1.0, a = 2.0;
  SimConfig cfg = event_cfg(20000, 0.0, 61);
  ScaleContext wq(kCl, q);
  for (auto [lo, hi] : {std::pair{0.0, 0.5}, std::pair{0.5, 1.0}, std::pair{1.0, 1.5},
                        std::pair{1.5, 2.0}}) {
    const Estimate est = estimate_occupation(kCl, q, x, a, lo, hi, cfg);
    const double formula = oracles::adaptive_simpson(
        [&](double y) { return wq.w(x) * wq.w(a - y) / wq.w(a) - wq.w(x - y); }, lo, hi);
    CHECK(std::abs(est.mean - formula) <= 3.0 * est.std_error);
  }
}

TEST_CASE("event-driven MC vs two-sided density mass") {
  SimConfig cfg = event_cfg(20000, 1e4, 67);
  ParisianEvaluator ev(kCl, 0.0, 1.0);
  const double formula = ev.mass_two_sided(1.0, 2.0, 0.5);
  const Estimate mc = estimate_gs(kCl, 0.0, 1.0, 0.5, 1.0, 2.0, Penalty::one(), cfg);
  CHECK(std::abs(mc.mean - formula) <= 3.0 * mc.std_error);
}

TEST_CASE("event-driven MC vs lower density mass") {
  const double q = 1.0, a = 1.5, x = 0.0;
  SimConfig cfg = event_cfg(20000, suggest_horizon(kCl, x, 1e-4), 71);
  ParisianEvaluator ev(kCl, 0.0, q);
  const double formula = ev.mass_lower(a, x);
  const Estimate mc = estimate_gs(kCl, 0.0, q, x, a, kNoBarrier, Penalty::one(), cfg);
  CHECK(std::abs(mc.mean - formula) <= 3.0 * mc.std_error + 1e-4);
}

TEST_CASE("event-driven MC vs upper density on a y-bin") {
  const double q = 1.0, b = 2.0, x = 0.0;
  SimConfig cfg = event_cfg(20000, 1e4, 73);
  ParisianEvaluator ev(kCl, 0.0, q);
  const double formula = oracles::adaptive_simpson(
      [&](double y) { return ev.density_upper(b, x, y); }, -0.6, -0.4);
  const Estimate mc =
      estimate_gs(kCl, 0.0, q, x, kNoBarrier, b, Penalty::indicator(-0.6, -0.4), cfg);
  CHECK(std::abs(mc.mean - formula) <= 3.0 * mc.std_error);
}

TEST_CASE("event-driven MC vs exponential penalty") {
  SimConfig cfg = event_cfg(20000, 1e4, 79);
  const double formula = gs_exponential_penalty(kCl, 0.0, 1.0, 1.0, 3.0, 0.0);
  const Estimate mc =
      estimate_gs(kCl, 0.0, 1.0, 0.0, kNoBarrier, 3.0, Penalty::exponential(1.0), cfg);
  CHECK(std::abs(mc.mean - formula) <= 3.0 * mc.std_error);
}

TEST_CASE("event-driven MC vs parisian ruin probability") {
  SimConfig cfg = event_cfg(20000, 0.0, 83);
  cfg.horizon = suggest_horizon(kCl, 1.0, 0.5 / std::sqrt(20000.0) / 5.0);
  const double formula = parisian_ruin_prob(kCl, 1.0, 1.0);
  const Estimate mc =
      estimate_gs(kCl, 0.0, 1.0, 1.0, kNoBarrier, kNoBarrier, Penalty::one(), cfg);
  CHECK(std::abs(mc.mean - formula) <= 3.0 * mc.std_error);
}

TEST_CASE("euler grid MC vs formulas for the Brownian model (O(sqrt(dt)) bias)") {
  SimConfig cfg;
  cfg.scheme = Scheme::EulerGrid;
  cfg.dt = 1e-3;
  cfg.n_paths = 20000;
  cfg.horizon = 1e3;
  cfg.seed = 89;
  ParisianEvaluator ev(kBm, 0.0, 1.0);
  // two-sided mass; 0.01 covers the documented grid bias at this dt
  const double formula = ev.mass_two_sided(2.0, 3.0, 0.5);
  const Estimate mc = estimate_gs(kBm, 0.0, 1.0, 0.5, 2.0, 3.0, Penalty::one(), cfg);
  CHECK(std::abs(mc.mean - formula) <= 3.0 * mc.std_error + 0.01);

  // unrestricted ruin probability from x = 1
  SimConfig cfg2 = cfg;
  cfg2.n_paths = 5000;
  cfg2.horizon = suggest_horizon(kBm, 1.0, 1e-3);
  const double pruin = parisian_ruin_prob(kBm, 1.0, 1.0);
  const Estimate mc2 =
      estimate_gs(kBm, 0.0, 1.0, 1.0, kNoBarrier, kNoBarrier, Penalty::one(), cfg2);
  CHECK(std::abs(mc2.mean - pruin) <= 3.0 * mc2.std_error + 0.01);

  // lower-barrier mass {tau_q < tau_{-a}^-} from x = 1, a = 2
  ParisianEvaluator evb(kBm, 0.0, 1.0);
  const double lower_mass = evb.mass_lower(2.0, 1.0);
  const Estimate mc3 =
      estimate_gs(kBm, 0.0, 1.0, 1.0, 2.0, kNoBarrier, Penalty::one(), cfg2);
  CHECK(std::abs(mc3.mean - lower_mass) <= 3.0 * mc3.std_error + 0.01);
}

TEST_CASE("suggest_horizon sanity") {
  const double t1 = suggest_horizon(kCl, 0.0, 1e-3);
  const double t2 = suggest_horizon(kCl, 0.0, 1e-5);
  CHECK(t1 > 10.0);
  CHECK(t2 > t1);
  CHECK(std::isfinite(t2));
  CHECK_THROWS_AS(suggest_horizon(LevyModel::cramer_lundberg_exp(1.0, 1.0, 1.0), 0.0, 1e-3),
                  std::domain_error);
}

TEST_CASE("event-driven scheme requires sigma = 0") {
  SimConfig cfg = event_cfg(1, 10.0, 97);
  PathRng rng = PathRng::for_path(1, 0);
  CHECK_THROWS_WITH_AS(simulate_parisian(kBm, 1.0, 0.0, 1.0, 2.0, cfg, rng),
                       doctest::Contains("sigma"), std::domain_error);
}
