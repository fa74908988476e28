#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "parisian/gerber_shiu.hpp"
#include "parisian/levy_model.hpp"

using namespace parisian;

namespace {
const LevyModel kBm = LevyModel::brownian_drift(1.0, 1.0);
const LevyModel kCl = LevyModel::cramer_lundberg_exp(1.5, 1.0, 1.0);
const LevyModel kJd = LevyModel::jump_diffusion_exp(1.0, 1.0, 1.0, 2.0);
} // namespace

TEST_CASE("g collapses to W^{(theta)} at a = 0 (scale symmetry)") {
  // g(theta,q,x,0) = W^{(theta)}(x): the two-sided density with a = 0 is
  // supported on the single point y = 0
  for (const auto& m : {kBm, kCl, kJd}) {
    ScaleContext wt(m, 0.2);
    for (double x : {0.3, 1.0, 2.5}) {
      CHECK(g_fn(m, 0.2, 0.9, x, 0.0) == doctest::Approx(wt.w(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("two-sided density domain and guards") {
  ParisianEvaluator ev(kCl, 0.0, 1.0);
  CHECK_THROWS_AS(ev.density_two_sided(1.0, 2.0, 2.0, -0.5), std::domain_error); // x = b
  CHECK_THROWS_AS(ev.density_two_sided(1.0, 2.0, -1.5, -0.5), std::domain_error);
  CHECK_THROWS_AS(ev.density_two_sided(1.0, 2.0, 0.5, 0.5), std::domain_error); // y > 0
  CHECK_THROWS_AS(ev.density_two_sided(1.0, 2.0, 0.5, -1.5), std::domain_error);
  CHECK_THROWS_AS(ParisianEvaluator(kCl, -0.1, 1.0), std::domain_error);
  CHECK_THROWS_AS(ParisianEvaluator(kCl, 0.0, 0.0), std::domain_error); // q = 0 rejected
}

TEST_CASE("double evaluation in cross-check mode") {
  ParisianEvaluator ev(kCl, 0.05, 1.0);
  ev.set_cross_check(true);
  const double v = ev.density_two_sided(1.5, 2.0, 0.0, -0.75);
  CHECK(v >= 0.0);
  CHECK(std::isfinite(v));
  CHECK(std::isfinite(ev.density_upper(2.0, 0.0, -0.75)));
  CHECK(std::isfinite(ev.density_unrestricted(0.0, -0.75)));
  CHECK(std::isfinite(ev.density_lower(1.5, 0.0, -0.75)));
}

TEST_CASE("density nonnegativity over a randomized grid") {
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (const auto& m : {kBm, kCl, kJd}) {
    for (int it = 0; it < 60; ++it) {
      const double theta = 2.0 * unif(gen);
      const double q = 0.2 + 2.0 * unif(gen);
      ParisianEvaluator ev(m, theta, q);
      const double a = 0.5 + 2.0 * unif(gen);
      const double b = 0.5 + 2.0 * unif(gen);
      const double x = -a + (a + b) * 0.999 * unif(gen);
      const double y = -a * unif(gen);
      CHECK(ev.density_two_sided(a, b, x, y) >= -1e-12);
      CHECK(ev.density_lower(a, x, y) >= -1e-12);
      if (x <= b) CHECK(ev.density_upper(b, x, y) >= -1e-12);
      CHECK(ev.density_unrestricted(x, y) >= -1e-12);
    }
  }
}

TEST_CASE("far-barrier consistency chain") {
  for (const auto& m : {kBm, kCl, kJd}) {
    for (auto [theta, q] : {std::pair{0.0, 1.0}, std::pair{0.5, 2.0}}) {
      ParisianEvaluator ev(m, theta, q);
      const double b_far = 40.0 / ev.phi_theta_q();
      for (auto [x, y] : {std::pair{0.0, -0.5}, std::pair{1.0, -0.25}, std::pair{-0.5, -0.75}}) {
        const double a = 2.0;
        CHECK(ev.density_two_sided(a, b_far, x, y) ==
              doctest::Approx(ev.density_lower(a, x, y)).epsilon(1e-6));
        const double a_far = 40.0 / ev.phi_theta_q() + std::abs(y);
        CHECK(ev.density_two_sided(a_far, 2.0, x, y) ==
              doctest::Approx(ev.density_upper(2.0, x, y)).epsilon(1e-6));
        CHECK(ev.density_upper(60.0 / ev.phi_theta_q(), x, y) ==
              doctest::Approx(ev.density_unrestricted(x, y)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("lower density endpoint y = -a is finite and nonnegative") {
  ParisianEvaluator ev(kCl, 0.1, 1.0);
  const double v = ev.density_lower(1.5, 0.5, -1.5);
  CHECK(std::isfinite(v));
  CHECK(v >= 0.0);
}

TEST_CASE("upper density vanishes at x = b") {
  ParisianEvaluator ev(kCl, 0.2, 1.0);
  for (double y : {-0.1, -1.0, -3.0}) {
    CHECK(std::abs(ev.density_upper(2.0, 2.0, y)) <= 1e-12);
  }
  CHECK(ev.laplace_ruin_before_b(2.0, 2.0) == 0.0);
}

TEST_CASE("laplace_ruin_before_b") {
  ParisianEvaluator ev(kCl, 0.1, 1.0);
  CHECK_THROWS_AS(ev.laplace_ruin_before_b(1.0, 1.5), std::domain_error); // x > b

  // cross-check against the y-integral of the upper density (lambda = 0)
  const double b = 2.0, x = 0.0;
  CHECK(ev.exponential_penalty(0.0, b, x) ==
        doctest::Approx(ev.laplace_ruin_before_b(b, x)).epsilon(1e-8));

  // theta = 0, b -> infinity recovers the ruin probability
  ParisianEvaluator ev0(kCl, 0.0, 1.0);
  const double b_far = 60.0 / ev0.phi_theta_q();
  CHECK(ev0.laplace_ruin_before_b(b_far, 1.0) ==
        doctest::Approx(parisian_ruin_prob(kCl, 1.0, 1.0)).epsilon(1e-6));
}

TEST_CASE("unrestricted mass equals the ruin probability at theta = 0") {
  for (const auto& m : {kBm, kCl, kJd}) {
    for (double q : {0.5, 1.0}) {
      ParisianEvaluator ev(m, 0.0, q);
      for (double x : {0.0, 0.7, 2.0}) {
        CHECK(ev.mass_unrestricted(x) ==
              doctest::Approx(parisian_ruin_prob(m, q, x)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("mass bounds: densities integrate to at most 1 at theta = 0") {
  ParisianEvaluator ev(kCl, 0.0, 1.0);
  CHECK(ev.mass_two_sided(1.0, 2.0, 0.5) <= 1.0);
  CHECK(ev.mass_two_sided(1.0, 2.0, 0.5) >= 0.0);
  CHECK(ev.mass_lower(2.0, 1.0) <= 1.0);
  CHECK(ev.mass_upper(2.0, 0.0) <= 1.0);
  CHECK(ev.mass_unrestricted(0.0) <= 1.0);
}

TEST_CASE("parisian ruin probability") {
  // q -> 0: the grace period never expires
  CHECK(parisian_ruin_prob(kCl, 1e-9, 0.0) <= 1e-8);
  // closed form for CL(1.5, 1, 1): P_x = e^{-x/3}/2
  for (double x : {0.0, 1.0, 3.0}) {
    CHECK(parisian_ruin_prob(kCl, 1.0, x) ==
          doctest::Approx(0.5 * std::exp(-x / 3.0)).epsilon(1e-12));
  }
  // q -> infinity approaches the classical probability from below
  const double classical = 2.0 / 3.0;
  double prev = 0.0;
  for (double q : {1e-3, 1e-1, 1e1, 1e3, 1e6}) {
    const double p = parisian_ruin_prob(kCl, q, 0.0);
    CHECK(p >= prev - 1e-14);
    CHECK(p <= classical + 1e-12);
    prev = p;
  }
  CHECK(parisian_ruin_prob(kCl, 1e6, 0.0) == doctest::Approx(classical).epsilon(0.01));

  // nonincreasing in x
  double prev_x = 1.0;
  for (double x : {0.0, 0.5, 1.0, 2.0, 4.0}) {
    const double p = parisian_ruin_prob(kJd, 1.0, x);
    CHECK(p <= prev_x + 1e-14);
    prev_x = p;
  }

  // net profit precondition
  CHECK_THROWS_WITH_AS(parisian_ruin_prob(LevyModel::cramer_lundberg_exp(1.0, 1.0, 1.0), 1.0, 0.0),
                       doctest::Contains("net profit"), std::domain_error);
}

TEST_CASE("parisian ruin is bounded by the classical probability pointwise") {
  for (const auto& m : {kBm, kCl, kJd}) {
    ScaleContext w0(m, 0.0);
    const double drift = net_profit_drift(m);
    for (double q : {0.5, 2.0}) {
      for (double x : {0.0, 1.0, 2.5}) {
        CHECK(parisian_ruin_prob(m, q, x) <= 1.0 - drift * w0.w(x) + 1e-12);
      }
    }
  }
}

TEST_CASE("exponential penalty") {
  ParisianEvaluator ev(kCl, 0.0, 1.0);
  // monotone decreasing to 0 in lambda
  double prev = 1.0;
  for (double lambda : {0.0, 1.0, 5.0, 25.0}) {
    const double v = ev.exponential_penalty(lambda, 3.0, 0.0);
    CHECK(v <= prev + 1e-12);
    CHECK(v >= 0.0);
    prev = v;
  }
  CHECK(prev <= 0.02); // lambda = 25 nearly kills the deficit mass
}

TEST_CASE("free function wrappers") {
  GerberShiuQuery query;
  query.theta = 0.0;
  query.q = 1.0;
  query.a = 1.0;
  query.b = 2.0;
  query.x = 0.5;
  query.y = -0.5;
  const DensityValue dv = gs_density_two_sided(kCl, query);
  ParisianEvaluator ev(kCl, 0.0, 1.0);
  CHECK(dv.value == doctest::Approx(ev.density_two_sided(1.0, 2.0, 0.5, -0.5)));
  CHECK(gs_density_lower(kCl, 0.0, 1.0, 1.0, 0.5, -0.5).value ==
        doctest::Approx(ev.density_lower(1.0, 0.5, -0.5)));
  CHECK(gs_density_upper(kCl, 0.0, 1.0, 2.0, 0.5, -0.5).value ==
        doctest::Approx(ev.density_upper(2.0, 0.5, -0.5)));
  CHECK(gs_density_unrestricted(kCl, 0.0, 1.0, 0.5, -0.5).value ==
        doctest::Approx(ev.density_unrestricted(0.5, -0.5)));
  CHECK(laplace_ruin_before_b(kCl, 0.0, 1.0, 2.0, 0.5) ==
        doctest::Approx(ev.laplace_ruin_before_b(2.0, 0.5)));
  CHECK(gs_exponential_penalty(kCl, 0.0, 1.0, 1.0, 2.0, 0.5) ==
        doctest::Approx(ev.exponential_penalty(1.0, 2.0, 0.5)));
}

TEST_CASE("q -> 0 degenerate queries are rejected, small q masses vanish") {
  CHECK_THROWS_AS(gs_density_unrestricted(kCl, 0.0, 0.0, 0.5, -0.5), std::domain_error);
  // the stable tail machinery falls back near-degenerate; direct evaluation
  // still answers pointwise queries
  ParisianEvaluator tiny(kCl, 0.0, 1e-4);
  CHECK(tiny.density_unrestricted(0.5, -0.5) >= -1e-12);
  CHECK(parisian_ruin_prob(kCl, 1e-4, 0.5) <= 1e-3);
}
