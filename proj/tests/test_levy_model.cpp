#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "parisian/levy_model.hpp"

using namespace parisian;

namespace {
const LevyModel kBm = LevyModel::brownian_drift(1.0, 1.0);
const LevyModel kCl = LevyModel::cramer_lundberg_exp(1.5, 1.0, 1.0);
const LevyModel kJd = LevyModel::jump_diffusion_exp(1.0, 1.0, 1.0, 2.0);
} // namespace

TEST_CASE("laplace exponent closed forms") {
  CHECK(laplace_exponent(kBm, 2.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(laplace_exponent(kBm, 0.0) == 0.0);
  CHECK(laplace_exponent(kCl, 0.0) == 0.0);
  CHECK(laplace_exponent(kJd, 0.0) == 0.0);
  CHECK(laplace_exponent(kCl, 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(laplace_exponent(kCl, -0.5), std::domain_error);
}

TEST_CASE("phi inverts psi") {
  CHECK(phi(kBm, 4.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(phi(kBm, 0.0) == 0.0);
  CHECK(phi(kCl, 0.0) == 0.0);

  // bisection oracle for the CL root of psi(lam) = 1
  const double root = oracles::bisect(
      [&](double lam) { return laplace_exponent(kCl, lam) - 1.0; }, 0.0, 10.0);
  CHECK(phi(kCl, 1.0) == doctest::Approx(root).epsilon(1e-10));
  CHECK(phi(kCl, 1.0) == doctest::Approx(1.0).epsilon(1e-12)); // rational root

  // a model with psi'(0+) < 0 has a strictly positive Phi(0)
  const LevyModel lossy = LevyModel::cramer_lundberg_exp(1.0, 2.0, 1.0);
  const double phi0 = phi(lossy, 0.0);
  CHECK(phi0 > 0.0);
  CHECK(std::abs(laplace_exponent(lossy, phi0)) < 1e-12);
}

TEST_CASE("inverse consistency on a log grid") {
  for (const auto& m : {kBm, kCl, kJd}) {
    double prev = -1.0;
    for (int k = -6; k <= 6; ++k) {
      const double q = std::pow(10.0, k);
      const double p = phi(m, q);
      CHECK(std::abs(laplace_exponent(m, p) - q) <= 1e-12 * std::max(1.0, q));
      CHECK(p > prev); // Phi strictly increasing
      prev = p;
    }
  }
}

TEST_CASE("psi is convex") {
  for (const auto& m : {kBm, kCl, kJd}) {
    for (double l1 = 0.0; l1 < 4.0; l1 += 0.37) {
      for (double l2 = l1 + 0.1; l2 < 5.0; l2 += 0.53) {
        const double mid = laplace_exponent(m, 0.5 * (l1 + l2));
        const double avg = 0.5 * (laplace_exponent(m, l1) + laplace_exponent(m, l2));
        CHECK(mid <= avg + 1e-12);
      }
    }
  }
}

TEST_CASE("net profit drift closed form and slope consistency") {
  CHECK(net_profit_drift(kBm) == 1.0);
  CHECK(net_profit_drift(kCl) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(net_profit_drift(LevyModel::cramer_lundberg_exp(1.0, 1.0, 1.0)) == 0.0);
  for (const auto& m : {kBm, kCl, kJd}) {
    for (double h : {1e-4, 1e-6}) {
      const double slope = laplace_exponent(m, h) / h;
      CHECK(slope == doctest::Approx(net_profit_drift(m)).epsilon(1e-3));
    }
  }
}

TEST_CASE("w at zero") {
  CHECK(w_at_zero(kCl, 0.7) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(w_at_zero(kBm, 1.0) == 0.0);
  CHECK(w_at_zero(kJd, 1.0) == 0.0);
}

TEST_CASE("variation class") {
  CHECK(variation_class(kCl) == VariationClass::Bounded);
  CHECK(variation_class(kBm) == VariationClass::Unbounded);
  CHECK(variation_class(kJd) == VariationClass::Unbounded);
}

TEST_CASE("model JSON round trip and validation") {
  const LevyModel m = model_from_json(
      R"({"family":"cramer_lundberg_exp","mu":1.5,"sigma":0,"jump_rate":1,"jump_mean_inv":1})");
  CHECK(m.family == Family::CramerLundbergExp);
  CHECK(m.mu == 1.5);
  const LevyModel back = model_from_json(model_to_json(kJd));
  CHECK(back.jump_mean_inv == kJd.jump_mean_inv);

  CHECK_THROWS_AS(model_from_json(R"({"family":"stable","mu":1})"), std::invalid_argument);
  CHECK_THROWS_AS(model_from_json(R"({"mu":1})"), std::invalid_argument); // missing family
  CHECK_THROWS_AS(model_from_json(R"({"family":"brownian_drift"})"),
                  std::invalid_argument); // missing mu
  CHECK_THROWS_AS(model_from_json(R"({"family":"brownian_drift","mu":1,"nu":2})"),
                  std::invalid_argument); // unknown field
  CHECK_THROWS_WITH_AS(
      model_from_json(R"({"family":"brownian_drift","mu":1,"sigma":-1})"),
      doctest::Contains("sigma"), std::domain_error);
  // CL with nonzero sigma violates the family invariant
  CHECK_THROWS_AS(model_from_json(
                      R"({"family":"cramer_lundberg_exp","mu":1,"sigma":0.5,"jump_rate":1})"),
                  std::domain_error);
}
