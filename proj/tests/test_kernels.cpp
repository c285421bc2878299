#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "bobylev/kernels.hpp"

using namespace bobylev;

namespace {
// Closed moments for b == c: with x = sin^2(theta/2),
//   mu_alpha     = 4 pi c int_0^{1/2} x^{alpha/2} dx = 8 pi c 2^{-(alpha+2)/2} / (alpha+2)
//   gamma_alpha  = 4 pi c int_0^{1/2} [(1-x)^{a/2} + x^{a/2}] dx = 8 pi c / (alpha+2)
//   lambda_alpha = gamma_alpha - 2 pi c = 2 pi c (2-alpha)/(alpha+2)
double mu_closed(double c, double a) {
  return 8.0 * M_PI * c * std::pow(2.0, -(a + 2.0) / 2.0) / (a + 2.0);
}
double gamma_closed(double c, double a) { return 8.0 * M_PI * c / (a + 2.0); }
double lambda_closed(double c, double a) {
  return 2.0 * M_PI * c * (2.0 - a) / (a + 2.0);
}
}  // namespace

TEST_CASE("constant kernel moments match the closed forms") {
  const KernelModel k = KernelModel::constant(1.0);
  CHECK(k.cutoff());
  CHECK(l1_norm(k).value == doctest::Approx(2.0 * M_PI).epsilon(1e-13));
  for (double a : {0.5, 1.0, 1.5, 2.0}) {
    const MomentResult mu = mu_moment(k, a);
    const MomentResult ga = gamma_moment(k, a);
    const MomentResult la = lambda_moment(k, a);
    REQUIRE(mu.converged);
    REQUIRE(ga.converged);
    CHECK(mu.value == doctest::Approx(mu_closed(1.0, a)).epsilon(1e-12));
    CHECK(ga.value == doctest::Approx(gamma_closed(1.0, a)).epsilon(1e-12));
    CHECK(la.value == doctest::Approx(lambda_closed(1.0, a)).epsilon(1e-12));
  }
  // lambda_2 == 0 comes from |xi+|^2 + |xi-|^2 = |xi|^2, not from quadrature
  // luck, so it deserves an absolute check.
  CHECK(std::abs(lambda_moment(k, 2.0).value) <= 1e-12);
  CHECK(lambda_moment(k, 1.0).value ==
        doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-13));
  // Strength scales every moment linearly.
  CHECK(l1_norm(KernelModel::constant(2.5)).value ==
        doctest::Approx(5.0 * M_PI).epsilon(1e-13));
}

TEST_CASE("singular kernel: integrability window and frozen moments") {
  const KernelModel k = KernelModel::maxwellian_singular(1.0);
  CHECK_FALSE(k.cutoff());
  CHECK(k.singularity_exponent() == doctest::Approx(1.5));

  // mu_alpha converges iff alpha > 1/2.
  CHECK(mu_moment(k, 0.4).diverged);
  const MomentResult mu06 = mu_moment(k, 0.6);
  CHECK_FALSE(mu06.diverged);
  CHECK(mu06.converged);
  CHECK(mu06.value > 0.0);

  // Independently computed reference values for kappa = 1.
  CHECK(lambda_moment(k, 1.0).value ==
        doctest::Approx(6.7072369988634026).epsilon(1e-10));
  CHECK(lambda_moment(k, 1.5).value ==
        doctest::Approx(1.8529253699463198).epsilon(1e-10));
  CHECK(std::abs(lambda_moment(k, 2.0).value) <= 1e-12);
}

TEST_CASE("truncations: mass, caps, and monotone lambda") {
  const KernelModel base = KernelModel::maxwellian_singular(1.0);
  const KernelModel b32 = base.truncated(32, false);
  CHECK(b32.cutoff());
  REQUIRE(b32.truncation().has_value());
  CHECK(b32.truncation()->n == 32);
  CHECK(b32.lower_angle() == doctest::Approx(1.0 / 32.0));

  // ||b_n||_1 = 2 pi int_{1/n}^{pi/2} theta^{-3/2} d theta = 4 pi (sqrt(n) - sqrt(2/pi))
  const double closed = 4.0 * M_PI * (std::sqrt(32.0) - std::sqrt(2.0 / M_PI));
  CHECK(l1_norm(b32).value == doctest::Approx(closed).epsilon(1e-12));

  // Frozen references for the truncated stability exponents.
  CHECK(lambda_moment(b32, 1.5).value ==
        doctest::Approx(1.78784539467).epsilon(1e-9));
  CHECK(lambda_moment(b32, 1.0).value ==
        doctest::Approx(5.59941778002).epsilon(1e-9));

  // lambda_{n,alpha} increases with n toward the non-cutoff value.
  double prev = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const double cur = lambda_moment(base.truncated(n, false), 1.0).value;
    CHECK(cur > prev);
    prev = cur;
  }
  CHECK(prev < 6.7072369988634026);

  // The cap can only remove mass, and it marks a breakpoint for quadrature.
  const KernelModel capped = base.truncated(8, true);
  CHECK(l1_norm(capped).value < l1_norm(base.truncated(8, false)).value);
  CHECK_FALSE(capped.breakpoints().empty());
  // Where the cap binds, b sin(theta) = n sin(theta).
  const double theta = 0.2;  // b(cos 0.2) = 0.2^{-3/2}/sin(0.2) ~ 56 > 8
  CHECK(capped.eval(theta) == doctest::Approx(8.0));
  CHECK(capped.eval_weighted(theta) ==
        doctest::Approx(8.0 * std::sin(theta)).epsilon(1e-14));

  CHECK_THROWS_AS(b32.truncated(4, false), std::invalid_argument);
  CHECK_THROWS_AS(base.truncated(0, false), std::invalid_argument);
}

TEST_CASE("cutoff identities: gamma_2 equals the mass, sandwich bounds") {
  for (const KernelModel& k :
       {KernelModel::constant(1.0),
        KernelModel::maxwellian_singular(1.0).truncated(8, false),
        KernelModel::maxwellian_singular(1.0).truncated(8, true)}) {
    const double mass = l1_norm(k).value;
    const double g2 = gamma_moment(k, 2.0).value;
    CHECK(std::abs(g2 - mass) <= 1e-10);
    for (double a : {0.5, 1.0, 1.5}) {
      const double ga = gamma_moment(k, a).value;
      CHECK(ga >= g2 - 1e-10);
      CHECK(ga <= 2.0 * g2 + 1e-10);
    }
  }
}

TEST_CASE("domain and custom kernels") {
  const KernelModel k = KernelModel::constant(1.0);
  CHECK_THROWS_AS(k.eval(0.0), std::domain_error);
  CHECK_THROWS_AS(k.eval(2.0), std::domain_error);
  CHECK(k.eval(M_PI / 2.0) == doctest::Approx(1.0));

  // A custom kernel reproducing the constant family must match its moments.
  const KernelModel c =
      KernelModel::custom([](double) { return 1.0; }, -1.0);
  CHECK(l1_norm(c).value == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  CHECK(lambda_moment(c, 1.0).value ==
        doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-10));
}

TEST_CASE("json round trip") {
  const KernelModel k = KernelModel::maxwellian_singular(0.7).truncated(16, true);
  const nlohmann::json j = kernel_to_json(k);
  const KernelModel back = kernel_from_json(j);
  CHECK(back.family() == KernelFamily::maxwellian_singular);
  CHECK(back.strength() == doctest::Approx(0.7));
  REQUIRE(back.truncation().has_value());
  CHECK(back.truncation()->n == 16);
  CHECK(back.truncation()->cap.has_value());
  CHECK(l1_norm(back).value == doctest::Approx(l1_norm(k).value).epsilon(1e-14));

  CHECK_THROWS_AS(kernel_from_json(nlohmann::json{{"family", "nope"}}),
                  std::invalid_argument);
}
