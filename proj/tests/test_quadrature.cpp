#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bobylev/quadrature.hpp"

using namespace bobylev;

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  // Order n is exact through degree 2n-1; x^14 over [-1,1] probes order 8.
  const auto& x = gl_nodes(8);
  const auto& w = gl_weights(8);
  REQUIRE(x.size() == 8);
  double sum = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum += w[i] * std::pow(x[i], 14);
    mass += w[i];
  }
  CHECK(sum == doctest::Approx(2.0 / 15.0).epsilon(1e-14));
  CHECK(mass == doctest::Approx(2.0).epsilon(1e-15));
  // Symmetry of the rule.
  CHECK(x.front() == doctest::Approx(-x.back()).epsilon(1e-15));
}

TEST_CASE("composite rule on smooth integrands") {
  const double s = integrate([](double t) { return std::sin(t); }, 0.0, M_PI, 8, 8);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-13));
  const double e = integrate([](double t) { return std::exp(t); }, 0.0, 1.0, 4, 10);
  CHECK(e == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("graded mesh absorbs an endpoint singularity") {
  // int_0^1 x^{-1/2} dx = 2; the substitution x = s^m makes it polynomial.
  const auto f = [](double x) { return 1.0 / std::sqrt(x); };
  const double plain = integrate_graded(f, 0.0, 1.0, 1, 64, 8);
  const double graded = integrate_graded(f, 0.0, 1.0, 4, 16, 8);
  CHECK(std::abs(plain - 2.0) > 1e-4);  // the ungraded rule visibly struggles
  CHECK(graded == doctest::Approx(2.0).epsilon(1e-12));

  // Shifted interval: singularity at the left endpoint a != 0.  Accuracy is
  // limited by cancellation in x - 2 near the endpoint, not by the rule.
  const auto g = [](double x) { return 1.0 / std::sqrt(x - 2.0); };
  CHECK(integrate_graded(g, 2.0, 3.0, 4, 16, 8) ==
        doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("refinement driver converges and flags divergence") {
  const auto smooth = [](int panels) {
    return integrate([](double t) { return std::cos(t); }, 0.0, 1.0, panels, 6);
  };
  const Refinement ok = refine_until(smooth, 2, 1e-12, 1e-14, 10);
  CHECK(ok.converged);
  CHECK_FALSE(ok.diverged);
  CHECK(ok.value == doctest::Approx(std::sin(1.0)).epsilon(1e-12));

  // A truncated non-integrable tail: each doubling of panels stands in for a
  // tighter cutoff and doubles the estimate.
  const auto growing = [](int panels) { return static_cast<double>(panels); };
  const Refinement bad = refine_until(growing, 2, 1e-12, 1e-14, 10);
  CHECK(bad.diverged);
  CHECK_FALSE(bad.converged);
}

TEST_CASE("filon quadrature tracks closed forms at high frequency") {
  const double v = 311.0;
  const double s1 = integrate_sin([](double) { return 1.0; }, 0.0, 1.0, v);
  CHECK(s1 == doctest::Approx((1.0 - std::cos(v)) / v).epsilon(1e-10));

  const double s2 = integrate_sin([](double x) { return x; }, 0.0, 1.0, v);
  CHECK(s2 ==
        doctest::Approx((std::sin(v) - v * std::cos(v)) / (v * v)).epsilon(1e-8));

  const double c1 = integrate_cos([](double) { return 1.0; }, 0.0, 1.0, v);
  CHECK(c1 == doctest::Approx(std::sin(v) / v).epsilon(1e-8));

  const double b = 2.0;
  const double c2 = integrate_cos([](double x) { return std::exp(-x); }, 0.0, b, v);
  const double closed =
      (std::exp(-b) * (v * std::sin(v * b) - std::cos(v * b)) + 1.0) /
      (1.0 + v * v);
  CHECK(c2 == doctest::Approx(closed).epsilon(1e-8));
}

TEST_CASE("filon series branch agrees with plain quadrature at low frequency") {
  // The cubic reconstruction is fourth order in the panel width; 16 panels
  // on [0, 3] put the agreement in the 1e-9 range.
  const auto h = [](double x) { return std::exp(-x * x); };
  const double low = integrate_cos(h, 0.0, 3.0, 1e-3, 16);
  const double ref = integrate(
      [&](double x) { return h(x) * std::cos(1e-3 * x); }, 0.0, 3.0, 16, 10);
  CHECK(low == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("adaptive wrappers") {
  const double s = integrate_adaptive(
      [](double t) { return std::sin(t); }, 0.0, M_PI);
  CHECK(s == doctest::Approx(2.0).epsilon(1e-12));
  const double g = integrate_to_infinity(
      [](double t) { return std::exp(-t * t); }, 0.0);
  CHECK(g == doctest::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-12));
}

TEST_CASE("sinc handles the origin") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-8) == doctest::Approx(1.0 - 1e-16 / 6.0).epsilon(1e-15));
  CHECK(sinc(2.5) == doctest::Approx(std::sin(2.5) / 2.5).epsilon(1e-15));
  CHECK(sinc(-2.5) == sinc(2.5));
}
