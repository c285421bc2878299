#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "bobylev/collision.hpp"
#include "bobylev/quadrature.hpp"

using namespace bobylev;

namespace {
std::shared_ptr<const RadialGrid> wide_grid() {
  return RadialGrid::make_log(1e-4, 100.0, 160, 16);
}

QuadratureSpec noise_tolerant_spec() {
  // For integrands that vanish identically the refinement floor has to sit
  // above rounding noise, otherwise the driver chases dust forever.
  QuadratureSpec spec;
  spec.abs_tol = 1e-10;
  return spec;
}
}  // namespace

TEST_CASE("gaussian profiles are fixed points for any kernel") {
  const auto grid = wide_grid();
  const RadialCharFn g = RadialCharFn::gaussian_preset(grid, 0.5);
  const QuadratureSpec spec = noise_tolerant_spec();
  for (const KernelModel& k : {KernelModel::constant(1.0),
                               KernelModel::maxwellian_singular(1.0)}) {
    for (double r : {0.01, 1.0, 10.0}) {
      const CollideResult res = bobylev_isotropic(g, k, r, spec);
      CHECK_FALSE(res.diverged);
      CHECK(std::abs(res.value) <= 1e-8);
    }
  }
}

TEST_CASE("independent substitution cross-check for the constant kernel") {
  // With x = sin^2(theta/2) the operator becomes
  //   4 pi int_0^{1/2} [phi(r sqrt(1-x)) phi(r sqrt(x)) - phi(r)] dx,
  // a different parametrization evaluated by a different quadrature.
  const auto grid = wide_grid();
  const RadialCharFn phi = RadialCharFn::levy_preset(grid, 1.0, 1.0);
  const KernelModel k = KernelModel::constant(1.0);
  for (double r : {0.3, 1.0, 4.0}) {
    const double ref =
        4.0 * M_PI *
        integrate_adaptive(
            [&](double x) {
              return phi.eval(r * std::sqrt(1.0 - x)) *
                         phi.eval(r * std::sqrt(x)) -
                     phi.eval(r);
            },
            0.0, 0.5);
    const CollideResult res = bobylev_isotropic(phi, k, r);
    CHECK(res.converged);
    CHECK(res.value == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("small-r rate recovers the stability exponent") {
  // phi = e^{-r} near zero gives B(phi)(r) = -lambda_1 r + O(r^2); for the
  // unit constant kernel lambda_1 = 2 pi / 3.
  const auto grid = wide_grid();
  const RadialCharFn phi = RadialCharFn::levy_preset(grid, 1.0, 1.0);
  const double r = 1e-6;
  const CollideResult res =
      bobylev_isotropic(phi, KernelModel::constant(1.0), r);
  CHECK(res.converged);
  CHECK(res.value / r == doctest::Approx(-2.0 * M_PI / 3.0).epsilon(1e-5));
}

TEST_CASE("gain-loss split and endpoint conventions") {
  const auto grid = wide_grid();
  const RadialCharFn phi = RadialCharFn::levy_preset(grid, 1.0, 1.0);
  const KernelModel k = KernelModel::constant(1.0);

  CHECK(bobylev_isotropic(phi, k, 0.0).value == 0.0);
  CHECK(gain_isotropic(phi, k, 0.0).value ==
        doctest::Approx(2.0 * M_PI).epsilon(1e-12));

  for (double r : {0.1, 1.0, 5.0}) {
    const double b = bobylev_isotropic(phi, k, r).value;
    const double g = gain_isotropic(phi, k, r).value;
    CHECK(b == doctest::Approx(g - 2.0 * M_PI * phi.eval(r)).epsilon(1e-9));
  }

  CHECK_THROWS_AS(
      gain_isotropic(phi, KernelModel::maxwellian_singular(1.0), 1.0),
      std::invalid_argument);
}

TEST_CASE("cancellation modes agree at moderate radius") {
  const auto grid = wide_grid();
  const RadialCharFn phi = RadialCharFn::levy_preset(grid, 1.5, 1.0);
  QuadratureSpec direct;
  direct.cancellation = QuadratureSpec::Cancellation::direct;
  const KernelModel k = KernelModel::constant(1.0);
  const double split = bobylev_isotropic(phi, k, 1.0).value;
  const double lit = bobylev_isotropic(phi, k, 1.0, direct).value;
  CHECK(split == doctest::Approx(lit).epsilon(1e-8));
}

TEST_CASE("non-integrable pairing is flagged divergent") {
  // Data with Hoelder exponent 0.4 against the theta^{-3/2} kernel: the
  // angular integral fails at the origin and the refinement must say so
  // instead of returning a number.
  const auto grid = wide_grid();
  const RadialCharFn rough = RadialCharFn::levy_preset(grid, 0.4, 1.0);
  const CollideResult res =
      bobylev_isotropic(rough, KernelModel::maxwellian_singular(1.0), 1.0);
  CHECK(res.diverged);
  CHECK_FALSE(res.converged);
}

TEST_CASE("operator bound on dyadic radii") {
  const auto grid = wide_grid();
  const RadialCharFn phi = RadialCharFn::levy_preset(grid, 1.0, 1.0);
  const KernelModel k = KernelModel::maxwellian_singular(1.0);
  std::vector<double> rs;
  for (int e = -4; e <= 4; ++e) rs.push_back(std::pow(2.0, e));
  const auto reports =
      verify_operator_bound(phi, k, 1.0, std::span<const double>(rs));
  CHECK(reports.size() == rs.size());
  for (const auto& rep : reports) CHECK(rep.pass);

  // alpha outside the integrability window or outside K^alpha must throw.
  CHECK_THROWS_AS(
      verify_operator_bound(phi, k, 0.4, std::span<const double>(rs)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      verify_operator_bound(phi, k, 1.5, std::span<const double>(rs)),
      std::invalid_argument);
}

TEST_CASE("three-dimensional path reduces to the isotropic one") {
  const auto grid = wide_grid();
  const RadialCharFn phi = RadialCharFn::levy_preset(grid, 1.0, 1.0);
  const CharFn3 phi3 = [](const Vec3& xi) {
    const double r =
        std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
    return std::complex<double>(std::exp(-r), 0.0);
  };
  const Vec3 xi = {0.75, -0.4, 0.3};
  const double r = std::sqrt(0.75 * 0.75 + 0.4 * 0.4 + 0.3 * 0.3);

  // At fixed theta the circle integrand is constant for isotropic phi.
  const double theta = 0.9;
  const std::complex<double> circ = circle_integral(phi3, xi, theta, 32);
  const double expected =
      2.0 * M_PI *
      (std::exp(-r * std::cos(theta / 2.0)) *
           std::exp(-r * std::sin(theta / 2.0)) -
       std::exp(-r));
  CHECK(circ.real() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(std::abs(circ.imag()) < 1e-12);

  const GeneralCollideResult gen =
      bobylev_general(phi3, KernelModel::constant(1.0), xi);
  const CollideResult iso =
      bobylev_isotropic(phi, KernelModel::constant(1.0), r);
  CHECK(gen.converged);
  CHECK(gen.value.real() == doctest::Approx(iso.value).epsilon(1e-7));
  CHECK(std::abs(gen.value.imag()) < 1e-10);
}

TEST_CASE("collision plan reproduces the refined operator on its grid") {
  const auto grid = RadialGrid::make_log(1e-3, 10.0, 96, 8);
  std::vector<double> vals;
  for (double r : grid->nodes()) vals.push_back(std::exp(-r));
  const RadialCharFn phi = RadialCharFn::from_values(grid, vals, 1.0);

  const KernelModel k = KernelModel::constant(1.0);
  const QuadratureSpec spec;
  const CollisionPlan plan(grid, k, spec, 1.0, 128);
  CHECK(plan.panels() == 128);

  std::vector<double> bob(grid->size()), gain(grid->size());
  plan.apply_bobylev(phi, std::span<double>(bob));
  plan.apply_gain(phi, std::span<double>(gain));

  for (std::size_t i = 0; i < grid->size(); i += 17) {
    const double r = grid->nodes()[i];
    CHECK(bob[i] ==
          doctest::Approx(bobylev_isotropic(phi, k, r, spec).value)
              .epsilon(1e-6));
    CHECK(gain[i] ==
          doctest::Approx(gain_isotropic(phi, k, r, spec).value)
              .epsilon(1e-6));
    // The same split identity the refined path satisfies.
    CHECK(bob[i] ==
          doctest::Approx(gain[i] - 2.0 * M_PI * phi.eval(r)).epsilon(1e-10));
  }
}
