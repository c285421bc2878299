#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "bobylev/solver.hpp"

using namespace bobylev;

namespace {
SolverConfig base_config() {
  SolverConfig cfg;
  cfg.kernel = KernelModel::constant(1.0);
  cfg.grid = RadialGrid::solver_default();
  cfg.p = 1.0;
  cfg.delta_p = 1.0;
  cfg.alpha = 1.0;
  cfg.dt = 2e-3;
  return cfg;
}

double sup_diff(const RadialCharFn& a, const RadialCharFn& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i)
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}
}  // namespace

TEST_CASE("gaussian data rides the exact diffusion orbit") {
  // For gaussian data the collision term vanishes identically, so the flow
  // reduces to phi_t = -delta r^2 phi.  In the direct form that factor is
  // applied exactly, so e^{-c r^2} -> e^{-(c + delta t) r^2} up to
  // interpolation dust; the gain form would re-expose the loss term to the
  // time discretization and lose this property on purpose.
  SolverConfig cfg = base_config();
  cfg.grid = RadialGrid::make_log(1e-3, 20.0, 512, 32);
  cfg.form = StepForm::direct;
  cfg.p = 2.0;
  cfg.alpha = 2.0;
  cfg.dt = 5e-3;
  cfg.t_final = 0.25;
  cfg.output_times = {0.125, 0.25};
  const RadialCharFn phi0 = RadialCharFn::gaussian_preset(cfg.grid, 0.1);

  const EvolutionResult run = evolve(cfg, phi0);
  REQUIRE(run.times.size() == 3);  // t = 0 plus the two requested outputs
  CHECK(run.times[0] == 0.0);
  CHECK(run.times[1] == doctest::Approx(0.125));
  CHECK(run.times[2] == doctest::Approx(0.25));
  for (std::size_t j = 1; j < run.times.size(); ++j) {
    const double c = 0.1 + run.times[j];
    double worst = 0.0;
    for (std::size_t i = 0; i < cfg.grid->size(); ++i) {
      const double r = cfg.grid->nodes()[i];
      worst = std::max(worst, std::abs(run.states[j].values()[i] -
                                       std::exp(-c * r * r)));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("levy data passes every trajectory diagnostic") {
  SolverConfig cfg = base_config();
  cfg.t_final = 0.3;
  cfg.output_times = {0.05, 0.1, 0.15, 0.2, 0.25, 0.3};
  const RadialCharFn phi0 = RadialCharFn::levy_preset(cfg.grid, 1.0, 1.0);

  const EvolutionResult run = evolve(cfg, phi0);
  CHECK(run.accepted_steps > 0);
  CHECK(run.rejected_steps == 0);  // the gain form never trips the bound
  CHECK(run.plan_panels > 0);
  CHECK(sup_diff(run.states.front(), phi0) < 1e-12);

  const TrajectoryChecks checks = run_diagnostics(cfg, run, 30, 20250814);
  CHECK(all_pass(checks.growth));
  CHECK(all_pass(checks.envelope));
  CHECK(all_pass(checks.time_modulus));
  CHECK(checks.time_modulus.size() == 30);
  CHECK(all_pass(checks.psd));
  for (const PsdResult& p : checks.psd_spots) CHECK(p.pass);
}

TEST_CASE("euler is visibly less accurate than heun at the same step") {
  SolverConfig cfg = base_config();
  cfg.adaptive = false;
  cfg.dt = 4e-3;
  cfg.t_final = 0.1;
  cfg.output_times = {0.1};
  const RadialCharFn phi0 = RadialCharFn::levy_preset(cfg.grid, 1.0, 1.0);

  SolverConfig ref_cfg = cfg;
  ref_cfg.dt = 5e-4;
  const RadialCharFn ref = evolve(ref_cfg, phi0).states.back();

  cfg.scheme = Scheme::exp_euler;
  const double err_euler = sup_diff(evolve(cfg, phi0).states.back(), ref);
  cfg.scheme = Scheme::exp_heun;
  const double err_heun = sup_diff(evolve(cfg, phi0).states.back(), ref);
  CHECK(err_heun < err_euler / 10.0);
  CHECK(err_euler < 0.05);
}

TEST_CASE("configuration validation rejects inconsistent setups") {
  const RadialCharFn phi0 =
      RadialCharFn::levy_preset(RadialGrid::solver_default(), 1.0, 1.0);

  SolverConfig cfg = base_config();
  cfg.alpha = 1.5;  // above the diffusion exponent
  CHECK_THROWS_AS(evolve(cfg, phi0), std::invalid_argument);

  cfg = base_config();
  cfg.kernel = KernelModel::maxwellian_singular(1.0);
  cfg.form = StepForm::gain;  // gain form needs a finite mass
  CHECK_THROWS_AS(evolve(cfg, phi0), std::invalid_argument);

  cfg = base_config();
  cfg.kernel = KernelModel::maxwellian_singular(1.0);
  cfg.alpha = 0.4;  // mu_alpha divergent
  CHECK_THROWS_AS(evolve(cfg, phi0), std::invalid_argument);

  cfg = base_config();
  cfg.grid = RadialGrid::make_log(1e-4, 100.0, 100, 0);  // not phi0's grid
  CHECK_THROWS_AS(evolve(cfg, phi0), std::invalid_argument);
}

TEST_CASE("a rejected step without adaptivity surfaces as divergence") {
  SolverConfig cfg = base_config();
  cfg.adaptive = false;
  cfg.t_final = 0.05;
  cfg.output_times = {0.05};
  // No state can meet a negative tolerance, so the very first step is
  // rejected and the march has nowhere to go.
  cfg.growth_tol = -1e-3;
  const RadialCharFn phi0 = RadialCharFn::levy_preset(cfg.grid, 1.0, 1.0);
  CHECK_THROWS_AS(evolve(cfg, phi0), std::runtime_error);
}

TEST_CASE("picard iteration contracts at the documented rate") {
  SolverConfig cfg = base_config();
  const double gamma2 = gamma_moment(cfg.kernel, 2.0).value;
  const double T0 = 0.9 * std::log(2.0) / gamma2;
  const RadialCharFn phi0 = RadialCharFn::levy_preset(cfg.grid, 1.0, 1.0);

  const PicardResult pic = picard_solve(cfg, phi0, T0, 64);
  CHECK(pic.converged);
  CHECK(pic.sweeps < 60);
  CHECK(pic.contraction_factor ==
        doctest::Approx(0.92822653746370684).epsilon(1e-12));
  REQUIRE(!pic.trajectory.empty());
  CHECK(pic.times.front() == 0.0);
  CHECK(pic.times.back() == doctest::Approx(T0));
  CHECK(sup_diff(pic.trajectory.front(), phi0) < 1e-12);
  // Every recorded ratio sits inside the contraction bound while the
  // distances are above the noise floor.
  for (std::size_t k = 0; k < pic.ratios.size(); ++k) {
    if (pic.sweep_distances[k + 1] < 1e-9) break;
    CHECK(pic.ratios[k] < pic.contraction_factor + 0.05);
  }
}

TEST_CASE("stability envelope and the trivial-zero sanity check") {
  SolverConfig cfg = base_config();
  cfg.t_final = 0.5;
  cfg.output_times = {0.1, 0.2, 0.3, 0.4, 0.5};
  const RadialCharFn phi0 = RadialCharFn::levy_preset(cfg.grid, 1.0, 1.0);
  const RadialCharFn psi0 = RadialCharFn::levy_preset(cfg.grid, 1.0, 1.2);

  const StabilityResult st = stability_experiment(cfg, phi0, psi0);
  // d0 is the distance between the wrapped (anchor-refitted) states, so it
  // sits a few 1e-5 below the analytic value |1.2 - 1.0| = 0.2.
  CHECK(st.d0 == doctest::Approx(0.2).epsilon(5e-4));
  CHECK(st.lambda_alpha ==
        doctest::Approx(2.0 * M_PI / 3.0).epsilon(1e-10));
  CHECK(all_pass(st.reports));
  REQUIRE(!st.lhs.empty());
  CHECK(st.lhs.front() == doctest::Approx(st.d0).epsilon(1e-12));

  const StabilityResult zero = stability_experiment(cfg, phi0, phi0);
  for (double v : zero.lhs) CHECK(v == 0.0);
}

TEST_CASE("cutoff continuation builds a cauchy sequence") {
  SolverConfig cfg = base_config();
  cfg.kernel = KernelModel::maxwellian_singular(1.0);
  cfg.p = 1.5;
  cfg.alpha = 1.5;
  cfg.t_final = 0.2;
  cfg.output_times = {0.1, 0.2};
  const RadialCharFn phi0 = RadialCharFn::levy_preset(cfg.grid, 1.5, 1.0);

  // n = 2 (lower angle 0.5) is still pre-asymptotic; the Cauchy behaviour
  // of the ladder sets in once the truncation reaches small angles.
  const ContinuationResult cont =
      cutoff_continuation(cfg, phi0, {4, 8, 16});
  REQUIRE(cont.members.size() == 3);
  REQUIRE(cont.trajectory_gaps.size() == 2);
  CHECK(cont.trajectory_gaps[0] > cont.trajectory_gaps[1]);
  CHECK(cont.trajectory_gaps[1] > 0.0);
  for (std::size_t k = 1; k < cont.exponent_estimates.size(); ++k)
    CHECK(cont.exponent_estimates[k] > cont.exponent_estimates[k - 1]);
  CHECK(cont.exponent_estimates.back() < cont.lambda_alpha);
  CHECK(cont.lambda_alpha == doctest::Approx(1.8529253699463198).epsilon(1e-9));
  CHECK(!cont.limit.states.empty());
  CHECK(cont.extrapolation_ratio > 0.0);
  CHECK(cont.extrapolation_ratio < 1.0);

  // A cutoff base kernel or a non-ascending ladder is a caller error.
  SolverConfig bad = base_config();
  const RadialCharFn w1 = RadialCharFn::levy_preset(bad.grid, 1.0, 1.0);
  CHECK_THROWS_AS(cutoff_continuation(bad, w1, {2, 4}), std::invalid_argument);
  CHECK_THROWS_AS(cutoff_continuation(cfg, phi0, {8, 4}), std::invalid_argument);
}

TEST_CASE("nonexistence probe: saturation at alpha == p, blow-up above") {
  const NonexistenceResult sat =
      nonexistence_probe(1.0, 1.0, 1.0, 0.7, {1e-6, 1e-5, 1e-4});
  CHECK(sat.saturates);
  CHECK(sat.sup_value.front() == doctest::Approx(0.7).epsilon(1e-3));

  std::vector<double> r_mins;
  for (int i = 0; i < 6; ++i) r_mins.push_back(std::pow(10.0, -6.0 + 0.5 * i));
  const NonexistenceResult blow =
      nonexistence_probe(1.0, 1.5, 1.0, 1.0, r_mins);
  CHECK_FALSE(blow.saturates);
  CHECK(blow.expected_slope == doctest::Approx(-0.5));
  CHECK(blow.fitted_slope ==
        doctest::Approx(blow.expected_slope).epsilon(0.05));
  // The sup genuinely blows up as the window reaches toward the origin.
  CHECK(blow.sup_value.front() > 10.0 * blow.sup_value.back());

  CHECK_THROWS_AS(nonexistence_probe(1.0, 0.5, 1.0, 1.0, {1e-6}),
                  std::invalid_argument);
}
