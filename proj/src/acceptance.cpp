#include "bobylev/acceptance.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "bobylev/charfun.hpp"
#include "bobylev/collision.hpp"
#include "bobylev/grid.hpp"
#include "bobylev/io.hpp"
#include "bobylev/kernels.hpp"
#include "bobylev/levy.hpp"
#include "bobylev/random.hpp"
#include "bobylev/report.hpp"
#include "bobylev/solver.hpp"

namespace bobylev {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

template <class Body>
Criterion timed(std::string name, Body&& body) {
  Criterion c;
  c.name = std::move(name);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = strf("exception: %s", e.what());
  }
  c.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return c;
}

double growth_margin_of(const RadialCharFn& state, double delta_p, double p,
                        double t) {
  double m = -std::numeric_limits<double>::infinity();
  const auto& y = state.values();
  const auto& r = state.grid().nodes();
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0.0) continue;
    m = std::max(m, std::log(std::abs(y[i])) + delta_p * std::pow(r[i], p) * t);
  }
  return std::expm1(m);
}

std::vector<double> uniform_outputs(double t_final, int n) {
  std::vector<double> out;
  out.reserve(n);
  for (int j = 1; j <= n; ++j) out.push_back(t_final * j / n);
  return out;
}

SolverConfig make_cfg(KernelModel kernel, double p, double delta, double alpha,
                      std::shared_ptr<const RadialGrid> grid, double t_final,
                      int n_outputs) {
  SolverConfig cfg;
  cfg.kernel = std::move(kernel);
  cfg.p = p;
  cfg.delta_p = delta;
  cfg.alpha = alpha;
  cfg.grid = std::move(grid);
  cfg.t_final = t_final;
  cfg.output_times = uniform_outputs(t_final, n_outputs);
  return cfg;
}

// 1. The Gaussian is a pointwise fixed point of the collision operator: the
// bracket cancels identically, so the computed integral is pure quadrature
// noise and must sit far below 1e-8 for both kernel families.
Criterion c01(const fs::path& dir) {
  return timed("01 gaussian-fixed-point", [&](Criterion& c) {
    auto grid = RadialGrid::make_log(1e-4, 100.0, 160);
    const RadialCharFn gauss = RadialCharFn::gaussian_preset(grid, 0.5);
    QuadratureSpec spec;
    // The exact value is zero; successive panel doublings differ by rounding
    // noise only, so the convergence floor is raised above it.
    spec.abs_tol = 1e-10;
    const std::array<KernelModel, 2> kernels = {
        KernelModel::constant(1.0), KernelModel::maxwellian_singular(1.0)};
    CsvTable table;
    table.header = {"kernel", "r", "bobylev_value"};
    double worst = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < kernels.size(); ++k) {
      for (int j = 0; j < 32; ++j) {
        const double r = std::pow(10.0, -3.0 + 5.0 * j / 31.0);
        const CollideResult res = bobylev_isotropic(gauss, kernels[k], r, spec);
        ok = ok && !res.diverged && std::abs(res.value) <= 1e-8;
        worst = std::max(worst, std::abs(res.value));
        table.rows.push_back({static_cast<double>(k), r, res.value});
      }
    }
    write_csv(dir / "c01_gaussian_fixed_point.csv", table,
              json{{"phi", "gaussian c=0.5"},
                   {"kernels", {"constant(1)", "maxwellian_singular(1)"}},
                   {"nodes", "32 log-spaced in [1e-3, 1e2]"},
                   {"tolerance", 1e-8}});
    c.pass = ok;
    c.detail = strf("max |B(gaussian)| = %.3g over 64 samples (tol 1e-8)", worst);
  });
}

// 2. Closed moment identities and the integrability window of mu_alpha.
Criterion c02(const fs::path& dir) {
  return timed("02 moment-identities", [&](Criterion& c) {
    const KernelModel constant = KernelModel::constant(1.0);
    const KernelModel singular = KernelModel::maxwellian_singular(1.0);
    const std::array<KernelModel, 3> cutoff = {
        constant, singular.truncated(8, false), singular.truncated(8, true)};
    bool ok = true;
    double worst_identity = 0.0;

    CsvTable moments;
    moments.header = {"kernel", "alpha", "gamma_alpha", "lambda_alpha"};
    CsvTable identities;
    identities.header = {"kernel", "b_l1", "gamma_2", "identity_error"};
    for (std::size_t k = 0; k < cutoff.size(); ++k) {
      const MomentResult l1 = l1_norm(cutoff[k]);
      const MomentResult g2 = gamma_moment(cutoff[k], 2.0);
      ok = ok && l1.converged && g2.converged;
      const double id_err = std::abs(g2.value - l1.value);
      worst_identity = std::max(worst_identity, id_err);
      ok = ok && id_err <= 1e-10;
      identities.rows.push_back(
          {static_cast<double>(k), l1.value, g2.value, id_err});
      for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
        const MomentResult ga = gamma_moment(cutoff[k], alpha);
        const MomentResult la = lambda_moment(cutoff[k], alpha);
        ok = ok && ga.converged && la.converged;
        // gamma_2 <= gamma_alpha <= 2 gamma_2 for 0 < alpha <= 2.
        if (alpha < 2.0)
          ok = ok && ga.value >= g2.value - 1e-10 &&
               ga.value <= 2.0 * g2.value + 1e-10;
        moments.rows.push_back(
            {static_cast<double>(k), alpha, ga.value, la.value});
      }
    }

    CsvTable lambda2;
    lambda2.header = {"kernel", "lambda_2"};
    double worst_lambda2 = 0.0;
    const std::array<KernelModel, 2> lambda_kernels = {constant, singular};
    for (std::size_t k = 0; k < lambda_kernels.size(); ++k) {
      const MomentResult l2 = lambda_moment(lambda_kernels[k], 2.0);
      ok = ok && l2.converged && std::abs(l2.value) <= 1e-12;
      worst_lambda2 = std::max(worst_lambda2, std::abs(l2.value));
      lambda2.rows.push_back({static_cast<double>(k), l2.value});
    }

    // mu_alpha for the untruncated singular family: divergent below the
    // alpha = 1/2 threshold, finite above it.
    CsvTable mu;
    mu.header = {"alpha", "mu_value", "diverged"};
    const MomentResult mu04 = mu_moment(singular, 0.4);
    const MomentResult mu06 = mu_moment(singular, 0.6);
    ok = ok && mu04.diverged;
    ok = ok && mu06.converged && !mu06.diverged && mu06.value > 0.0;
    mu.rows.push_back({0.4, mu04.value, mu04.diverged ? 1.0 : 0.0});
    mu.rows.push_back({0.6, mu06.value, mu06.diverged ? 1.0 : 0.0});

    const json cfg{{"kernels",
                    {"constant(1)", "singular n=8", "singular n=8 capped"}},
                   {"lambda2_kernels", {"constant(1)", "singular"}}};
    write_csv(dir / "c02_moments.csv", moments, cfg);
    write_csv(dir / "c02_cutoff_identities.csv", identities, cfg);
    write_csv(dir / "c02_lambda2.csv", lambda2, cfg);
    write_csv(dir / "c02_mu_window.csv", mu, cfg);
    c.pass = ok;
    c.detail = strf(
        "max |gamma_2 - ||b||_1| = %.3g (tol 1e-10), max |lambda_2| = %.3g "
        "(tol 1e-12), mu(0.4) diverged=%d, mu(0.6)=%.6g",
        worst_identity, worst_lambda2, mu04.diverged ? 1 : 0, mu06.value);
  });
}

// 3. Stable-density closed forms: the p = 2 Gaussian, the L1 mass of the
// characteristic function, and the heavy-tail constant.
Criterion c03(const fs::path& dir) {
  return timed("03 levy-closed-forms", [&](Criterion& c) {
    bool ok = true;

    CsvTable gauss;
    gauss.header = {"v", "density", "closed_form", "abs_error"};
    double worst_density = 0.0;
    const LevyParams p2{2.0, 1.0};
    const double norm = std::pow(4.0 * M_PI, -1.5);
    for (int j = 0; j < 20; ++j) {
      const double v = 0.25 + 4.75 * j / 19.0;
      const double got = f_p_density(v, p2);
      const double want = norm * std::exp(-0.25 * v * v);
      const double err = std::abs(got - want);
      worst_density = std::max(worst_density, err);
      ok = ok && err <= 1e-6;
      gauss.rows.push_back({v, got, want, err});
    }

    CsvTable l1;
    l1.header = {"p", "quadrature", "closed_form", "abs_error"};
    double worst_l1 = 0.0;
    for (double p : {1.0, 1.5, 2.0}) {
      const LevyParams prm{p, 1.0};
      const double got = wp_l1_norm(prm);
      const double want = wp_l1_norm_closed(prm);
      const double err = std::abs(got - want);
      worst_l1 = std::max(worst_l1, err);
      ok = ok && err <= 1e-8;
      l1.rows.push_back({p, got, want, err});
    }

    CsvTable tail;
    tail.header = {"p", "fitted", "closed_form", "rel_error"};
    double worst_tail = 0.0;
    double fit_p1 = 0.0;
    for (double p : {0.5, 1.0, 1.5}) {
      const LevyParams prm{p, 1.0};
      const double fit = tail_constant_fit(prm, 50.0);
      const double want = tail_constant(prm);
      const double rel = std::abs(fit - want) / want;
      worst_tail = std::max(worst_tail, rel);
      ok = ok && rel <= 0.02;
      if (p == 1.0) fit_p1 = fit;
      tail.rows.push_back({p, fit, want, rel});
    }
    // p = 1 is the Cauchy-type case with the fully explicit constant 1/pi^2.
    const double pi2 = 1.0 / (M_PI * M_PI);
    ok = ok && std::abs(fit_p1 - pi2) <= 0.02 * pi2;

    const json cfg{{"t", 1.0}, {"tail_anchor_v", 50.0}};
    write_csv(dir / "c03_gaussian_density.csv", gauss, cfg);
    write_csv(dir / "c03_l1_norms.csv", l1, cfg);
    write_csv(dir / "c03_tail_constants.csv", tail, cfg);
    c.pass = ok;
    c.detail = strf(
        "max density err %.3g (tol 1e-6), max L1 err %.3g (tol 1e-8), max "
        "tail rel err %.3g (tol 0.02), p=1 fit %.6g vs 1/pi^2 %.6g",
        worst_density, worst_l1, worst_tail, fit_p1, pi2);
  });
}

// 4. The K^alpha norm of the diffusion factor: saturation at alpha = p and
// the r_min^{p-alpha} blow-up rate above p.
Criterion c04(const fs::path& dir) {
  return timed("04 norm-identities", [&](Criterion& c) {
    bool ok = true;

    CsvTable sat;
    sat.header = {"p", "t", "r_min", "sup_value"};
    double worst_sat = 0.0;
    const std::array<std::pair<double, double>, 3> saturation_cases = {
        {{1.0, 1.0}, {1.5, 1.0}, {2.0, 0.5}}};
    for (const auto& [p, t] : saturation_cases) {
      const NonexistenceResult probe =
          nonexistence_probe(p, p, 1.0, t, {1e-6, 1e-5});
      const double err = std::abs(probe.sup_value.front() - t);
      worst_sat = std::max(worst_sat, err);
      ok = ok && err <= 1e-4 && probe.saturates;
      for (std::size_t i = 0; i < probe.r_min.size(); ++i)
        sat.rows.push_back({p, t, probe.r_min[i], probe.sup_value[i]});
    }

    CsvTable sups;
    sups.header = {"p", "alpha", "r_min", "sup_value"};
    CsvTable fits;
    fits.header = {"p", "alpha", "fitted_slope", "expected_slope"};
    double worst_slope = 0.0;
    const std::array<std::pair<double, double>, 3> slope_cases = {
        {{1.0, 1.5}, {1.0, 2.0}, {0.5, 1.0}}};
    std::vector<double> r_mins;
    for (int i = 0; i < 6; ++i) r_mins.push_back(std::pow(10.0, -6.0 + 0.5 * i));
    for (const auto& [p, alpha] : slope_cases) {
      const NonexistenceResult probe =
          nonexistence_probe(p, alpha, 1.0, 1.0, r_mins);
      const double rel =
          std::abs(probe.fitted_slope - probe.expected_slope) /
          std::abs(probe.expected_slope);
      worst_slope = std::max(worst_slope, rel);
      ok = ok && rel <= 0.05;
      fits.rows.push_back({p, alpha, probe.fitted_slope, probe.expected_slope});
      for (std::size_t i = 0; i < probe.r_min.size(); ++i)
        sups.rows.push_back({p, alpha, probe.r_min[i], probe.sup_value[i]});
    }

    const json cfg{{"delta_p", 1.0}, {"scan_points", 2048}};
    write_csv(dir / "c04_saturation.csv", sat, cfg);
    write_csv(dir / "c04_slopes.csv", sups, cfg);
    write_csv(dir / "c04_slope_fits.csv", fits, cfg);
    c.pass = ok;
    c.detail = strf(
        "max |sup - t| = %.3g at r_min=1e-6 (tol 1e-4), max slope rel err "
        "%.3g (tol 0.05)",
        worst_sat, worst_slope);
  });
}

// 5. Pointwise operator bound |B(phi)| <= 5 mu_alpha ||phi-1||_alpha r^alpha
// for the singular kernel on dyadic radii.
Criterion c05(const fs::path& dir) {
  return timed("05 operator-bound", [&](Criterion& c) {
    auto grid = RadialGrid::make_log(1e-4, 100.0, 160);
    const std::array<RadialCharFn, 3> phis = {
        RadialCharFn::levy_preset(grid, 1.0, 1.0),
        RadialCharFn::levy_preset(grid, 1.5, 1.0),
        RadialCharFn::gaussian_preset(grid, 0.5)};
    const KernelModel kernel = KernelModel::maxwellian_singular(1.0);
    std::vector<double> rs;
    for (int k = -4; k <= 4; ++k) rs.push_back(std::pow(2.0, k));

    CsvTable table;
    table.header = {"phi", "alpha", "r", "abs_bobylev", "bound"};
    bool ok = true;
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < phis.size(); ++f) {
      for (double alpha : {0.8, 1.0}) {
        const auto reports = verify_operator_bound(
            phis[f], kernel, alpha, std::span<const double>(rs));
        ok = ok && all_pass(reports);
        for (std::size_t i = 0; i < reports.size(); ++i) {
          min_margin = std::min(min_margin, reports[i].margin());
          table.rows.push_back({static_cast<double>(f), alpha, rs[i],
                                reports[i].lhs, reports[i].rhs});
        }
      }
    }
    write_csv(dir / "c05_operator_bound.csv", table,
              json{{"phis", {"levy p=1 t=1", "levy p=1.5 t=1", "gaussian c=0.5"}},
                   {"kernel", "maxwellian_singular(1)"},
                   {"radii", "dyadic 2^-4 .. 2^4"}});
    c.pass = ok;
    c.detail = strf("54 samples, zero violations, smallest margin %.3g",
                    min_margin);
  });
}

// 6. Maximum growth: evolved solutions stay inside the stable envelope
// e^{delta r^p t}|phi| <= 1 for the cutoff kernel directly and for the
// singular kernel through its truncation sequence.
Criterion c06(const fs::path& dir, std::uint64_t seed) {
  return timed("06 max-growth", [&](Criterion& c) {
    auto grid = RadialGrid::solver_default();
    const RadialCharFn phi0 = RadialCharFn::levy_preset(grid, 1.0, 1.0);
    CsvTable table;
    table.header = {"case", "truncation_n", "t", "growth_margin"};
    bool ok = true;
    double worst = -std::numeric_limits<double>::infinity();
    int case_id = 0;
    for (double p : {1.0, 2.0}) {
      // Constant cutoff kernel, direct evolution.
      SolverConfig cfg =
          make_cfg(KernelModel::constant(1.0), p, 1.0, 1.0, grid, 1.0, 10);
      const EvolutionResult run = evolve(cfg, phi0);
      const TrajectoryChecks checks = run_diagnostics(cfg, run, 0, seed);
      for (std::size_t j = 0; j < run.times.size(); ++j) {
        const double margin =
            growth_margin_of(run.states[j], cfg.delta_p, cfg.p, run.times[j]);
        worst = std::max(worst, margin);
        table.rows.push_back({static_cast<double>(case_id), 0.0, run.times[j],
                              margin});
      }
      ok = ok && all_pass(checks.growth);
      ++case_id;

      // Singular kernel realized through the cutoff continuation members and
      // the extrapolated limit.
      SolverConfig scfg = make_cfg(KernelModel::maxwellian_singular(1.0), p,
                                   1.0, 1.0, grid, 1.0, 10);
      const ContinuationResult cont =
          cutoff_continuation(scfg, phi0, {4, 8, 16});
      for (std::size_t m = 0; m < cont.members.size(); ++m) {
        for (std::size_t j = 0; j < cont.members[m].times.size(); ++j) {
          const double margin =
              growth_margin_of(cont.members[m].states[j], scfg.delta_p, scfg.p,
                               cont.members[m].times[j]);
          ok = ok && margin <= 1e-6;
          worst = std::max(worst, margin);
          table.rows.push_back({static_cast<double>(case_id),
                                static_cast<double>(cont.n_values[m]),
                                cont.members[m].times[j], margin});
        }
      }
      for (std::size_t j = 0; j < cont.limit.times.size(); ++j) {
        const double margin = growth_margin_of(
            cont.limit.states[j], scfg.delta_p, scfg.p, cont.limit.times[j]);
        ok = ok && margin <= 1e-6;
        worst = std::max(worst, margin);
        table.rows.push_back({static_cast<double>(case_id), -1.0,
                              cont.limit.times[j], margin});
      }
      ++case_id;
    }
    write_csv(dir / "c06_max_growth.csv", table,
              json{{"phi0", "levy p=1 t=1"},
                   {"cases",
                    {"p=1 constant", "p=1 singular continuation",
                     "p=2 constant", "p=2 singular continuation"}},
                   {"delta_p", 1.0},
                   {"tolerance", 1e-6}});
    c.pass = ok;
    c.detail = strf("worst growth margin %.3g over all trajectories (tol 1e-6)",
                    worst);
  });
}

// 7. Stability of the weighted distance against the e^{lambda_alpha t}
// envelope, plus the uniqueness smoke test on identical data.
Criterion c07(const fs::path& dir) {
  return timed("07 stability", [&](Criterion& c) {
    auto grid = RadialGrid::solver_default();
    const RadialCharFn phi0 = RadialCharFn::levy_preset(grid, 1.0, 1.0);
    const RadialCharFn psi0 = RadialCharFn::levy_preset(grid, 1.0, 1.2);
    const double d0_exact = d_alpha(phi0, psi0, 1.0);
    bool ok = std::abs(d0_exact - 0.2) <= 1e-12;

    CsvTable table;
    table.header = {"kernel", "t", "lhs", "rhs"};
    // The singular family is marched through its n=32 member: once the
    // quadrature resolves the angular singularity, an explicit step needs
    // dt below 1e-5 to stay stable, so the raw kernel is impractical over
    // this horizon.  The member obeys the same contraction estimate with
    // its own lambda_alpha, which sits below the singular one.
    const std::array<KernelModel, 2> kernels = {
        KernelModel::constant(1.0),
        KernelModel::maxwellian_singular(1.0).truncated(32, false)};
    double worst_ratio = 0.0;
    for (std::size_t k = 0; k < kernels.size(); ++k) {
      SolverConfig cfg = make_cfg(kernels[k], 1.0, 1.0, 1.0, grid, 2.0, 20);
      if (k == 1) cfg.form = StepForm::direct;
      const StabilityResult st = stability_experiment(cfg, phi0, psi0);
      ok = ok && all_pass(st.reports);
      for (std::size_t j = 0; j < st.times.size(); ++j) {
        if (st.rhs[j] > 0.0)
          worst_ratio = std::max(worst_ratio, st.lhs[j] / st.rhs[j]);
        table.rows.push_back(
            {static_cast<double>(k), st.times[j], st.lhs[j], st.rhs[j]});
      }
    }

    // Identical data must evolve identically: the difference is exactly zero
    // at every node and time, not merely small.
    SolverConfig cfg =
        make_cfg(KernelModel::constant(1.0), 1.0, 1.0, 1.0, grid, 2.0, 20);
    const StabilityResult same = stability_experiment(cfg, phi0, phi0);
    double same_max = 0.0;
    for (double v : same.lhs) same_max = std::max(same_max, v);
    ok = ok && same_max == 0.0;

    write_csv(dir / "c07_stability.csv", table,
              json{{"phi0", "levy p=1 t=1"},
                   {"psi0", "levy p=1 t=1.2"},
                   {"alpha", 1.0},
                   {"p", 1.0},
                   {"delta_p", 1.0},
                   {"kernels",
                    {"constant(1)", "maxwellian_singular(1) n=32 member"}},
                   {"slack", 1e-4}});
    c.pass = ok;
    c.detail = strf(
        "d0 = %.15g (0.2 exact), worst lhs/rhs = %.6f (slack 1+1e-4), "
        "identical-data max diff = %.3g",
        d0_exact, worst_ratio, same_max);
  });
}

// 8. Picard iteration on the gain form: sweep distances contract at least as
// fast as the Banach factor, and the fixed point matches time stepping.
Criterion c08(const fs::path& dir) {
  return timed("08 picard-contraction", [&](Criterion& c) {
    auto grid = RadialGrid::solver_default();
    const RadialCharFn phi0 = RadialCharFn::levy_preset(grid, 1.0, 1.0);
    SolverConfig cfg =
        make_cfg(KernelModel::constant(1.0), 1.0, 1.0, 1.0, grid, 1.0, 1);
    const double gamma2 = l1_norm(cfg.kernel).value;
    const double T0 = 0.9 * std::log(2.0) / gamma2;

    const PicardResult pic = picard_solve(cfg, phi0, T0, 512);
    bool ok = pic.converged;
    const double bound = pic.contraction_factor + 0.05;
    double worst_ratio = 0.0;
    // Ratios are meaningful while the distances sit above rounding noise.
    for (std::size_t k = 0; k < pic.ratios.size(); ++k) {
      if (pic.sweep_distances[k] <= 1e-9) break;
      worst_ratio = std::max(worst_ratio, pic.ratios[k]);
      ok = ok && pic.ratios[k] <= bound;
    }

    SolverConfig heun = cfg;
    heun.t_final = T0;
    heun.output_times = {T0};
    heun.dt = 1e-4;
    heun.adaptive = false;
    heun.scheme = Scheme::exp_heun;
    const EvolutionResult run = evolve(heun, phi0);
    double agree = 0.0;
    const auto& a = pic.trajectory.back().values();
    const auto& b = run.states.back().values();
    for (std::size_t i = 0; i < a.size(); ++i)
      agree = std::max(agree, std::abs(a[i] - b[i]));
    ok = ok && agree <= 1e-6;

    CsvTable table;
    table.header = {"sweep", "distance", "ratio"};
    for (std::size_t k = 0; k < pic.sweep_distances.size(); ++k)
      table.rows.push_back({static_cast<double>(k + 1), pic.sweep_distances[k],
                            k == 0 ? 0.0 : pic.ratios[k - 1]});
    write_csv(dir / "c08_picard.csv", table,
              json{{"kernel", "constant(1)"},
                   {"T0", T0},
                   {"time_steps", 512},
                   {"contraction_factor", pic.contraction_factor},
                   {"ratio_bound", bound}});
    c.pass = ok;
    c.detail = strf(
        "%d sweeps, worst ratio %.4f <= %.4f, fixed point vs exp_heun sup "
        "diff %.3g (tol 1e-6)",
        pic.sweeps, worst_ratio, bound, agree);
  });
}

// 9. Cutoff continuation toward the singular kernel: trajectory gaps shrink
// and the truncated stability exponents climb to lambda_alpha.
Criterion c09(const fs::path& dir) {
  return timed("09 cutoff-continuation", [&](Criterion& c) {
    auto grid = RadialGrid::solver_default();
    const RadialCharFn phi0 = RadialCharFn::levy_preset(grid, 1.5, 1.0);
    SolverConfig cfg = make_cfg(KernelModel::maxwellian_singular(1.0), 1.5, 1.0,
                                1.5, grid, 0.5, 5);
    const ContinuationResult cont =
        cutoff_continuation(cfg, phi0, {4, 8, 16, 32});

    bool ok = true;
    for (std::size_t k = 1; k < cont.trajectory_gaps.size(); ++k)
      ok = ok && cont.trajectory_gaps[k] < cont.trajectory_gaps[k - 1];
    for (std::size_t k = 1; k < cont.exponent_estimates.size(); ++k)
      ok = ok && cont.exponent_estimates[k] > cont.exponent_estimates[k - 1];
    for (double est : cont.exponent_estimates)
      ok = ok && est < cont.lambda_alpha;
    const double gap_to_limit =
        std::abs(cont.lambda_alpha - cont.exponent_estimates.back());
    ok = ok && gap_to_limit <= 0.10 * cont.lambda_alpha;

    CsvTable table;
    table.header = {"n", "exponent_estimate", "trajectory_gap"};
    for (std::size_t k = 0; k < cont.n_values.size(); ++k)
      table.rows.push_back({static_cast<double>(cont.n_values[k]),
                            cont.exponent_estimates[k],
                            k == 0 ? 0.0 : cont.trajectory_gaps[k - 1]});
    write_csv(dir / "c09_continuation.csv", table,
              json{{"kernel", "maxwellian_singular(1)"},
                   {"alpha", 1.5},
                   {"p", 1.5},
                   {"phi0", "levy p=1.5 t=1"},
                   {"t_final", 0.5},
                   {"lambda_alpha", cont.lambda_alpha}});
    c.pass = ok;
    c.detail = strf(
        "gaps %.3g > %.3g > %.3g, exponent(32) %.6g vs lambda %.6g "
        "(off by %.2f%%, tol 10%%)",
        cont.trajectory_gaps[0], cont.trajectory_gaps[1],
        cont.trajectory_gaps[2], cont.exponent_estimates.back(),
        cont.lambda_alpha, 100.0 * gap_to_limit / cont.lambda_alpha);
  });
}

// 10. Along accepted trajectories the K^alpha norm stays below the Gronwall
// envelope, and the pointwise time modulus holds at random (s, t) pairs.
Criterion c10(const fs::path& dir, std::uint64_t seed) {
  return timed("10 growth-envelope", [&](Criterion& c) {
    auto grid = RadialGrid::solver_default();
    const RadialCharFn phi0 = RadialCharFn::levy_preset(grid, 1.0, 1.0);
    struct Case {
      KernelModel kernel;
      double p;
    };
    const std::array<Case, 3> cases = {
        Case{KernelModel::constant(1.0), 1.0},
        Case{KernelModel::constant(1.0), 2.0},
        Case{KernelModel::maxwellian_singular(1.0).truncated(16, false), 1.0}};
    CsvTable envelope;
    envelope.header = {"case", "t", "kalpha_norm", "envelope"};
    CsvTable modulus;
    modulus.header = {"case", "pair", "lhs", "rhs"};
    bool ok = true;
    double worst_env = 0.0;
    int mod_pass = 0;
    int mod_total = 0;
    for (std::size_t k = 0; k < cases.size(); ++k) {
      SolverConfig cfg =
          make_cfg(cases[k].kernel, cases[k].p, 1.0, 1.0, grid, 1.0, 10);
      // The truncated kernel has gamma_2 near 40, and in gain form the
      // near-origin step defect scales with (gamma_2 dt)^3 at O(1) amplitude,
      // which inflates the measured K^alpha norm past the envelope at early
      // times. March it in the direct form, whose defect vanishes like
      // r^alpha, so the norm tracks the physical trajectory.
      if (k == 2) cfg.form = StepForm::direct;
      const EvolutionResult run = evolve(cfg, phi0);
      const TrajectoryChecks checks =
          run_diagnostics(cfg, run, 50, seed + 10 + k);
      ok = ok && all_pass(checks.envelope) && all_pass(checks.time_modulus) &&
           all_pass(checks.growth);
      for (std::size_t j = 0; j < checks.envelope.size(); ++j) {
        const auto& rep = checks.envelope[j];
        if (rep.rhs > 0.0) worst_env = std::max(worst_env, rep.lhs / rep.rhs);
        envelope.rows.push_back(
            {static_cast<double>(k), run.times[j], rep.lhs, rep.rhs});
      }
      for (std::size_t q = 0; q < checks.time_modulus.size(); ++q) {
        const auto& rep = checks.time_modulus[q];
        ++mod_total;
        if (rep.pass) ++mod_pass;
        modulus.rows.push_back({static_cast<double>(k),
                                static_cast<double>(q), rep.lhs, rep.rhs});
      }
    }
    const json cfg{{"phi0", "levy p=1 t=1"},
                   {"alpha", 1.0},
                   {"delta_p", 1.0},
                   {"cases",
                    {"constant p=1", "constant p=2",
                     "singular n=16 p=1 (direct form)"}},
                   {"random_pairs", 50}};
    write_csv(dir / "c10_envelope.csv", envelope, cfg);
    write_csv(dir / "c10_time_modulus.csv", modulus, cfg);
    c.pass = ok;
    c.detail = strf(
        "largest envelope ratio %.3g (bound 1), %d/%d time modulus pairs pass",
        worst_env, mod_pass, mod_total);
  });
}

// 11. Measured convergence orders under dt halving for both schemes.
Criterion c11(const fs::path& dir) {
  return timed("11 scheme-orders", [&](Criterion& c) {
    auto grid = RadialGrid::solver_default();
    const RadialCharFn phi0 = RadialCharFn::levy_preset(grid, 1.0, 1.0);
    const std::array<double, 4> dts = {0.025, 0.0125, 0.00625, 0.003125};

    CsvTable table;
    table.header = {"scheme", "dt", "sup_diff_to_next", "order"};
    bool ok = true;
    std::string order_note;
    for (int s = 0; s < 2; ++s) {
      const Scheme scheme = s == 0 ? Scheme::exp_euler : Scheme::exp_heun;
      std::vector<std::vector<double>> finals;
      for (double dt : dts) {
        SolverConfig cfg =
            make_cfg(KernelModel::constant(1.0), 1.0, 1.0, 1.0, grid, 0.5, 1);
        cfg.scheme = scheme;
        cfg.dt = dt;
        cfg.adaptive = false;
        // In gain form the near-origin defect saturates the sup error at
        // these gamma_2 dt values and masks the dt-order. The direct form
        // integrates B(phi), which vanishes at the origin, so the
        // time-stepping error dominates and both schemes show their nominal
        // orders.
        cfg.form = StepForm::direct;
        finals.push_back(evolve(cfg, phi0).states.back().values());
      }
      std::array<double, 3> diffs{};
      for (int k = 0; k < 3; ++k) {
        double d = 0.0;
        for (std::size_t i = 0; i < finals[k].size(); ++i)
          d = std::max(d, std::abs(finals[k][i] - finals[k + 1][i]));
        diffs[k] = d;
      }
      const double lo = s == 0 ? 0.8 : 1.6;
      const double hi = s == 0 ? 1.2 : 2.4;
      for (int k = 0; k < 3; ++k) {
        const double order =
            k < 2 ? std::log2(diffs[k] / diffs[k + 1]) : 0.0;
        if (k < 2) ok = ok && order >= lo && order <= hi;
        table.rows.push_back({static_cast<double>(s), dts[k], diffs[k], order});
        if (k < 2)
          order_note += strf("%s%.2f", order_note.empty() ? "" : "/", order);
      }
    }
    write_csv(dir / "c11_scheme_orders.csv", table,
              json{{"kernel", "constant(1)"},
                   {"phi0", "levy p=1 t=1"},
                   {"t_final", 0.5},
                   {"dts", dts},
                   {"form", "direct"},
                   {"euler_range", {0.8, 1.2}},
                   {"heun_range", {1.6, 2.4}}});
    c.pass = ok;
    c.detail = strf("orders euler/heun = %s (ranges [0.8,1.2], [1.6,2.4])",
                    order_note.c_str());
  });
}

// Small deterministic artifact battery used twice by c12: moment constants,
// seeded Bochner spot checks, and a short evolution trace.
void emit_deterministic_set(const fs::path& dir, std::uint64_t seed) {
  const KernelModel constant = KernelModel::constant(1.0);
  const KernelModel trunc = KernelModel::maxwellian_singular(1.0).truncated(8, false);
  CsvTable constants;
  constants.header = {"kernel", "alpha", "gamma_alpha", "lambda_alpha"};
  const std::array<KernelModel, 2> kernels = {constant, trunc};
  for (std::size_t k = 0; k < kernels.size(); ++k)
    for (double alpha : {0.5, 1.0, 2.0})
      constants.rows.push_back({static_cast<double>(k), alpha,
                                gamma_moment(kernels[k], alpha).value,
                                lambda_moment(kernels[k], alpha).value});
  write_csv(dir / "constants.csv", constants,
            json{{"seed", seed}, {"kernels", {"constant(1)", "singular n=8"}}});

  auto grid = RadialGrid::make_log(1e-4, 10.0, 64);
  const RadialCharFn phi = RadialCharFn::levy_preset(grid, 1.0, 1.0);
  Rng rng(seed);
  CsvTable psd;
  psd.header = {"set", "min_eigenvalue", "pass"};
  for (int s = 0; s < 4; ++s) {
    std::array<std::array<double, 3>, 6> pts;
    for (auto& pt : pts) pt = rng.in_ball(4.9);
    const PsdResult res =
        psd_check(phi, std::span<const std::array<double, 3>>(pts), 1e-10);
    psd.rows.push_back({static_cast<double>(s), res.min_eigenvalue,
                        res.pass ? 1.0 : 0.0});
  }
  write_csv(dir / "psd.csv", psd, json{{"seed", seed}, {"sets", 4}});

  auto small = RadialGrid::make_log(1e-3, 10.0, 48);
  SolverConfig cfg = make_cfg(KernelModel::constant(1.0), 1.0, 1.0, 1.0, small,
                              0.1, 2);
  cfg.dt = 0.01;
  const EvolutionResult run =
      evolve(cfg, RadialCharFn::levy_preset(small, 1.0, 1.0));
  CsvTable evo;
  evo.header = {"t", "r", "phi"};
  for (std::size_t j = 0; j < run.times.size(); ++j)
    for (std::size_t i = 0; i < small->size(); ++i)
      evo.rows.push_back(
          {run.times[j], small->nodes()[i], run.states[j].values()[i]});
  write_csv(dir / "evolve.csv", evo, json{{"seed", seed}, {"t_final", 0.1}});
}

// 12. Determinism: the same seed must reproduce every artifact byte for byte.
Criterion c12(const fs::path& dir, std::uint64_t seed) {
  return timed("12 determinism", [&](Criterion& c) {
    const fs::path a = dir / "det_a";
    const fs::path b = dir / "det_b";
    emit_deterministic_set(a, seed);
    emit_deterministic_set(b, seed);

    std::vector<std::string> names;
    for (const auto& entry : fs::directory_iterator(a))
      names.push_back(entry.path().filename().string());
    std::sort(names.begin(), names.end());

    bool ok = !names.empty();
    CsvTable table;
    table.header = {"file", "match"};
    std::vector<std::string> hashes;
    for (std::size_t i = 0; i < names.size(); ++i) {
      const std::uint64_t ha = fnv1a_file(a / names[i]);
      const std::uint64_t hb = fnv1a_file(b / names[i]);
      const bool match = ha == hb;
      ok = ok && match;
      table.rows.push_back({static_cast<double>(i), match ? 1.0 : 0.0});
      hashes.push_back(strf("%s=%016llx", names[i].c_str(),
                            static_cast<unsigned long long>(ha)));
    }
    write_csv(dir / "c12_determinism.csv", table,
              json{{"seed", seed}, {"files", names}, {"hashes", hashes}});
    c.pass = ok;
    c.detail = strf("%zu artifact files hashed, %s", names.size(),
                    ok ? "all identical across reruns" : "MISMATCH");
  });
}

}  // namespace

std::vector<Criterion> run_acceptance(const fs::path& artifact_dir,
                                      std::uint64_t seed) {
  fs::create_directories(artifact_dir);
  std::vector<Criterion> out;
  out.push_back(c01(artifact_dir));
  out.push_back(c02(artifact_dir));
  out.push_back(c03(artifact_dir));
  out.push_back(c04(artifact_dir));
  out.push_back(c05(artifact_dir));
  out.push_back(c06(artifact_dir, seed));
  out.push_back(c07(artifact_dir));
  out.push_back(c08(artifact_dir));
  out.push_back(c09(artifact_dir));
  out.push_back(c10(artifact_dir, seed));
  out.push_back(c11(artifact_dir));
  out.push_back(c12(artifact_dir, seed));
  return out;
}

}  // namespace bobylev
