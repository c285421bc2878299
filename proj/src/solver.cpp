#include "bobylev/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "bobylev/levy.hpp"
#include "bobylev/random.hpp"

namespace bobylev {

namespace {

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Marching anchor exponent: diffusion with p below the data modulus creates
// a 1 - delta t r^p leading term, so the evolved class is min(a0, p).
double evolved_anchor(const SolverConfig& cfg, const RadialCharFn& phi0) {
  const double a0 = phi0.near_origin().exponent;
  return cfg.delta_p > 0.0 ? std::min(a0, cfg.p) : a0;
}

StepForm resolve_form(const SolverConfig& cfg) {
  if (cfg.form != StepForm::automatic) return cfg.form;
  return cfg.kernel.cutoff() ? StepForm::gain : StepForm::direct;
}

void validate_config(const SolverConfig& cfg, const RadialCharFn& phi0) {
  if (!(cfg.p > 0.0) || cfg.p > 2.0)
    throw std::invalid_argument("solver: p must be in (0, 2]");
  if (!(cfg.delta_p >= 0.0))
    throw std::invalid_argument("solver: delta_p must be >= 0");
  if (!(cfg.alpha > 0.0) || cfg.alpha > 2.0)
    throw std::invalid_argument("solver: alpha must be in (0, 2]");
  if (cfg.alpha > cfg.p + 1e-12)
    throw std::invalid_argument("solver: alpha > p is outside the well-posed class");
  if (cfg.alpha > phi0.near_origin().exponent + 1e-12)
    throw std::invalid_argument("solver: initial data is not in K^alpha");
  if (!(cfg.dt > 0.0) || !(cfg.t_final > 0.0))
    throw std::invalid_argument("solver: dt and t_final must be positive");
  if (resolve_form(cfg) == StepForm::gain && !cfg.kernel.cutoff())
    throw std::invalid_argument("solver: gain form needs a cutoff kernel");
  const MomentResult mu = mu_moment(cfg.kernel, cfg.alpha);
  if (mu.diverged || !mu.converged)
    throw std::invalid_argument("solver: mu_alpha diverges for this kernel/alpha");
  if (cfg.grid && !cfg.grid->same_nodes(phi0.grid()))
    throw std::invalid_argument("solver: config grid differs from the data grid");
}

// Exponential (Lawson) integrator in either splitting.  State is the node
// value vector of the full solution phi; `loss` is the coefficient absorbed
// into the exponential factor: delta r^p (direct) or gamma_2 + delta r^p
// (gain), and `rhs` is B or G accordingly.
class Stepper {
 public:
  Stepper(const SolverConfig& cfg, std::shared_ptr<const RadialGrid> grid,
          double anchor_exp, int plan_panels)
      : cfg_(cfg),
        grid_(std::move(grid)),
        anchor_exp_(anchor_exp),
        form_(resolve_form(cfg)),
        plan_(grid_, cfg.kernel, cfg.quad, anchor_exp, plan_panels) {
    if (cfg.kernel.cutoff()) {
      const MomentResult l1 = l1_norm(cfg.kernel);
      if (form_ == StepForm::gain && (!l1.converged || l1.diverged))
        throw std::invalid_argument("solver: ||b||_1 not finite in gain form");
      // Known for either form so the step-size cap can track the collision
      // rate; it is absorbed into the decay factor only in gain form.
      if (l1.converged && !l1.diverged) gamma2_ = l1.value;
    }
    if (form_ == StepForm::gain) absorbed_ = gamma2_;
    loss_.reserve(grid_->size());
    for (double r : grid_->nodes())
      loss_.push_back(absorbed_ + cfg_.delta_p * std::pow(r, cfg_.p));
  }

  const CollisionPlan& plan() const { return plan_; }
  double gamma2() const { return gamma2_; }
  double anchor_exponent() const { return anchor_exp_; }

  RadialCharFn wrap(std::vector<double> y) const {
    return RadialCharFn::from_values(grid_, std::move(y), anchor_exp_);
  }

  void rhs(const RadialCharFn& phi, std::span<double> out) const {
    if (form_ == StepForm::gain)
      plan_.apply_gain(phi, out);
    else
      plan_.apply_bobylev(phi, out);
  }

  std::vector<double> step(const std::vector<double>& y, double dt) const {
    ensure_decay(dt);
    const std::size_t n = y.size();
    const RadialCharFn phi = wrap(y);
    std::vector<double> k1(n);
    rhs(phi, k1);
    std::vector<double> out(n);
    if (cfg_.scheme == Scheme::exp_euler) {
      for (std::size_t i = 0; i < n; ++i)
        out[i] = decay_[i] * (y[i] + dt * k1[i]);
      return out;
    }
    std::vector<double> ystar(n);
    for (std::size_t i = 0; i < n; ++i)
      ystar[i] = decay_[i] * (y[i] + dt * k1[i]);
    const RadialCharFn phistar = wrap(std::move(ystar));
    std::vector<double> k2(n);
    rhs(phistar, k2);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = decay_[i] * (y[i] + 0.5 * dt * k1[i]) + 0.5 * dt * k2[i];
    return out;
  }

  // max_i ln|y_i| + delta r_i^p t  (log of the growth functional).
  double log_growth(const std::vector<double>& y, double t) const {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == 0.0) continue;
      const double diffusion = (loss_[i] - absorbed_) * t;  // delta r^p t
      m = std::max(m, std::log(std::abs(y[i])) + diffusion);
    }
    return m;
  }

 private:
  void ensure_decay(double dt) const {
    if (dt == decay_dt_) return;
    decay_.resize(loss_.size());
    for (std::size_t i = 0; i < loss_.size(); ++i)
      decay_[i] = std::exp(-loss_[i] * dt);
    decay_dt_ = dt;
  }

  const SolverConfig& cfg_;
  std::shared_ptr<const RadialGrid> grid_;
  double anchor_exp_;
  StepForm form_;
  CollisionPlan plan_;
  double gamma2_ = 0.0;
  double absorbed_ = 0.0;
  std::vector<double> loss_;
  mutable std::vector<double> decay_;
  mutable double decay_dt_ = -1.0;
};

// Panel count at which two successive plan applications to phi0 agree.
int calibrate_panels(const SolverConfig& cfg,
                     const std::shared_ptr<const RadialGrid>& grid,
                     double anchor_exp, const RadialCharFn& phi0) {
  if (cfg.plan_panels > 0) return cfg.plan_panels;
  int panels = cfg.quad.panels;
  std::vector<double> prev(grid->size()), cur(grid->size());
  CollisionPlan(grid, cfg.kernel, cfg.quad, anchor_exp, panels)
      .apply_bobylev(phi0, prev);
  for (int d = 0; d < cfg.quad.max_doublings; ++d) {
    panels *= 2;
    CollisionPlan(grid, cfg.kernel, cfg.quad, anchor_exp, panels)
        .apply_bobylev(phi0, cur);
    double scale = 0.0;
    for (double v : cur) scale = std::max(scale, std::abs(v));
    if (sup_abs_diff(prev, cur) <=
        std::max(cfg.quad.abs_tol, cfg.quad.rel_tol * scale))
      return panels;
    std::swap(prev, cur);
  }
  return panels;
}

std::vector<double> output_schedule(const SolverConfig& cfg) {
  std::vector<double> out = cfg.output_times;
  if (out.empty()) out.push_back(cfg.t_final);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  if (out.front() < 0.0 || out.back() > cfg.t_final + 1e-12)
    throw std::invalid_argument("solver: output times outside [0, t_final]");
  if (out.front() == 0.0) out.erase(out.begin());
  return out;
}

double derived_dt_max(const SolverConfig& cfg, const std::vector<double>& outs,
                      const Stepper& stepper) {
  if (cfg.dt_max > 0.0) return cfg.dt_max;
  double cap = outs.front();
  double prev = outs.front();
  for (std::size_t i = 1; i < outs.size(); ++i) {
    cap = std::min(cap, outs[i] - prev);
    prev = outs[i];
  }
  if (stepper.gamma2() > 0.0)
    cap = std::min(cap, std::log(2.0) / (4.0 * stepper.gamma2()));
  return cap;
}

// Lockstep march of one or two trajectories (stability experiments need the
// pair to share every accepted step).  Returns per-trajectory output states.
struct MarchResult {
  std::vector<double> times;
  std::vector<std::vector<std::vector<double>>> states;  // [traj][output][node]
  std::vector<StepDiagnostics> steps;
  int accepted = 0;
  int rejected = 0;
};

MarchResult march(const SolverConfig& cfg, const Stepper& stepper,
                  std::vector<std::vector<double>> ys) {
  const std::vector<double> outs = output_schedule(cfg);
  const double dt_max = derived_dt_max(cfg, outs, stepper);
  const double log_bound = std::log1p(cfg.growth_tol);
  const double dt_min = cfg.dt * std::pow(2.0, -30);

  MarchResult res;
  res.states.resize(ys.size());
  res.times.push_back(0.0);
  for (std::size_t j = 0; j < ys.size(); ++j) res.states[j].push_back(ys[j]);
  {
    StepDiagnostics d0;
    d0.t = 0.0;
    d0.dt = 0.0;
    d0.growth_margin = std::expm1(stepper.log_growth(ys[0], 0.0));
    res.steps.push_back(d0);
  }

  double t = 0.0;
  double dt = std::min(cfg.dt, dt_max);
  int clean = 0;
  for (double target : outs) {
    while (t < target) {
      const double h = std::min(dt, target - t);
      const double t_new = (h == target - t) ? target : t + h;
      std::vector<std::vector<double>> trials;
      trials.reserve(ys.size());
      double worst_log = -std::numeric_limits<double>::infinity();
      for (const auto& y : ys) {
        trials.push_back(stepper.step(y, h));
        worst_log = std::max(worst_log, stepper.log_growth(trials.back(), t_new));
      }
      StepDiagnostics diag;
      diag.t = t_new;
      diag.dt = h;
      diag.growth_margin = std::expm1(worst_log);
      diag.accepted = worst_log <= log_bound;
      res.steps.push_back(diag);
      if (diag.accepted) {
        ys = std::move(trials);
        t = t_new;
        ++res.accepted;
        if (cfg.adaptive && ++clean >= 10) {
          dt = std::min(dt * 1.2, dt_max);
          clean = 0;
        }
      } else {
        ++res.rejected;
        clean = 0;
        dt *= 0.5;
        if (!cfg.adaptive || dt < dt_min)
          throw std::runtime_error(
              "solver: growth bound violated, trajectory diverges");
      }
    }
    res.times.push_back(t);
    for (std::size_t j = 0; j < ys.size(); ++j) res.states[j].push_back(ys[j]);
  }
  return res;
}

EvolutionResult package(const Stepper& stepper, MarchResult&& m,
                        int plan_panels) {
  EvolutionResult out;
  out.times = std::move(m.times);
  out.states.reserve(m.states[0].size());
  for (auto& y : m.states[0]) out.states.push_back(stepper.wrap(std::move(y)));
  out.steps = std::move(m.steps);
  out.accepted_steps = m.accepted;
  out.rejected_steps = m.rejected;
  out.plan_panels = plan_panels;
  return out;
}

}  // namespace

EvolutionResult evolve(const SolverConfig& cfg, const RadialCharFn& phi0) {
  validate_config(cfg, phi0);
  auto grid = cfg.grid ? cfg.grid : phi0.grid_ptr();
  const double anchor = evolved_anchor(cfg, phi0);
  const int panels = calibrate_panels(cfg, grid, anchor, phi0);
  Stepper stepper(cfg, grid, anchor, panels);
  MarchResult m = march(cfg, stepper, {phi0.values()});
  return package(stepper, std::move(m), panels);
}

TrajectoryChecks run_diagnostics(const SolverConfig& cfg,
                                 const EvolutionResult& run,
                                 int n_random_pairs, std::uint64_t seed) {
  TrajectoryChecks out;
  if (run.states.empty()) return out;
  const double alpha = cfg.alpha;
  const MomentResult mu = mu_moment(cfg.kernel, alpha);
  if (mu.diverged || !mu.converged)
    throw std::invalid_argument("diagnostics: mu_alpha not finite");
  const RadialGrid& grid = run.states.front().grid();
  const double r_max = grid.r_max();
  char loc[64];

  // Growth functional and K^alpha envelope at each output time.
  const double k0 = kalpha_norm(run.states.front(), alpha);
  std::vector<double> k_norms;
  for (std::size_t j = 0; j < run.states.size(); ++j)
    k_norms.push_back(kalpha_norm(run.states[j], alpha));
  for (std::size_t j = 0; j < run.states.size(); ++j) {
    const double t = run.times[j];
    std::snprintf(loc, sizeof loc, "t=%.6g", t);
    double lg = -std::numeric_limits<double>::infinity();
    const auto& y = run.states[j].values();
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == 0.0) continue;
      lg = std::max(lg, std::log(std::abs(y[i])) +
                            cfg.delta_p * std::pow(grid.nodes()[i], cfg.p) * t);
    }
    out.growth.push_back(check_inequality("max-growth", std::exp(lg), 1.0,
                                          cfg.growth_tol, loc));
    const double envelope = (k0 + std::pow(cfg.delta_p * t, alpha / cfg.p)) *
                            std::exp(5.0 * mu.value * t);
    out.envelope.push_back(
        check_inequality("kalpha-envelope", k_norms[j], envelope, 1e-9, loc));
  }

  Rng rng(seed);
  const std::size_t n_out = run.states.size();
  if (n_out >= 2) {
    // Time modulus: |phi(r,t)-phi(r,s)| <= |t-s|^{a/p} r^a [d^{a/p} + C_T T^{1-a/p}].
    const double T = run.times.back();
    const double c_T = 10.0 * mu.value * std::exp(5.0 * mu.value * T) *
                       (k0 + std::pow(cfg.delta_p * T, alpha / cfg.p));
    const double bracket = std::pow(cfg.delta_p, alpha / cfg.p) +
                           c_T * std::pow(T, 1.0 - alpha / cfg.p);
    for (int q = 0; q < n_random_pairs; ++q) {
      std::size_t j = rng.uniform_int(static_cast<int>(n_out));
      std::size_t k = rng.uniform_int(static_cast<int>(n_out));
      if (j == k) k = (k + 1) % n_out;
      if (j > k) std::swap(j, k);
      const std::size_t i = rng.uniform_int(static_cast<int>(grid.size()));
      const double r = grid.nodes()[i];
      const double lhs =
          std::abs(run.states[k].values()[i] - run.states[j].values()[i]);
      const double rhs = std::pow(run.times[k] - run.times[j], alpha / cfg.p) *
                         std::pow(r, alpha) * bracket;
      std::snprintf(loc, sizeof loc, "r=%.6g s=%.6g t=%.6g", r, run.times[j],
                    run.times[k]);
      out.time_modulus.push_back(check_inequality(
          "time-modulus", lhs, std::min(2.0, rhs), 1e-12, loc));
    }
  }

  // Bochner spot checks: a few random point sets, each at a random output time.
  const double ball = 0.49 * r_max;
  for (int s = 0; s < 8; ++s) {
    const std::size_t j = rng.uniform_int(static_cast<int>(n_out));
    std::array<std::array<double, 3>, 6> pts;
    for (auto& p : pts) p = rng.in_ball(ball);
    const PsdResult psd = psd_check(
        run.states[j], std::span<const std::array<double, 3>>(pts), 1e-4);
    out.psd_spots.push_back(psd);
    std::snprintf(loc, sizeof loc, "t=%.6g", run.times[j]);
    out.psd.push_back(check_inequality("bochner-psd", -psd.min_eigenvalue, 0.0,
                                       1e-4, loc));
  }
  return out;
}

PicardResult picard_solve(const SolverConfig& cfg, const RadialCharFn& phi0,
                          double T0, int time_steps, double fixed_point_tol,
                          int max_sweeps) {
  validate_config(cfg, phi0);
  if (!cfg.kernel.cutoff())
    throw std::invalid_argument("picard: needs a cutoff kernel");
  const MomentResult l1 = l1_norm(cfg.kernel);
  if (!l1.converged) throw std::invalid_argument("picard: ||b||_1 did not converge");
  const double gamma2 = l1.value;
  if (!(T0 > 0.0) || T0 >= std::log(2.0) / gamma2)
    throw std::invalid_argument("picard: T0 must lie in (0, ln2/gamma_2)");
  if (time_steps < 2) throw std::invalid_argument("picard: need >= 2 time steps");

  auto grid = cfg.grid ? cfg.grid : phi0.grid_ptr();
  const double anchor = evolved_anchor(cfg, phi0);
  const int panels = calibrate_panels(cfg, grid, anchor, phi0);
  CollisionPlan plan(grid, cfg.kernel, cfg.quad, anchor, panels);

  const std::size_t n = grid->size();
  const int m = time_steps;
  const double h = T0 / m;
  std::vector<double> loss(n);
  for (std::size_t i = 0; i < n; ++i)
    loss[i] = gamma2 + cfg.delta_p * std::pow(grid->nodes()[i], cfg.p);
  std::vector<double> decay(n), decay_tj(n);
  for (std::size_t i = 0; i < n; ++i) decay[i] = std::exp(-loss[i] * h);

  PicardResult out;
  out.contraction_factor = 2.0 * (-std::expm1(-gamma2 * T0));
  out.times.resize(m + 1);
  for (int j = 0; j <= m; ++j) out.times[j] = j * h;

  // Iterate: traj[j] holds phi^k(t_j); start from the constant-in-time guess.
  std::vector<std::vector<double>> traj(m + 1, phi0.values());
  std::vector<std::vector<double>> gains(m + 1, std::vector<double>(n));

  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (int j = 0; j <= m; ++j)
      plan.apply_gain(RadialCharFn::from_values(grid, traj[j], anchor),
                      gains[j]);
    double dist = 0.0;
    std::vector<std::vector<double>> next(m + 1);
    next[0] = phi0.values();
    std::vector<double> integral(n, 0.0);
    for (int j = 1; j <= m; ++j) {
      for (std::size_t i = 0; i < n; ++i)
        integral[i] = decay[i] * integral[i] +
                      0.5 * h * (decay[i] * gains[j - 1][i] + gains[j][i]);
      for (std::size_t i = 0; i < n; ++i)
        decay_tj[i] = std::exp(-loss[i] * (j * h));
      next[j].resize(n);
      for (std::size_t i = 0; i < n; ++i)
        next[j][i] = decay_tj[i] * phi0.values()[i] + integral[i];
      dist = std::max(
          dist, d_alpha(RadialCharFn::from_values(grid, next[j], anchor),
                        RadialCharFn::from_values(grid, traj[j], anchor),
                        cfg.alpha));
    }
    traj = std::move(next);
    if (!out.sweep_distances.empty() && out.sweep_distances.back() > 0.0)
      out.ratios.push_back(dist / out.sweep_distances.back());
    out.sweep_distances.push_back(dist);
    out.sweeps = sweep;
    if (dist <= fixed_point_tol) {
      out.converged = true;
      break;
    }
  }
  out.trajectory.reserve(m + 1);
  for (int j = 0; j <= m; ++j)
    out.trajectory.push_back(RadialCharFn::from_values(grid, traj[j], anchor));
  return out;
}

ContinuationResult cutoff_continuation(const SolverConfig& cfg,
                                       const RadialCharFn& phi0,
                                       const std::vector<int>& n_values,
                                       bool capped) {
  if (cfg.kernel.cutoff() || cfg.kernel.truncation())
    throw std::invalid_argument("continuation: base kernel must be non-cutoff");
  if (n_values.size() < 2 ||
      !std::is_sorted(n_values.begin(), n_values.end()))
    throw std::invalid_argument("continuation: need ascending n values");

  ContinuationResult out;
  out.n_values = n_values;
  const MomentResult lam = lambda_moment(cfg.kernel, cfg.alpha);
  if (!lam.converged)
    throw std::invalid_argument("continuation: lambda_alpha did not converge");
  out.lambda_alpha = lam.value;

  for (int n : n_values) {
    SolverConfig member = cfg;
    member.kernel = cfg.kernel.truncated(n, capped);
    // Members integrate in the direct form.  In gain form a near-origin node
    // balances two O(1) quantities (gain/gamma_2 against phi), so every step
    // leaves a defect of order (gamma_2 dt)^3 that does not shrink with r;
    // gamma_2 grows like sqrt(n), the members drift apart numerically, and
    // the drift buries the Cauchy gaps this experiment is meant to expose.
    // The direct form integrates B(phi), which vanishes like r^alpha at the
    // origin, so its defect stays profile-shaped and the gaps are physical.
    if (member.form == StepForm::automatic) member.form = StepForm::direct;
    out.members.push_back(evolve(member, phi0));
    const MomentResult ln = lambda_moment(member.kernel, cfg.alpha);
    out.exponent_estimates.push_back(ln.value);
  }
  for (std::size_t k = 1; k < out.members.size(); ++k) {
    double gap = 0.0;
    for (std::size_t j = 0; j < out.members[k].states.size(); ++j)
      gap = std::max(gap, sup_abs_diff(out.members[k].states[j].values(),
                                       out.members[k - 1].states[j].values()));
    out.trajectory_gaps.push_back(gap);
  }

  // Richardson limit from the last two members with the measured gap ratio.
  const std::size_t last = out.members.size() - 1;
  double rho = 0.0;
  if (out.trajectory_gaps.size() >= 2 && out.trajectory_gaps[last - 2] > 0.0)
    rho = out.trajectory_gaps[last - 1] / out.trajectory_gaps[last - 2];
  out.extrapolation_ratio = rho;
  out.limit = out.members[last];
  if (rho > 0.0 && rho < 1.0) {
    const double boost = rho / (1.0 - rho);
    std::vector<RadialCharFn> states;
    states.reserve(out.limit.states.size());
    for (std::size_t j = 0; j < out.limit.states.size(); ++j) {
      std::vector<double> y = out.members[last].states[j].values();
      const auto& yp = out.members[last - 1].states[j].values();
      for (std::size_t i = 0; i < y.size(); ++i)
        y[i] += boost * (y[i] - yp[i]);
      states.push_back(RadialCharFn::from_values(
          out.members[last].states[j].grid_ptr(), std::move(y),
          out.members[last].states[j].near_origin().exponent));
    }
    out.limit.states = std::move(states);
  }
  return out;
}

StabilityResult stability_experiment(const SolverConfig& cfg,
                                     const RadialCharFn& phi0,
                                     const RadialCharFn& psi0) {
  validate_config(cfg, phi0);
  validate_config(cfg, psi0);
  if (!phi0.grid().same_nodes(psi0.grid()))
    throw std::invalid_argument("stability: data must share a grid");

  auto grid = cfg.grid ? cfg.grid : phi0.grid_ptr();
  const double anchor =
      std::min(evolved_anchor(cfg, phi0), evolved_anchor(cfg, psi0));
  const int panels = calibrate_panels(cfg, grid, anchor, phi0);
  Stepper stepper(cfg, grid, anchor, panels);
  MarchResult m = march(cfg, stepper, {phi0.values(), psi0.values()});

  StabilityResult out;
  const MomentResult lam = lambda_moment(cfg.kernel, cfg.alpha);
  if (!lam.converged)
    throw std::invalid_argument("stability: lambda_alpha did not converge");
  out.lambda_alpha = lam.value;
  out.d0 = d_alpha(stepper.wrap(phi0.values()), stepper.wrap(psi0.values()),
                   cfg.alpha);
  out.times = m.times;
  char loc[32];
  for (std::size_t j = 0; j < m.times.size(); ++j) {
    const double t = m.times[j];
    const auto& ya = m.states[0][j];
    const auto& yb = m.states[1][j];
    // sup_r e^{delta r^p t} |phi - psi| / r^alpha, assembled in log space so
    // the diffusion weight never overflows against underflowed values.
    double sup = 0.0;
    for (std::size_t i = 0; i < ya.size(); ++i) {
      const double diff = std::abs(ya[i] - yb[i]);
      if (diff == 0.0) continue;
      const double r = grid->nodes()[i];
      const double lg = cfg.delta_p * std::pow(r, cfg.p) * t + std::log(diff) -
                        cfg.alpha * std::log(r);
      if (lg < 700.0) sup = std::max(sup, std::exp(lg));
    }
    // Anchor zone: both trajectories share the marching exponent; at r -> 0
    // the diffusion weight tends to 1 and the ratio to the coefficient gap.
    const RadialCharFn fa = stepper.wrap(ya);
    const RadialCharFn fb = stepper.wrap(yb);
    if (std::abs(anchor - cfg.alpha) < 1e-12)
      sup = std::max(sup, std::abs(fa.near_origin().c - fb.near_origin().c));
    out.lhs.push_back(sup);
    out.rhs.push_back(std::exp(out.lambda_alpha * t) * out.d0);
    std::snprintf(loc, sizeof loc, "t=%.6g", t);
    out.reports.push_back(check_inequality("stability-envelope", out.lhs.back(),
                                           out.rhs.back(),
                                           1e-4 * out.rhs.back() + 1e-12, loc));
  }
  return out;
}

NonexistenceResult nonexistence_probe(double p, double alpha, double delta_p,
                                      double t, const std::vector<double>& r_min_seq) {
  if (!(p > 0.0) || p > 2.0) throw std::invalid_argument("p must be in (0, 2]");
  if (!(alpha >= p)) throw std::invalid_argument("probe needs alpha >= p");
  if (!(delta_p > 0.0) || !(t > 0.0))
    throw std::invalid_argument("delta_p and t must be positive");
  if (r_min_seq.size() < 2)
    throw std::invalid_argument("need at least two r_min values");

  NonexistenceResult out;
  out.r_min = r_min_seq;
  out.expected_slope = alpha > p ? -(alpha - p) : 0.0;
  for (double r_min : r_min_seq) {
    if (!(r_min > 0.0)) throw std::invalid_argument("r_min must be positive");
    // (1 - e^{-delta t r^p}) / r^alpha is decreasing for alpha >= p, but scan
    // a log mesh anyway rather than lean on that.
    double sup = 0.0;
    const int n_scan = 2048;
    for (int i = 0; i < n_scan; ++i) {
      const double r = r_min * std::pow(1e6, i / (n_scan - 1.0));
      sup = std::max(sup, -std::expm1(-delta_p * t * std::pow(r, p)) /
                              std::pow(r, alpha));
    }
    out.sup_value.push_back(sup);
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(r_min_seq.size());
  for (std::size_t i = 0; i < r_min_seq.size(); ++i) {
    const double x = std::log(r_min_seq[i]), y = std::log(out.sup_value[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double smallest = *std::min_element(r_min_seq.begin(), r_min_seq.end());
  double sup_small = 0.0;
  for (std::size_t i = 0; i < r_min_seq.size(); ++i)
    if (r_min_seq[i] == smallest) sup_small = out.sup_value[i];
  out.saturates = std::abs(out.fitted_slope) < 0.01 &&
                  std::abs(sup_small - delta_p * t) < 0.02 * delta_p * t;
  return out;
}

}  // namespace bobylev
