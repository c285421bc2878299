#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "bobylev/charfun.hpp"
#include "bobylev/collision.hpp"
#include "bobylev/kernels.hpp"
#include "bobylev/report.hpp"

namespace bobylev {

enum class Scheme { exp_euler, exp_heun };

// Which integral form one step discretizes: `direct` uses the plain Duhamel
// form with factor e^{-delta r^p dt} acting on B(phi); `gain` (cutoff only)
// pulls the loss term into the factor, e^{-(gamma_2 + delta r^p) dt} acting
// on G(phi), which keeps the growth estimate contractive for stiff nodes.
// `automatic` picks gain for cutoff kernels.
enum class StepForm { automatic, direct, gain };

struct SolverConfig {
  double p = 1.0;        // diffusion exponent, 0 < p <= 2
  double delta_p = 1.0;  // diffusion strength, >= 0
  double alpha = 1.0;    // Hoelder/stability exponent, 0 < alpha <= min(p, 2)
  KernelModel kernel = KernelModel::constant(1.0);
  std::shared_ptr<const RadialGrid> grid;
  Scheme scheme = Scheme::exp_heun;
  StepForm form = StepForm::automatic;
  double dt = 1e-3;
  double t_final = 1.0;
  bool adaptive = true;
  double dt_max = 0.0;      // 0: derived (output spacing; ln2/(4 gamma_2) if cutoff)
  double growth_tol = 1e-6;  // rejection threshold on e^{delta r^p t}|phi| - 1
  QuadratureSpec quad;
  int plan_panels = 0;  // 0: calibrated from an adaptive evaluation at t = 0
  std::vector<double> output_times;  // defaults to {t_final}
};

struct StepDiagnostics {
  double t = 0.0;
  double dt = 0.0;
  double growth_margin = 0.0;  // max_r e^{delta r^p t}|phi| - 1
  bool accepted = true;
};

struct EvolutionResult {
  std::vector<double> times;          // realized output times
  std::vector<RadialCharFn> states;   // one per output time (phi0 first)
  std::vector<StepDiagnostics> steps;
  int accepted_steps = 0;
  int rejected_steps = 0;
  int plan_panels = 0;
};

// March phi0 to t_final with the exponential integrator; throws
// std::invalid_argument on inconsistent configs (alpha > p, gain form on a
// non-cutoff kernel, mu_alpha divergent, ...).
EvolutionResult evolve(const SolverConfig& config, const RadialCharFn& phi0);

struct TrajectoryChecks {
  std::vector<InequalityReport> growth;        // e^{delta r^p t}|phi| <= 1 + tol
  std::vector<InequalityReport> envelope;      // ||phi(t)-1||_a vs e^{5 mu t}(...)
  std::vector<InequalityReport> time_modulus;  // |phi(t)-phi(s)| bound, random pairs
  std::vector<PsdResult> psd_spots;            // Bochner spot checks
  std::vector<InequalityReport> psd;           // same, as reports
};

// Post-hoc diagnostics along an accepted trajectory.
TrajectoryChecks run_diagnostics(const SolverConfig& config,
                                 const EvolutionResult& run,
                                 int n_random_pairs, std::uint64_t seed);

struct PicardResult {
  std::vector<double> times;
  std::vector<RadialCharFn> trajectory;      // fixed point at the time nodes
  std::vector<double> sweep_distances;       // rho_T(phi^{k+1}, phi^k)
  std::vector<double> ratios;                // successive distance ratios
  double contraction_factor = 0.0;           // 2 (1 - e^{-gamma_2 T0})
  int sweeps = 0;
  bool converged = false;
};

// Picard iteration for the mild (gain-form) equation on [0, T0];
// requires a cutoff kernel and T0 < ln 2 / gamma_2.
PicardResult picard_solve(const SolverConfig& config, const RadialCharFn& phi0,
                          double T0, int time_steps, double fixed_point_tol = 1e-11,
                          int max_sweeps = 60);

struct ContinuationResult {
  std::vector<int> n_values;
  std::vector<EvolutionResult> members;      // one run per truncation level
  std::vector<double> trajectory_gaps;       // sup diff between successive members
  std::vector<double> exponent_estimates;    // gamma_{n,alpha} - ||b_n||_1
  double lambda_alpha = 0.0;                 // non-cutoff stability exponent
  EvolutionResult limit;                     // Richardson-extrapolated trajectory
  double extrapolation_ratio = 0.0;
};

// Solve with b_n for each n, report the Cauchy table and the extrapolated
// non-cutoff trajectory.  config.kernel must be non-cutoff (untruncated).
ContinuationResult cutoff_continuation(const SolverConfig& config,
                                       const RadialCharFn& phi0,
                                       const std::vector<int>& n_values,
                                       bool capped = false);

struct StabilityResult {
  std::vector<double> times;
  std::vector<double> lhs;  // sup_r e^{delta r^p t} |phi-psi| / r^alpha
  std::vector<double> rhs;  // e^{lambda_alpha t} d_alpha(phi0, psi0)
  double lambda_alpha = 0.0;
  double d0 = 0.0;
  std::vector<InequalityReport> reports;
};

// Evolve both data with identical discretization and compare the weighted
// distance against the exponential stability envelope.
StabilityResult stability_experiment(const SolverConfig& config,
                                     const RadialCharFn& phi0,
                                     const RadialCharFn& psi0);

struct NonexistenceResult {
  std::vector<double> r_min;
  std::vector<double> sup_value;  // sup_{r >= r_min} (1 - e^{-delta t r^p}) / r^alpha
  double fitted_slope = 0.0;      // d log sup / d log r_min
  double expected_slope = 0.0;    // -(alpha - p) for alpha > p
  bool saturates = false;         // alpha == p: sup -> delta * t
};

// The K^alpha norm of the pure-diffusion factor blows up like r_min^{p-alpha}
// when alpha > p: the quantitative footprint of ill-posedness above p.
NonexistenceResult nonexistence_probe(double p, double alpha, double delta_p,
                                      double t, const std::vector<double>& r_min_seq);

}  // namespace bobylev
