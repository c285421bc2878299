#pragma once

#include <array>
#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "bobylev/charfun.hpp"
#include "bobylev/kernels.hpp"
#include "bobylev/report.hpp"

namespace bobylev {

/**
 * Quadrature policy for the angular collision integral
 *   B(phi)(r) = 2 pi int_0^{pi/2} b sin(theta) [phi(r c) phi(r s) - phi(r)] d(theta),
 * c = cos(theta/2), s = sin(theta/2).  The theta mesh is graded toward 0 by
 * the power substitution theta = (pi/2) u^m; `grading` is a floor for m, the
 * effective m is raised automatically from the kernel singularity and the
 * small-r modulus of phi so the transformed integrand is smooth at u = 0.
 *
 * Cancellation: `split` evaluates the bracket as
 *   [phi(r s) - 1] phi(r c) + [phi(r c) - phi(r)],
 * each term O(theta^min(a,2)) individually, so nothing is lost against the
 * theta^{-3/2} weight; `direct` evaluates it literally and is kept for
 * demonstrating why it loses digits.
 */
struct QuadratureSpec {
  int panels = 16;
  int order = 8;
  int grading = 4;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_doublings = 7;
  enum class Cancellation { direct, split };
  Cancellation cancellation = Cancellation::split;
  int circle_points = 64;  // trapezoid points on S^1(xi) for the 3D path
};

struct CollideResult {
  double value = 0.0;
  bool diverged = false;
  bool converged = false;
};

// Isotropic Bobylev operator at radius r; r == 0 returns 0 exactly.
CollideResult bobylev_isotropic(const RadialCharFn& phi, const KernelModel& model,
                                double r, const QuadratureSpec& spec = {});

// Gain part 2 pi int b sin(theta) phi(r c) phi(r s) d(theta); r == 0 returns
// ||b||_1.  Throws std::invalid_argument for non-cutoff kernels.
CollideResult gain_isotropic(const RadialCharFn& phi, const KernelModel& model,
                             double r, const QuadratureSpec& spec = {});

using Vec3 = std::array<double, 3>;
using CharFn3 = std::function<std::complex<double>(const Vec3&)>;

// int_{S^1(xi)} [phi(xi+) phi(xi-) - phi(xi)] d(omega) at fixed theta, where
// xi+- are the Bobylev post-collision arguments and S^1(xi) is the unit
// circle orthogonal to xi (trapezoid rule: spectrally accurate, periodic).
std::complex<double> circle_integral(const CharFn3& phi, const Vec3& xi,
                                     double theta, int n_points);

struct GeneralCollideResult {
  std::complex<double> value;
  bool diverged = false;
  bool converged = false;
};

// Full 3D operator for (possibly anisotropic) phi with phi(0) = 1.
GeneralCollideResult bobylev_general(const CharFn3& phi, const KernelModel& model,
                                     const Vec3& xi, const QuadratureSpec& spec = {});

// |B(phi)(r)| <= 5 mu_alpha ||phi-1||_alpha r^alpha at each sample radius.
// Requires mu_alpha finite and phi in K^alpha; throws otherwise.
std::vector<InequalityReport> verify_operator_bound(const RadialCharFn& phi,
                                                    const KernelModel& model,
                                                    double alpha,
                                                    std::span<const double> r_samples,
                                                    const QuadratureSpec& spec = {},
                                                    double tol = 1e-9);

/**
 * Fixed-mesh fast path for solver sweeps: for one (grid, kernel, spec,
 * anchor exponent) the theta nodes, kernel weights, and the Hermite
 * interpolation locators of every evaluation point r_i cos(theta_q/2),
 * r_i sin(theta_q/2) are precomputed; applying the operator to new values is
 * then a flat gather-multiply per node, identical in exact arithmetic to the
 * split-mode integrand on the same mesh.
 */
class CollisionPlan {
 public:
  CollisionPlan(std::shared_ptr<const RadialGrid> grid, const KernelModel& model,
                const QuadratureSpec& spec, double anchor_exponent, int panels);

  // out[i] = B(phi)(r_i); phi must live on the plan's grid with the plan's
  // anchor exponent.
  void apply_bobylev(const RadialCharFn& phi, std::span<double> out) const;
  // out[i] = G(phi)(r_i) (gain part only; meaningful for cutoff kernels).
  void apply_gain(const RadialCharFn& phi, std::span<double> out) const;

  int theta_points() const { return static_cast<int>(weight_.size()); }
  int panels() const { return panels_; }
  double anchor_exponent() const { return anchor_exponent_; }

 private:
  struct Locator {
    // k >= 0: Hermite weights against (y_k, y_{k+1}, d_k, d_{k+1});
    // k == -1: below the grid, phi - 1 = -c * pow_r (anchor zone).
    int k = -1;
    double w0 = 0, w1 = 0, w2 = 0, w3 = 0;
    double pow_r = 0;  // r^anchor_exponent for the anchor zone
  };
  Locator make_locator(double r) const;
  double eval(const Locator& loc, std::span<const double> y,
              std::span<const double> d, double c_anchor) const;

  std::shared_ptr<const RadialGrid> grid_;
  double anchor_exponent_;
  int panels_;
  std::vector<double> weight_;  // 2 pi * b sin(theta_q) * quadrature weight
  std::vector<Locator> loc_cos_, loc_sin_;  // node-major: [i * Q + q]
};

}  // namespace bobylev
