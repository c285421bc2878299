#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace bobylev {

enum class KernelFamily { constant, maxwellian_singular, custom };

// Angular truncation of a collision kernel: b vanishes below lower_angle and
// is optionally capped pointwise at `cap` (the capped truncation b~_n).
struct Truncation {
  double lower_angle = 0.0;
  std::optional<double> cap;
  int n = 0;  // lower_angle == 1/n; kept for serialization
};

/**
 * Angular collision kernel b(cos theta) on theta in (0, pi/2].
 *
 * Families:
 *   constant              b = c
 *   maxwellian_singular   b(cos theta) sin theta = kappa * theta^{-3/2},
 *                         the canonical non-integrable model for Maxwellian
 *                         molecules (singularity exponent nu = 3/2)
 *   custom                caller-supplied theta |-> b(cos theta) with a
 *                         declared singularity exponent for b sin theta
 */
class KernelModel {
 public:
  static KernelModel constant(double c);
  static KernelModel maxwellian_singular(double kappa);
  static KernelModel custom(std::function<double(double)> b_of_theta,
                            double singularity_exponent);

  // b_n (zero below 1/n), optionally capped at n.  Requires an untruncated
  // model and n >= 1; throws std::invalid_argument otherwise.
  KernelModel truncated(int n, bool capped) const;

  // b(cos theta); throws std::domain_error outside (0, pi/2].
  double eval(double theta) const;

  // b(cos theta) * sin(theta), the weight every angular integral carries.
  // Evaluated directly from the family law where possible (for the singular
  // family this is kappa * theta^{-3/2} exactly, no sin cancellation).
  double eval_weighted(double theta) const;

  // nu with b(cos theta) sin theta ~ theta^{-nu} near 0 (constant family: -1).
  double singularity_exponent() const;

  // Finite ||b||_1?  True for truncated models and for nu < 1.
  bool cutoff() const;

  const std::optional<Truncation>& truncation() const { return trunc_; }
  KernelFamily family() const { return family_; }
  double strength() const { return strength_; }  // c or kappa

  // Interior points of (lower, pi/2) where the integrand is not smooth
  // (currently: the angle where a cap starts binding).  Quadrature panels
  // are split there.
  std::vector<double> breakpoints() const;

  // Effective lower integration limit (0 when untruncated).
  double lower_angle() const;

 private:
  KernelModel() = default;
  double raw_weighted(double theta) const;  // pre-truncation b*sin

  KernelFamily family_ = KernelFamily::constant;
  double strength_ = 1.0;
  double nu_ = -1.0;
  std::function<double(double)> custom_;
  std::optional<Truncation> trunc_;
};

struct MomentResult {
  double value = 0.0;
  bool diverged = false;
  bool converged = false;
};

// 2*pi int_0^{pi/2} b sin(theta) d(theta)
MomentResult l1_norm(const KernelModel& model);
// 2*pi int b sin(theta) sin^alpha(theta/2) d(theta); finite for the singular
// family iff alpha > 1/2 (the weak-integrability moment).
MomentResult mu_moment(const KernelModel& model, double alpha);
// 2*pi int b sin(theta) [cos^alpha(theta/2) + sin^alpha(theta/2)] d(theta)
MomentResult gamma_moment(const KernelModel& model, double alpha);
// Same bracket minus 1: the stability exponent.  Identically zero at
// alpha == 2, and equal to gamma_alpha - ||b||_1 for cutoff models.
MomentResult lambda_moment(const KernelModel& model, double alpha);

// Schema: {"family": "constant"|"maxwellian_singular", "kappa_or_c": x,
//          "singularity_exponent": nu (optional, informational),
//          "truncation": {"n": int, "cap": bool} (optional)}
KernelModel kernel_from_json(const nlohmann::json& j);
nlohmann::json kernel_to_json(const KernelModel& model);

}  // namespace bobylev
