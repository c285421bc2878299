#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "bobylev/grid.hpp"
#include "bobylev/report.hpp"

namespace bobylev {

// phi(r) ~ 1 - c r^exponent below the grid: the analytic anchor that carries
// the Hoelder modulus down to r = 0, where no node can.
struct NearOriginModel {
  double c = 0.0;
  double exponent = 1.0;
};

/**
 * Radial characteristic function phi(|xi|) sampled on a RadialGrid.
 *
 * Analytic presets (Levy exponentials, Gaussians, mixtures) carry their
 * closed form and evaluate exactly; grid-backed data (solver output) uses
 * monotone cubic Hermite interpolation in log r plus the near-origin anchor.
 * Values are immutable after construction; the interpolant slopes are built
 * once.  phi(0) = 1 always.
 */
class RadialCharFn {
 public:
  using Grid = std::shared_ptr<const RadialGrid>;

  // Grid-backed data; the anchor coefficient c is least-squares fitted from
  // the three smallest nodes with the given exponent.
  static RadialCharFn from_values(Grid grid, std::vector<double> values,
                                  double anchor_exponent);

  // e^{-r^p t}
  static RadialCharFn levy_preset(Grid grid, double p, double t);
  // e^{-c r^2}
  static RadialCharFn gaussian_preset(Grid grid, double c);
  // sum_i w_i e^{-r^{p_i} t_i} with convex weights
  struct MixtureComponent {
    double p, t, weight;
  };
  static RadialCharFn mixture_preset(Grid grid,
                                     std::vector<MixtureComponent> comps);

  double eval(double r) const;            // throws std::domain_error past r_max
  double eval_minus_one(double r) const;  // phi(r) - 1, no cancellation near 0
  double operator()(double r) const { return eval(r); }

  const RadialGrid& grid() const { return *grid_; }
  const Grid& grid_ptr() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& slopes() const { return slopes_; }  // d phi / d ln r
  const NearOriginModel& near_origin() const { return anchor_; }
  bool analytic() const { return static_cast<bool>(analytic_); }

 private:
  RadialCharFn() = default;
  void build_slopes();

  Grid grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
  NearOriginModel anchor_;
  std::function<double(double)> analytic_;     // phi(r)
  std::function<double(double)> analytic_m1_;  // phi(r) - 1 via expm1
};

// sup over the grid of |phi - 1| / r^alpha, combined with the r -> 0 limit of
// the anchor model (0, c, or +infinity depending on exponent vs alpha).  The
// max of the two is returned; +infinity signals that phi leaves K^alpha.
double kalpha_norm(const RadialCharFn& phi, double alpha);

// sup |phi - psi| / r^alpha over the shared grid plus the anchor limit.
// Throws std::invalid_argument when the grids differ.
double d_alpha(const RadialCharFn& phi, const RadialCharFn& psi, double alpha);

struct PsdResult {
  double min_eigenvalue = 0.0;
  bool pass = false;
};

// Bochner sanity: the matrix [phi(|x_i - x_j|)] must be PSD for a
// characteristic function.  Distances must stay within r_max.
PsdResult psd_check(const RadialCharFn& phi,
                    std::span<const std::array<double, 3>> points, double tol);

/**
 * Pointwise continuity estimates for characteristic functions in K^alpha,
 * sampled along collinear arguments (|xi| = r, |eta| = s):
 *   (i)   |phi(r) - phi(s)|^2            <= 2 ||phi-1||_alpha |r-s|^alpha
 *   (ii)  |phi(r) - phi(s)|              <= ||phi-1||_alpha (2 sqrt(r^alpha |r-s|^alpha) + |r-s|^alpha)
 *   (iii) |phi(r) + phi(s) - 2 phi((r+s)/2)| <= 2 ||phi-1||_alpha |(r-s)/2|^alpha
 */
std::vector<InequalityReport> check_pointwise_bounds(
    const RadialCharFn& phi, double alpha,
    std::span<const std::pair<double, double>> pairs, double tol);

struct InverseFourierResult {
  std::vector<double> v;
  std::vector<double> density;
  double tail_bound = 0.0;  // estimated contribution beyond r_max
};

/**
 * f(v) = (2 pi^2)^{-1} int_0^{r_max} phi(r) r^2 sinc(r v) dr via Filon
 * quadrature, plus a power-law tail estimate fitted from the last nodes.
 * Throws std::runtime_error when the tail bound exceeds tail_tol (e.g. for
 * phi that does not decay, like phi == 1).
 */
InverseFourierResult radial_inverse_fourier(const RadialCharFn& phi,
                                            std::span<const double> v_nodes,
                                            double tail_tol = 1e-8);

}  // namespace bobylev
