#include "bobylev/charfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <gsl/gsl_eigen.h>
#include <gsl/gsl_matrix.h>
#include <gsl/gsl_vector.h>

#include "bobylev/quadrature.hpp"

namespace bobylev {

namespace {

// Least-squares anchor coefficient: phi ~ 1 - c r^a from the smallest nodes.
double fit_anchor_c(const RadialGrid& grid, const std::vector<double>& values,
                    double exponent) {
  double num = 0.0, den = 0.0;
  const std::size_t m = std::min<std::size_t>(3, grid.size());
  for (std::size_t i = 0; i < m; ++i) {
    const double ra = std::pow(grid.nodes()[i], exponent);
    num += (1.0 - values[i]) * ra;
    den += ra * ra;
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace

void RadialCharFn::build_slopes() {
  // Fritsch-Carlson monotone cubic slopes in log r.  The plan-based collision
  // sweep needs the slope array explicitly, which is why this is in-tree
  // rather than behind a spline library facade.
  const auto& x = grid_->log_nodes();
  const auto& y = values_;
  const std::size_t n = y.size();
  std::vector<double> h(n - 1), delta(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x[k + 1] - x[k];
    delta[k] = (y[k + 1] - y[k]) / h[k];
  }
  slopes_.assign(n, 0.0);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (delta[k - 1] * delta[k] <= 0.0) {
      slopes_[k] = 0.0;
    } else {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      slopes_[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
    }
  }
  // One-sided three-point endpoint slopes with the usual monotonicity clamps.
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (m * d0 <= 0.0) return 0.0;
    if (d0 * d1 <= 0.0 && std::abs(m) > 3.0 * std::abs(d0)) return 3.0 * d0;
    return m;
  };
  slopes_[0] = endpoint(h[0], h[1], delta[0], delta[1]);
  slopes_[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
}

RadialCharFn RadialCharFn::from_values(Grid grid, std::vector<double> values,
                                       double anchor_exponent) {
  if (!grid) throw std::invalid_argument("null grid");
  if (values.size() != grid->size())
    throw std::invalid_argument("values/grid size mismatch");
  if (!(anchor_exponent > 0.0))
    throw std::invalid_argument("anchor exponent must be positive");
  RadialCharFn f;
  f.grid_ = std::move(grid);
  f.values_ = std::move(values);
  f.anchor_.exponent = anchor_exponent;
  f.anchor_.c = fit_anchor_c(*f.grid_, f.values_, anchor_exponent);
  f.build_slopes();
  return f;
}

RadialCharFn RadialCharFn::levy_preset(Grid grid, double p, double t) {
  if (!grid) throw std::invalid_argument("null grid");
  if (!(p > 0.0) || p > 2.0) throw std::invalid_argument("levy preset needs 0 < p <= 2");
  if (!(t >= 0.0)) throw std::invalid_argument("levy preset needs t >= 0");
  RadialCharFn f;
  f.grid_ = std::move(grid);
  f.values_.reserve(f.grid_->size());
  for (double r : f.grid_->nodes()) f.values_.push_back(std::exp(-t * std::pow(r, p)));
  f.anchor_ = {t, p};
  f.analytic_ = [p, t](double r) { return std::exp(-t * std::pow(r, p)); };
  f.analytic_m1_ = [p, t](double r) { return std::expm1(-t * std::pow(r, p)); };
  f.build_slopes();
  return f;
}

RadialCharFn RadialCharFn::gaussian_preset(Grid grid, double c) {
  if (!grid) throw std::invalid_argument("null grid");
  if (!(c >= 0.0)) throw std::invalid_argument("gaussian preset needs c >= 0");
  RadialCharFn f;
  f.grid_ = std::move(grid);
  f.values_.reserve(f.grid_->size());
  for (double r : f.grid_->nodes()) f.values_.push_back(std::exp(-c * r * r));
  f.anchor_ = {c, 2.0};
  f.analytic_ = [c](double r) { return std::exp(-c * r * r); };
  f.analytic_m1_ = [c](double r) { return std::expm1(-c * r * r); };
  f.build_slopes();
  return f;
}

RadialCharFn RadialCharFn::mixture_preset(Grid grid,
                                          std::vector<MixtureComponent> comps) {
  if (!grid) throw std::invalid_argument("null grid");
  if (comps.empty()) throw std::invalid_argument("empty mixture");
  double wsum = 0.0, p_min = 2.0;
  for (const auto& c : comps) {
    if (!(c.weight > 0.0) || !(c.p > 0.0) || c.p > 2.0 || !(c.t >= 0.0))
      throw std::invalid_argument("bad mixture component");
    wsum += c.weight;
    p_min = std::min(p_min, c.p);
  }
  if (std::abs(wsum - 1.0) > 1e-12)
    throw std::invalid_argument("mixture weights must sum to 1");
  RadialCharFn f;
  f.grid_ = std::move(grid);
  auto value = [comps](double r) {
    double acc = 0.0;
    for (const auto& c : comps) acc += c.weight * std::exp(-c.t * std::pow(r, c.p));
    return acc;
  };
  auto value_m1 = [comps](double r) {
    double acc = 0.0;
    for (const auto& c : comps) acc += c.weight * std::expm1(-c.t * std::pow(r, c.p));
    return acc;
  };
  f.values_.reserve(f.grid_->size());
  for (double r : f.grid_->nodes()) f.values_.push_back(value(r));
  // Small-r modulus is governed by the flattest component exponent.
  double c_eff = 0.0;
  for (const auto& c : comps)
    if (c.p == p_min) c_eff += c.weight * c.t;
  f.anchor_ = {c_eff, p_min};
  f.analytic_ = value;
  f.analytic_m1_ = value_m1;
  f.build_slopes();
  return f;
}

double RadialCharFn::eval(double r) const {
  if (r < 0.0) throw std::domain_error("negative radius");
  if (r == 0.0) return 1.0;
  if (r > grid_->r_max() * (1.0 + 1e-12))
    throw std::domain_error("radius beyond grid range");
  if (analytic_) return analytic_(r);
  if (r < grid_->r_min()) return 1.0 - anchor_.c * std::pow(r, anchor_.exponent);
  const std::size_t k = grid_->locate(r);
  const auto& x = grid_->log_nodes();
  const double h = x[k + 1] - x[k];
  const double t = (std::log(r) - x[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * values_[k] +
         (t3 - 2.0 * t2 + t) * h * slopes_[k] +
         (-2.0 * t3 + 3.0 * t2) * values_[k + 1] + (t3 - t2) * h * slopes_[k + 1];
}

double RadialCharFn::eval_minus_one(double r) const {
  if (r < 0.0) throw std::domain_error("negative radius");
  if (r == 0.0) return 0.0;
  if (analytic_m1_) {
    if (r > grid_->r_max() * (1.0 + 1e-12))
      throw std::domain_error("radius beyond grid range");
    return analytic_m1_(r);
  }
  if (r < grid_->r_min()) return -anchor_.c * std::pow(r, anchor_.exponent);
  return eval(r) - 1.0;
}

namespace {

// Ratio limit of the anchor model c r^{a} / r^{alpha} as r -> 0.
double anchor_limit(double c, double a, double alpha) {
  if (c == 0.0) return 0.0;
  if (a > alpha) return 0.0;
  if (a == alpha) return std::abs(c);
  return std::numeric_limits<double>::infinity();
}

}  // namespace

double kalpha_norm(const RadialCharFn& phi, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  double sup = anchor_limit(phi.near_origin().c, phi.near_origin().exponent, alpha);
  for (double r : phi.grid().nodes()) {
    sup = std::max(sup, std::abs(phi.eval_minus_one(r)) / std::pow(r, alpha));
  }
  return sup;
}

double d_alpha(const RadialCharFn& phi, const RadialCharFn& psi, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (!phi.grid().same_nodes(psi.grid()))
    throw std::invalid_argument("d_alpha needs a shared grid");
  const auto& a1 = phi.near_origin();
  const auto& a2 = psi.near_origin();
  // Below the grid both functions follow their anchors; the difference is
  // governed by the smaller exponent (or the coefficient gap when they tie).
  double sup;
  if (a1.exponent == a2.exponent) {
    sup = anchor_limit(a1.c - a2.c, a1.exponent, alpha);
  } else if (a1.exponent < a2.exponent) {
    sup = anchor_limit(a1.c, a1.exponent, alpha);
  } else {
    sup = anchor_limit(a2.c, a2.exponent, alpha);
  }
  for (double r : phi.grid().nodes()) {
    sup = std::max(sup, std::abs(phi.eval_minus_one(r) - psi.eval_minus_one(r)) /
                            std::pow(r, alpha));
  }
  return sup;
}

PsdResult psd_check(const RadialCharFn& phi,
                    std::span<const std::array<double, 3>> points, double tol) {
  const std::size_t n = points.size();
  if (n == 0) throw std::invalid_argument("psd_check needs points");
  gsl_matrix* m = gsl_matrix_alloc(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = points[i][0] - points[j][0];
      const double dy = points[i][1] - points[j][1];
      const double dz = points[i][2] - points[j][2];
      gsl_matrix_set(m, i, j, phi.eval(std::sqrt(dx * dx + dy * dy + dz * dz)));
    }
  }
  gsl_vector* ev = gsl_vector_alloc(n);
  gsl_eigen_symm_workspace* ws = gsl_eigen_symm_alloc(n);
  gsl_eigen_symm(m, ev, ws);
  double min_ev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) min_ev = std::min(min_ev, gsl_vector_get(ev, i));
  gsl_eigen_symm_free(ws);
  gsl_vector_free(ev);
  gsl_matrix_free(m);
  return {min_ev, min_ev >= -tol};
}

std::vector<InequalityReport> check_pointwise_bounds(
    const RadialCharFn& phi, double alpha,
    std::span<const std::pair<double, double>> pairs, double tol) {
  const double k = kalpha_norm(phi, alpha);
  if (!std::isfinite(k))
    throw std::invalid_argument("phi is not in K^alpha for this alpha");
  std::vector<InequalityReport> out;
  out.reserve(3 * pairs.size());
  char loc[64];
  for (const auto& [r, s] : pairs) {
    std::snprintf(loc, sizeof loc, "r=%.6g s=%.6g", r, s);
    const double diff = std::abs(phi.eval(r) - phi.eval(s));
    const double gap_a = std::pow(std::abs(r - s), alpha);
    out.push_back(check_inequality("squared-increment", diff * diff,
                                   2.0 * k * gap_a, tol, loc));
    out.push_back(check_inequality(
        "increment", diff,
        k * (2.0 * std::sqrt(std::pow(r, alpha) * gap_a) + gap_a), tol, loc));
    const double mid = phi.eval(0.5 * (r + s));
    out.push_back(check_inequality(
        "midpoint-concavity", std::abs(phi.eval(r) + phi.eval(s) - 2.0 * mid),
        2.0 * k * std::pow(0.5 * std::abs(r - s), alpha), tol, loc));
  }
  return out;
}

InverseFourierResult radial_inverse_fourier(const RadialCharFn& phi,
                                            std::span<const double> v_nodes,
                                            double tail_tol) {
  const double r_max = phi.grid().r_max();
  // Power-law tail model |phi| ~ A r^{-beta} from the last nodes, used to
  // bound the truncated part of the Fourier integral.
  const auto& nodes = phi.grid().nodes();
  const std::size_t n = nodes.size();
  const std::size_t m = std::min<std::size_t>(8, n);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t used = 0;
  bool underflow_tail = false;
  for (std::size_t i = n - m; i < n; ++i) {
    const double av = std::abs(phi.eval(nodes[i]));
    if (av < 1e-300) {
      underflow_tail = true;  // decayed below representable: tail is nil
      continue;
    }
    const double lx = std::log(nodes[i]), ly = std::log(av);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++used;
  }
  double tail = 0.0;
  if (!underflow_tail) {
    const double det = used * sxx - sx * sx;
    const double slope = (used * sxy - sx * sy) / det;  // -beta
    const double beta = -slope;
    const double log_a = (sy - slope * sx) / used;
    if (beta <= 3.0) {
      tail = std::numeric_limits<double>::infinity();
    } else {
      // |int_{r_max}^inf A r^{-beta} r^2 dr| / (2 pi^2), sinc bounded by 1.
      tail = std::exp(log_a) * std::pow(r_max, 3.0 - beta) / (beta - 3.0) /
             (2.0 * M_PI * M_PI);
    }
  }
  if (!(tail <= tail_tol))
    throw std::runtime_error("fourier tail beyond grid exceeds tolerance");

  InverseFourierResult out;
  out.tail_bound = tail;
  out.v.assign(v_nodes.begin(), v_nodes.end());
  out.density.reserve(v_nodes.size());
  const double inv = 1.0 / (2.0 * M_PI * M_PI);
  for (double v : v_nodes) {
    if (v < 0.0) throw std::invalid_argument("negative v");
    double val;
    if (v * r_max < 1e-3) {
      val = inv * integrate([&](double r) { return phi.eval(r) * r * r * sinc(r * v); },
                            0.0, r_max, 64, 12);
    } else {
      val = inv / v *
            integrate_sin([&](double r) { return phi.eval(r) * r; }, 0.0, r_max, v,
                          256);
    }
    out.density.push_back(val);
  }
  return out;
}

}  // namespace bobylev
