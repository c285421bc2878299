#include "bobylev/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

namespace bobylev {

namespace {

struct GlRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GlRule make_gl(int order) {
  GlRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_n(x) = 0.
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return rule;
}

const GlRule& gl_rule(int order) {
  if (order < 1 || order > 64) throw std::invalid_argument("gl order out of range");
  static std::map<int, GlRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_gl(order)).first;
  return it->second;
}

struct GslHandlerOff {
  GslHandlerOff() { gsl_set_error_handler_off(); }
};
const GslHandlerOff gsl_handler_off{};

double gsl_trampoline(double x, void* params) {
  return (*static_cast<const Integrand*>(params))(x);
}

}  // namespace

const std::vector<double>& gl_nodes(int order) { return gl_rule(order).nodes; }
const std::vector<double>& gl_weights(int order) { return gl_rule(order).weights; }

double integrate(const Integrand& f, double a, double b, int panels, int order) {
  if (panels < 1) throw std::invalid_argument("panels < 1");
  const auto& x = gl_nodes(order);
  const auto& w = gl_weights(order);
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double c = a + (k + 0.5) * h;
    double acc = 0.0;
    for (int j = 0; j < order; ++j) acc += w[j] * f(c + 0.5 * h * x[j]);
    total += acc;
  }
  return 0.5 * h * total;
}

double integrate_graded(const Integrand& f, double a, double b, int grading,
                        int panels, int order) {
  if (grading < 1) throw std::invalid_argument("grading < 1");
  if (grading == 1) return integrate(f, a, b, panels, order);
  const double len = b - a;
  auto g = [&](double s) {
    const double sm1 = std::pow(s, grading - 1);
    return f(a + len * sm1 * s) * len * grading * sm1;
  };
  return integrate(g, 0.0, 1.0, panels, order);
}

Refinement refine_until(const std::function<double(int)>& estimate, int panels0,
                        double rel_tol, double abs_tol, int max_doublings) {
  Refinement out;
  int panels = panels0;
  double prev = estimate(panels);
  out.value = prev;
  int growth_streak = 0;
  for (int k = 1; k <= max_doublings; ++k) {
    panels *= 2;
    const double cur = estimate(panels);
    out.doublings = k;
    out.last_change = std::abs(cur - prev);
    out.value = cur;
    if (out.last_change <= std::max(abs_tol, rel_tol * std::abs(cur))) {
      out.converged = true;
      return out;
    }
    if (std::abs(cur) >= 1.5 * std::abs(prev) && std::abs(cur) > 10.0 * abs_tol) {
      ++growth_streak;
      if (growth_streak >= 3) {
        out.diverged = true;
        return out;
      }
    } else {
      growth_streak = 0;
    }
    prev = cur;
  }
  return out;
}

namespace {

// Moments of the cubic basis against the oscillation over a symmetric panel
// [-d, d], z = v*d:
//   C0 = int cos(v s) ds,  C2 = int s^2 cos(v s) ds,
//   S1 = int s  sin(v s) ds,  S3 = int s^3 sin(v s) ds.
// The closed forms cancel catastrophically as z -> 0, so small z switches to
// the (rapidly convergent) power series.  The pi/4 phase cap keeps |z| <= pi/8
// in normal use, which lands in the series branch.
struct PanelMoments {
  double c0, c2, s1, s3;
};

PanelMoments filon_moments(double v, double d) {
  PanelMoments m;
  const double z = v * d;
  if (std::abs(z) < 0.75) {
    const double z2 = z * z;
    double c0 = 0.0, c2 = 0.0, s1 = 0.0, s3 = 0.0;
    double even = 1.0;     // (-1)^k z^{2k} / (2k)!
    double odd = z;        // (-1)^k z^{2k+1} / (2k+1)!
    for (int k = 0; k < 12; ++k) {
      c0 += even / (2.0 * k + 1.0);
      c2 += even / (2.0 * k + 3.0);
      s1 += odd / (2.0 * k + 3.0);
      s3 += odd / (2.0 * k + 5.0);
      even *= -z2 / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
      odd *= -z2 / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    }
    m.c0 = 2.0 * d * c0;
    m.c2 = 2.0 * d * d * d * c2;
    m.s1 = 2.0 * d * d * s1;
    m.s3 = 2.0 * d * d * d * d * s3;
  } else {
    const double sz = std::sin(z), cz = std::cos(z);
    m.c0 = 2.0 * sz / v;
    m.c2 = 2.0 * (d * d * sz / v + 2.0 * d * cz / (v * v) - 2.0 * sz / (v * v * v));
    m.s1 = 2.0 * (sz / (v * v) - d * cz / v);
    m.s3 = 2.0 * (-d * d * d * cz / v + 3.0 * d * d * sz / (v * v) +
                  6.0 * d * cz / (v * v * v) - 6.0 * sz / (v * v * v * v));
  }
  return m;
}

double filon_integrate(const Integrand& h, double a, double b, double v,
                       int min_panels, bool want_sin) {
  if (b <= a) return 0.0;
  const double len = b - a;
  int panels = std::max(1, min_panels);
  if (v != 0.0) {
    const double cap = M_PI / (4.0 * std::abs(v));
    panels = std::max<int>(panels, static_cast<int>(std::ceil(len / cap)));
  }
  const double w = len / panels;
  const double d = 0.5 * w;
  const PanelMoments m = filon_moments(v, d);
  double total = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double c = a + (k + 0.5) * w;
    const double h1 = h(c - d);
    const double h2 = h(c - d / 3.0);
    const double h3 = h(c + d / 3.0);
    const double h4 = h(c + d);
    // Cubic through the four samples, coefficients about the panel center.
    const double a0 = (9.0 * (h2 + h3) - (h1 + h4)) / 16.0;
    const double a1 = (27.0 * (h3 - h2) - (h4 - h1)) / (16.0 * d);
    const double a2 = 9.0 * ((h1 + h4) - (h2 + h3)) / (16.0 * d * d);
    const double a3 = 9.0 * ((h4 - h1) - 3.0 * (h3 - h2)) / (16.0 * d * d * d);
    const double even = a0 * m.c0 + a2 * m.c2;
    const double odd = a1 * m.s1 + a3 * m.s3;
    const double svc = std::sin(v * c), cvc = std::cos(v * c);
    total += want_sin ? (svc * even + cvc * odd) : (cvc * even - svc * odd);
  }
  return total;
}

}  // namespace

double integrate_sin(const Integrand& h, double a, double b, double v,
                     int min_panels) {
  return filon_integrate(h, a, b, v, min_panels, true);
}

double integrate_cos(const Integrand& h, double a, double b, double v,
                     int min_panels) {
  return filon_integrate(h, a, b, v, min_panels, false);
}

double integrate_adaptive(const Integrand& f, double a, double b, double epsabs,
                          double epsrel) {
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
  gsl_function gf;
  gf.function = &gsl_trampoline;
  gf.params = const_cast<Integrand*>(&f);
  double result = 0.0, abserr = 0.0;
  int status = gsl_integration_qag(&gf, a, b, epsabs, epsrel, 4096,
                                   GSL_INTEG_GAUSS61, ws, &result, &abserr);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && status != GSL_EROUND) {
    // Retry with looser tolerance before giving up; QAG reports EMAXITER on
    // near-singular integrands that still carry 10+ correct digits.
    if (status != GSL_EMAXITER && status != GSL_ESING)
      throw std::runtime_error("gsl qag failed: " +
                               std::string(gsl_strerror(status)));
  }
  return result;
}

double integrate_to_infinity(const Integrand& f, double a, double epsabs,
                             double epsrel) {
  gsl_integration_workspace* ws = gsl_integration_workspace_alloc(4096);
  gsl_function gf;
  gf.function = &gsl_trampoline;
  gf.params = const_cast<Integrand*>(&f);
  double result = 0.0, abserr = 0.0;
  int status = gsl_integration_qagiu(&gf, a, epsabs, epsrel, 4096, ws, &result,
                                     &abserr);
  gsl_integration_workspace_free(ws);
  if (status != GSL_SUCCESS && status != GSL_EROUND && status != GSL_EMAXITER &&
      status != GSL_ESING) {
    throw std::runtime_error("gsl qagiu failed: " +
                             std::string(gsl_strerror(status)));
  }
  return result;
}

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
  }
  return std::sin(x) / x;
}

}  // namespace bobylev
