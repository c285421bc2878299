#pragma once

#include <functional>
#include <vector>

namespace bobylev {

using Integrand = std::function<double(double)>;

/**
 * Gauss-Legendre nodes and weights on [-1, 1].
 * Computed once per order by Newton iteration on the Legendre polynomial and
 * cached; orders up to 64 are supported.
 */
const std::vector<double>& gl_nodes(int order);
const std::vector<double>& gl_weights(int order);

// Composite Gauss-Legendre with `panels` uniform panels on [a, b].
double integrate(const Integrand& f, double a, double b, int panels, int order);

/**
 * Integrate f over [a, b] with an integrable algebraic singularity at the
 * left endpoint.  The power substitution x = a + (b-a) s^m removes the
 * singularity analytically; uniform s-panels then correspond to the graded
 * mesh x_k = a + (b-a)(k/K)^m.  grading >= 1; grading == 1 is the plain rule.
 */
double integrate_graded(const Integrand& f, double a, double b, int grading,
                        int panels, int order);

struct Refinement {
  double value = 0.0;    // last estimate (best available even when diverged)
  bool converged = false;
  bool diverged = false;
  int doublings = 0;
  double last_change = 0.0;
};

/**
 * Self-convergence driver: evaluates `estimate` at panels0, 2*panels0, ...
 * until successive values agree to max(abs_tol, rel_tol*|I|).  An integral is
 * flagged divergent when three successive doublings each grow the magnitude
 * by a factor >= 1.5 (geometric growth; slow convergence never does this).
 * Growth is only counted once the magnitude exceeds the abs_tol noise floor.
 */
Refinement refine_until(const std::function<double(int)>& estimate, int panels0,
                        double rel_tol, double abs_tol, int max_doublings);

/**
 * Oscillatory quadrature for int_a^b h(r) sin(v r) dr (and the cos variant).
 * Filon-type: h is replaced per panel by the cubic through four equispaced
 * points and the cubic-times-oscillation moments are integrated exactly
 * (series evaluation of the moments when |v|*panel is small, closed forms
 * otherwise).  Panels are capped at length pi/(4|v|) so the phase advances
 * at most pi/4 per panel; min_panels adds a smoothness floor for h.
 */
double integrate_sin(const Integrand& h, double a, double b, double v,
                     int min_panels = 8);
double integrate_cos(const Integrand& h, double a, double b, double v,
                     int min_panels = 8);

// Adaptive wrappers around GSL QAG / QAGIU for smooth utility integrals.
double integrate_adaptive(const Integrand& f, double a, double b,
                          double epsabs = 1e-12, double epsrel = 1e-12);
double integrate_to_infinity(const Integrand& f, double a,
                             double epsabs = 1e-12, double epsrel = 1e-12);

// sin(x)/x with the series branch near zero.
double sinc(double x);

}  // namespace bobylev
