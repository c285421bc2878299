#pragma once

#include <vector>

namespace bobylev {

// Symmetric stable family: characteristic function e^{-|xi|^p t},
// 0 < p <= 2, t > 0.
struct LevyParams {
  double p = 1.0;
  double t = 1.0;
};

double w_p(double r, const LevyParams& params);            // e^{-r^p t}
double w_p_minus_one(double r, const LevyParams& params);  // expm1 form

/**
 * Radial density f_p(v, t) = (2 pi^2)^{-1} int_0^inf e^{-r^p t} r^2 sinc(rv) dr.
 * p in [1, 2]: Filon quadrature on [0, r_cut] with panels capped at pi/(4v).
 * p < 1: exact contour-rotated form (non-oscillatory, integrand damped by
 * e^{-vs - t s^p cos(p pi/2)}), needed for large v where the Filon panel
 * count would explode.
 */
double f_p_density(double v, const LevyParams& params);

// lim_{v->inf} |v|^{3+p} f_p(v,t) = p 2^{p-1} t pi^{-5/2} sin(p pi/2)
//                                   Gamma((3+p)/2) Gamma(p/2); zero at p = 2.
double tail_constant(const LevyParams& params);

// Coefficients c_k of the tail expansion f_p(v,t) ~ sum_k c_k v^{-3-kp};
// c_1 == tail_constant.
std::vector<double> density_tail_series(const LevyParams& params, int k_terms);

// Richardson fit of the tail constant anchored at v_anchor: samples
// g(v) = v^{3+p} f_p(v) at v_anchor/2 and v_anchor and removes the O(v^-p)
// correction.  The raw g(v_anchor) approaches the limit only like v^-p,
// which is far outside any small tolerance at moderate v for small p.
double tail_constant_fit(const LevyParams& params, double v_anchor = 50.0);

double wp_l1_norm(const LevyParams& params);         // 4 pi int e^{-r^p t} r^2 dr
double wp_l1_norm_closed(const LevyParams& params);  // (4 pi / p) Gamma(3/p) t^{-3/p}

struct FractionalMomentResult {
  double value = 0.0;           // 4 pi int_0^R v^{2+alpha} f_p dv
  double tail_corrected = 0.0;  // plus the k<=3 tail-series remainder (alpha < p)
  bool divergent_regime = false;  // alpha >= p
  // For alpha >= p: fitted d V / d G with G = R^{alpha-p}/(alpha-p) (or log R
  // at alpha == p); the tail series predicts 4 pi * tail_constant.
  double growth_slope = 0.0;
};

FractionalMomentResult fractional_moment(double alpha, const LevyParams& params,
                                         double R);

}  // namespace bobylev
