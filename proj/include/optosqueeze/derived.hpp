#pragma once

#include "optosqueeze/coupling.hpp"
#include "optosqueeze/params.hpp"

namespace optosqueeze {

struct DerivedQuantities {
  double lambda_bar = 0.0;
  double cooperativity = 0.0;    // C = 4|g0|^2/(kappa gamma_m)
  double c_tilde = 0.0;          // C (1 - tanh^2 r)
  double eta = 0.0;
  double lambda_bar_opt = 0.0;   // raw closed-form value, not clamped
  bool lambda_bar_opt_clamped = false;  // raw value >= 1 (gain saturated)
  double c_tilde_thr = 0.0;
  double c_tilde_ins = 0.0;
  double c_thr = 0.0;            // thresholds expressed in C
  double c_ins = 0.0;
};

/// eta = (cosh r - sinh r)^2 / (n_m + 1/2) + gamma_m/kappa.
double eta_factor(double r, double n_m, double gamma_over_kappa);
/// C~ = C (1 - tanh^2 r).
double c_tilde(double cooperativity, double r);
double c_tilde_threshold(double eta);
double c_tilde_instability(double eta);
/// (eta/2)(1 + sqrt(1 + C~/eta)) - 1, unclamped.
double lambda_bar_opt_formula(double c_tilde, double eta);

/// Requires |g0| > |g1|; throws ValidationError otherwise.
DerivedQuantities derived(const PhysicalParams& params, const EffectiveCoupling& coupling);

}  // namespace optosqueeze
