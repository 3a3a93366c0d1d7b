#include "optosqueeze/derived.hpp"

#include <cmath>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

double eta_factor(double r, double n_m, double gamma_over_kappa) {
  const double e = std::exp(-r);  // cosh r - sinh r
  return e * e / (n_m + 0.5) + gamma_over_kappa;
}

double c_tilde(double cooperativity, double r) {
  const double t = std::tanh(r);
  return cooperativity * (1.0 - t * t);
}

double c_tilde_threshold(double eta) { return 4.0 * (1.0 / eta - 1.0); }

double c_tilde_instability(double eta) { return 8.0 * (2.0 / eta - 1.0); }

double lambda_bar_opt_formula(double ct, double eta) {
  return 0.5 * eta * (1.0 + std::sqrt(1.0 + ct / eta)) - 1.0;
}

DerivedQuantities derived(const PhysicalParams& params, const EffectiveCoupling& coupling) {
  params.validate();
  if (!coupling.squeezable()) {
    throw ValidationError("degenerate coupling: |g1| >= |g0|, squeeze parameter r is infinite");
  }
  const double r = coupling.squeeze_r();
  DerivedQuantities d;
  d.lambda_bar = params.lambda_bar();
  d.cooperativity = 4.0 * std::norm(coupling.g0) / (params.kappa * params.gamma_m);
  d.c_tilde = c_tilde(d.cooperativity, r);
  d.eta = eta_factor(r, params.n_m, params.gamma_m / params.kappa);
  d.lambda_bar_opt = lambda_bar_opt_formula(d.c_tilde, d.eta);
  d.lambda_bar_opt_clamped = d.lambda_bar_opt >= 1.0;
  d.c_tilde_thr = c_tilde_threshold(d.eta);
  d.c_tilde_ins = c_tilde_instability(d.eta);
  const double t = std::tanh(r);
  d.c_thr = d.c_tilde_thr / (1.0 - t * t);
  d.c_ins = d.c_tilde_ins / (1.0 - t * t);
  return d;
}

}  // namespace optosqueeze
