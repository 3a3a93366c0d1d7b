#pragma once

#include <vector>

#include "optosqueeze/coupling.hpp"
#include "optosqueeze/params.hpp"

namespace optosqueeze::spectrum {

/// Noise transfer coefficients at one frequency. Position:
/// q~ = A1 x_in + B1 y_in + E1 q_in + F1 p_in; momentum likewise with index 2.
struct SpectralTransfer {
  double omega = 0.0;
  Complex a1, b1, e1, f1;
  Complex a2, b2, e2, f2;
  Complex u, v, d;  // u = gamma_m/2 - i w, v = kappa - i w
  Complex alpha0, alpha1, beta0, beta1, gamma0, gamma1;
};

/// Closed-form coefficients. Throws InstabilityError when |d| falls below
/// 1e-14 of its scale.
SpectralTransfer transfer_at(double omega, const EffectiveCoupling& coupling,
                             const PhysicalParams& params);

struct Spectrum {
  std::vector<double> omega;
  std::vector<double> sq_total, sq_rp, sq_th;
  std::vector<double> sp_total, sp_rp, sp_th;
};

/// Symmetrized spectra; rp is the part proportional to n_a + 1/2, th the part
/// proportional to n_m + 1/2.
Spectrum spectra(const std::vector<double>& omega_grid, const EffectiveCoupling& coupling,
                 const PhysicalParams& params);

struct QuadratureConfig {
  double width_factor = 50.0;  // W = width_factor * max(kappa, |g0|, gamma_m, |lambda|)
  double rel_tol = 1e-11;      // per-panel Gauss-Kronrod target
  double tail_tol = 1e-6;      // required tail bound relative to the result
  int max_doublings = 30;
};

struct VarianceIntegral {
  double var_q = 0.0;
  double var_p = 0.0;
  double tail_q = 0.0;       // fitted c/W contributions included above
  double tail_p = 0.0;
  double tail_bound = 0.0;   // relative uncertainty of the tails
  double quad_error = 0.0;   // relative Gauss-Kronrod error estimate
  double width = 0.0;        // final W
};

/// (1/2pi) integral of S over the real line: panels on (-W, W) plus a 1/w^2
/// tail beyond W. Throws ConvergenceError with the achieved tolerance.
VarianceIntegral integrate_variance(const EffectiveCoupling& coupling,
                                    const PhysicalParams& params,
                                    const QuadratureConfig& cfg = {});

}  // namespace optosqueeze::spectrum
