#pragma once

#include <complex>
#include <vector>

#include "optosqueeze/coupling.hpp"
#include "optosqueeze/floquet.hpp"
#include "optosqueeze/params.hpp"

namespace optosqueeze::rwa {

using floquet::Mat4;

/// Constant rotating-frame drift over (q~, p~, x~, y~).
Mat4 tilde_matrix(const EffectiveCoupling& coupling, const PhysicalParams& params);
floquet::DriftMatrix build_tilde_drift(const EffectiveCoupling& coupling,
                                       const PhysicalParams& params);

/// Solves M V + V M^T = -D through the 16x16 Kronecker-sum system.
/// Throws InstabilityError listing eigenvalues when M is not Hurwitz and
/// ConvergenceError when the residual exceeds 1e-10 |D|.
floquet::CovarianceMatrix steady_lyapunov(const Mat4& m, const Mat4& d);

/// Steady rotating-frame covariance for a coupling (Lyapunov route).
floquet::CovarianceMatrix steady_covariance(const EffectiveCoupling& coupling,
                                            const PhysicalParams& params);

struct AnalyticVariances {
  double var_q = 0.0;
  double var_p = 0.0;
  double s_omega_minus = 0.0, s_omega_plus = 0.0;
  double s_lambda_minus = 0.0, s_lambda_plus = 0.0;
  double norm = 0.0;  // 2(1 - Lbar^2)(|g0|^2 - |g1|^2)
};

/// Negligible-damping closed form. The half-angle cosine is taken as
/// cos(theta - phi0 - phi1). Throws ValidationError for |g1| >= |g0| and
/// InstabilityError for Lbar >= 1.
AnalyticVariances analytic_variances(const EffectiveCoupling& coupling,
                                     const PhysicalParams& params);

/// Phase-matched momentum variance (1/2)(1 - rho)/(1 + rho)/(1 + Lbar).
double phase_matched_momentum_variance(double rho, double lambda_bar);

struct DampedVariance {
  double var_p = 0.0;
  bool valid = true;  // C~ >> 2(1 + Lbar), checked as C~ >= 20 (1 + Lbar)
};

/// Damping-corrected momentum variance:
/// (cosh r - sinh r)^2 / (2(1+Lbar)) + (2n_m+1)[(1+Lbar)/C~ + (gamma_m/kappa)/(4(1+Lbar))].
DampedVariance momentum_variance_damped(double cooperativity, double r, double lambda_bar,
                                        double n_m, double gamma_over_kappa);

enum class GainRegime { kBelowThreshold, kInteriorOptimum, kGainSaturated };

const char* regime_name(GainRegime r);

struct OptimalGain {
  double lambda_bar_opt = 0.0;  // clamped to [0, 1]
  double raw = 0.0;             // unclamped closed form
  GainRegime regime = GainRegime::kInteriorOptimum;
  double c_tilde_thr = 0.0;
  double c_tilde_ins = 0.0;
};

OptimalGain optimal_gain(double c_tilde, double eta);

struct StabilityResult {
  bool stable = false;
  double margin = 0.0;  // -max Re(lambda)
  std::vector<std::complex<double>> eigenvalues;
  bool gain_below_threshold = true;  // Lbar < 1, the necessary condition
};

StabilityResult stability_check(const Mat4& m);
StabilityResult stability_check(const EffectiveCoupling& coupling, const PhysicalParams& params);

}  // namespace optosqueeze::rwa
