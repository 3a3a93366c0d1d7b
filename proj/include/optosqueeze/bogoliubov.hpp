#pragma once

#include "optosqueeze/coupling.hpp"
#include "optosqueeze/params.hpp"

namespace optosqueeze::bogoliubov {

/// dB = db~ cosh r + e^{i phi_r} db~^dagger sinh r with tanh r = |g1|/|g0|.
struct BogoliubovMode {
  double r = 0.0;
  double phi_r = 0.0;
  Complex g_b{};
  double n_b_minus = 0.0;  // (n_m+1) sinh^2 r + n_m cosh^2 r
  double n_b_plus = 0.0;   // (n_m+1) cosh^2 r + n_m sinh^2 r
};

/// Throws ValidationError when |g1| >= |g0|.
BogoliubovMode to_bogoliubov(const EffectiveCoupling& coupling, double n_m);

struct AdiabaticResult {
  double var_pb = 0.0;
  double damping_rate = 0.0;  // |g_B|^2 / (kappa (1 + Lbar))
  double kappa_over_gb = 0.0;
  bool adiabatic = true;      // kappa >= guard_ratio |g_B|
};

/// Cavity adiabatically eliminated:
/// kappa gamma_m (1+Lbar)(2 sinh^2 r + 1)(2n_m+1)/(4|g_B|^2) + (2n_a+1)/(2(1+Lbar)).
/// The gamma_m term of the cavity-eliminated equation is dropped, as in the
/// weak-damping derivation. gamma_m = 0 is accepted. Throws InstabilityError
/// for Lbar >= 1.
AdiabaticResult adiabatic_momentum_variance(const BogoliubovMode& mode,
                                            const PhysicalParams& params,
                                            double guard_ratio = 10.0);

/// var_p = (cosh r - sinh r)^2 var_pB (phase-matched, phi_r = pi).
double back_transform_variance(double var_pb, double r);

}  // namespace optosqueeze::bogoliubov
