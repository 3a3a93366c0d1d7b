#include "optosqueeze/bogoliubov.hpp"

#include <cmath>

#include "optosqueeze/errors.hpp"

namespace optosqueeze::bogoliubov {

BogoliubovMode to_bogoliubov(const EffectiveCoupling& coupling, double n_m) {
  if (!coupling.squeezable()) {
    throw ValidationError("Bogoliubov transform undefined: |g1| >= |g0|");
  }
  if (!(n_m >= 0.0)) throw ValidationError("n_m: must be >= 0");
  BogoliubovMode m;
  m.r = coupling.squeeze_r();
  m.phi_r = coupling.phi_r();
  m.g_b = coupling.g_b();
  const double s2 = std::sinh(m.r) * std::sinh(m.r);
  const double c2 = std::cosh(m.r) * std::cosh(m.r);
  m.n_b_minus = (n_m + 1.0) * s2 + n_m * c2;
  m.n_b_plus = (n_m + 1.0) * c2 + n_m * s2;
  return m;
}

AdiabaticResult adiabatic_momentum_variance(const BogoliubovMode& mode,
                                            const PhysicalParams& params, double guard_ratio) {
  // The closed form stays meaningful for an undamped mirror, so gamma_m = 0
  // is accepted here even though the general model requires gamma_m > 0.
  PhysicalParams check = params;
  if (check.gamma_m == 0.0) check.gamma_m = 1.0;
  check.validate();
  const double lb = params.lambda_bar();
  if (lb >= 1.0) throw InstabilityError("adiabatic_momentum_variance: requires lambda_bar < 1");
  const double gb2 = std::norm(mode.g_b);
  if (!(gb2 > 0.0)) throw ValidationError("adiabatic_momentum_variance: g_B must be nonzero");
  const double one_l = 1.0 + lb;
  const double s2 = std::sinh(mode.r) * std::sinh(mode.r);
  AdiabaticResult out;
  out.var_pb = params.kappa * params.gamma_m * one_l * (2.0 * s2 + 1.0) *
                   (2.0 * params.n_m + 1.0) / (4.0 * gb2) +
               (2.0 * params.n_a + 1.0) / (2.0 * one_l);
  out.damping_rate = gb2 / (params.kappa * one_l);
  out.kappa_over_gb = params.kappa / std::sqrt(gb2);
  out.adiabatic = out.kappa_over_gb >= guard_ratio;
  return out;
}

double back_transform_variance(double var_pb, double r) {
  const double e = std::exp(-r);  // cosh r - sinh r, stable for large r
  return e * e * var_pb;
}

}  // namespace optosqueeze::bogoliubov
