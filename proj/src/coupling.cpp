#include "optosqueeze/coupling.hpp"

#include <cmath>
#include <limits>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

double EffectiveCoupling::ratio() const {
  const double a0 = std::abs(g0);
  const double a1 = std::abs(g_plus1);
  if (a0 == 0.0) return a1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return a1 / a0;
}

double EffectiveCoupling::squeeze_r() const {
  const double rho = ratio();
  if (rho >= 1.0) return std::numeric_limits<double>::infinity();
  return std::atanh(rho);
}

Complex EffectiveCoupling::g_b() const {
  if (!squeezable()) {
    throw ValidationError("degenerate coupling: |g1| >= |g0|, Bogoliubov coupling undefined");
  }
  const double mag = std::sqrt(std::norm(g0) - std::norm(g_plus1));
  return std::polar(mag, phi0());
}

EffectiveCoupling EffectiveCoupling::phase_matched(double g0_abs, double ratio,
                                                   double ratio_m1, double theta) {
  if (!(g0_abs >= 0.0) || !(ratio >= 0.0) || !(ratio_m1 >= 0.0)) {
    throw ValidationError("coupling magnitudes must be >= 0");
  }
  EffectiveCoupling c;
  c.g0 = g0_abs;
  c.g_plus1 = -ratio * g0_abs;
  c.g_minus1 = -ratio_m1 * ratio * g0_abs;
  c.theta = theta;
  return c;
}

EffectiveCoupling EffectiveCoupling::from_cooperativity(double cooperativity, double kappa,
                                                        double gamma_m, double ratio,
                                                        double ratio_m1, double theta) {
  if (!(cooperativity >= 0.0)) throw ValidationError("C: must be >= 0");
  if (!(kappa > 0.0)) throw ValidationError("kappa: must be > 0");
  if (!(gamma_m > 0.0)) throw ValidationError("gamma_m: must be > 0");
  return phase_matched(std::sqrt(cooperativity * kappa * gamma_m / 4.0), ratio, ratio_m1,
                       theta);
}

}  // namespace optosqueeze
