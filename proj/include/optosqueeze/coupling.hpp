#pragma once

#include "optosqueeze/params.hpp"

namespace optosqueeze {

/// Sideband couplings of G(t) = g0 + g1 e^{-i Omega t} + g_{-1} e^{i Omega t}.
struct EffectiveCoupling {
  Complex g_minus1{};
  Complex g0{};
  Complex g_plus1{};
  double theta = kPi;  // OPA phase the relative phases refer to

  double phi_minus1() const { return std::arg(g_minus1); }
  double phi0() const { return std::arg(g0); }
  double phi1() const { return std::arg(g_plus1); }
  double phi_r() const { return phi1() - phi0(); }
  double phi_r0() const { return theta - 2.0 * phi0(); }
  double phi_r1() const { return theta - 2.0 * phi1(); }

  /// |g1| / |g0|; infinite when g0 vanishes and g1 does not.
  double ratio() const;
  /// artanh(|g1|/|g0|), +inf when |g1| >= |g0| (mode not squeezed).
  double squeeze_r() const;
  bool squeezable() const { return std::abs(g_plus1) < std::abs(g0); }

  Complex g_plus() const { return g0 + g_plus1; }
  Complex g_minus() const { return g0 - g_plus1; }
  /// sqrt(|g0|^2 - |g1|^2) e^{i phi0}; throws ValidationError when |g1| >= |g0|.
  Complex g_b() const;

  /// Momentum phase matching: g0 = |g0| real, g1 = -ratio |g0|,
  /// g_{-1} = -ratio_m1 ratio |g0|. With theta = pi this gives
  /// phi_r = pi, phi_r0 = pi, phi_r1 = -pi.
  static EffectiveCoupling phase_matched(double g0_abs, double ratio,
                                         double ratio_m1 = 0.0,
                                         double theta = kPi);

  /// Phase-matched coupling with |g0| fixed by C = 4|g0|^2 / (kappa gamma_m).
  static EffectiveCoupling from_cooperativity(double cooperativity, double kappa,
                                              double gamma_m, double ratio,
                                              double ratio_m1 = 0.0,
                                              double theta = kPi);
};

}  // namespace optosqueeze
