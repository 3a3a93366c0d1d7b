#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <vector>

#include "optosqueeze/coupling.hpp"
#include "optosqueeze/params.hpp"

namespace optosqueeze::meanfield {

struct MeanFieldState {
  double t = 0.0;
  double q_mean = 0.0;
  double p_mean = 0.0;
  Complex a_mean{};
};

/// Right-hand side of the first-moment equations at state s.
MeanFieldState rate(const PhysicalParams& params, const MeanFieldState& s);

/// One period of the asymptotic orbit on a uniform grid t0 + k tau / n.
struct MeanFieldOrbit {
  double period = 0.0;
  double t0 = 0.0;  // absolute start time, a multiple of the period
  std::vector<MeanFieldState> samples;
  std::vector<MeanFieldState> rates;  // time derivatives at the samples
  double periodicity_residual = 0.0;
  /// Grid-sampled trajectory over [settle, settle + sample] periods.
  std::vector<MeanFieldState> trajectory;

  /// Periodic cubic Hermite interpolation; t is reduced modulo the period.
  MeanFieldState at(double t) const;
  /// max_t |q|, max_t |p|, max_t |a| over the grid.
  double q_amplitude() const;
  double p_amplitude() const;
  double a_amplitude() const;
};

struct IntegrateOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double divergence_guard = 1e12;
};

/// Integrates from `initial` (its t is the start time) to t_end and returns
/// the states at count + 1 equally spaced times, both ends included.
/// Throws InstabilityError with the blow-up time when |a| exceeds the guard.
std::vector<MeanFieldState> integrate_mean_field(const PhysicalParams& params,
                                                 const MeanFieldState& initial, double t_end,
                                                 std::size_t count,
                                                 const IntegrateOptions& opt = {});

struct OrbitOptions {
  int settle_periods = 200;
  int sample_periods = 1;
  double tol = 1e-6;
  int grid = 256;
  // Six extensions: at the reference drive the slowest transient decays at
  // about 0.016 omega_m, so 1e-6 is reached only after 600-800 periods.
  int max_extensions = 6;
  int extension_periods = 100;
  IntegrateOptions integrate;
};

/// Throws InstabilityError (divergence, or zero drive above threshold) and
/// ConvergenceError carrying the last residual when the orbit does not close.
MeanFieldOrbit detect_periodic_orbit(const PhysicalParams& params,
                                     const OrbitOptions& opt = {});

/// Exact zero-drive cavity threshold 4 Lambda^2 >= kappa^2 + (delta0 - delta_p)^2.
bool zero_drive_unstable(const PhysicalParams& params);

/// Perturbative Fourier table: O_{n,j} is the coefficient of g^j e^{i n Omega t}.
struct FourierCoefficients {
  int harmonics = 1;  // N
  int orders = 6;     // J
  // index [n + N][j]
  std::vector<std::vector<Complex>> a, q, p;

  Complex a_at(int n, int j) const { return a[n + harmonics][j]; }
  Complex q_at(int n, int j) const { return q[n + harmonics][j]; }
  Complex p_at(int n, int j) const { return p[n + harmonics][j]; }

  /// Resummed series at coupling g.
  Complex a_mean(double t, double g, double omega_mod) const;
  Complex q_mean(double t, double g, double omega_mod) const;
  Complex p_mean(double t, double g, double omega_mod) const;
};

/// Requires delta_p = Omega/2 and N >= the largest drive harmonic.
/// A vanishing denominator throws InstabilityError naming the harmonic.
FourierCoefficients fourier_perturbation_coefficients(const PhysicalParams& params, int J = 6,
                                                      int N = 1);

/// g_n = (1/sqrt2) sum_j a_{-n,j} g^{j+1}.
EffectiveCoupling effective_coupling(const FourierCoefficients& coeffs,
                                     const PhysicalParams& params);
/// g_n = projection of g<a(t)>/sqrt2 onto e^{-i n Omega t}.
EffectiveCoupling effective_coupling(const MeanFieldOrbit& orbit, const PhysicalParams& params);

struct CouplingComparison {
  EffectiveCoupling analytic;
  EffectiveCoupling numeric;
  /// max_n |g_n(analytic) - g_n(numeric)| / |g0(numeric)|
  double max_relative_difference = 0.0;
};

CouplingComparison compare_couplings(const FourierCoefficients& coeffs,
                                     const MeanFieldOrbit& orbit, const PhysicalParams& params);

/// Rephases E_0, E_{+-1} (magnitudes kept) so the resummed couplings take
/// the phases of the chosen squeezing configuration: momentum
/// (phi_0 = (theta - pi)/2, phi_{+-1} = phi_0 + pi) or position
/// (phi_{+-1} = phi_0 = theta/2). Starts from the zeroth-order rule and
/// iterates on the perturbative couplings; needs delta_p = Omega/2.
PhysicalParams phase_match_drive(const PhysicalParams& params, bool momentum = true);

}  // namespace optosqueeze::meanfield

namespace optosqueeze::meanfield {

/// Pointwise gap between the resummed expansion and a numeric orbit, each
/// observable relative to its own max-norm amplitude on the orbit grid.
struct ExpansionDeviation {
  double q = 0.0;
  double p = 0.0;
  double a = 0.0;
  double max_imag_q = 0.0;  // largest |Im q(t)| of the series over |q| amplitude
  double max() const { return std::max({q, p, a}); }
};

ExpansionDeviation compare_expansion(const FourierCoefficients& coeffs,
                                     const MeanFieldOrbit& orbit, const PhysicalParams& params);

}  // namespace optosqueeze::meanfield
