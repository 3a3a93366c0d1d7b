#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace optosqueeze {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// CODATA values used only at the SI boundary.
namespace si {
inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J / K
inline constexpr double kSpeedOfLight = 299792458.0;   // m / s
}  // namespace si

/// Dimensionless model parameters. Every rate is in units of the mechanical
/// frequency, so omega_m is fixed to 1.
struct PhysicalParams {
  double omega_m = 1.0;
  double kappa = 0.1;         // cavity amplitude decay rate
  double gamma_m = 1e-6;      // mechanical energy decay rate
  double delta0 = 1.0;        // cavity-laser detuning omega_c - omega_l
  double g = 0.0;             // single-photon optomechanical coupling
  double lambda_gain = 0.0;   // OPA gain Lambda
  double theta = kPi;         // OPA pump phase
  double omega_mod = 2.0;     // modulation frequency Omega
  std::optional<double> delta_p;  // pump detuning; Omega/2 when unset
  std::map<int, Complex> drive;   // harmonic n -> E_n
  double n_a = 0.0;
  double n_m = 0.0;

  double pump_detuning() const { return delta_p.value_or(omega_mod / 2.0); }
  double period() const { return 2.0 * kPi / omega_mod; }
  /// Normalized OPA gain 2 Lambda / kappa.
  double lambda_bar() const { return 2.0 * lambda_gain / kappa; }

  Complex drive_harmonic(int n) const;
  /// E(t) = sum_n E_n exp(-i n Omega t).
  Complex drive_at(double t) const;
  /// Largest |n| with a nonzero drive amplitude (0 for an empty drive).
  int max_harmonic() const;
  bool has_drive() const;

  /// Throws ValidationError naming the first offending field.
  void validate() const;
};

struct ExperimentalParams {
  double cavity_length = 0.0;     // m
  double finesse = 0.0;
  double laser_wavelength = 0.0;  // m
  double mirror_mass = 0.0;       // kg
  double mech_freq_hz = 0.0;      // omega_m / 2 pi
  double quality_factor = 0.0;
  double temperature = 0.0;       // K
  std::map<int, double> sideband_powers;  // n -> P_n in W
  std::map<int, double> sideband_phases;  // optional phases of E_n (rad)

  void validate() const;
};

/// Bose occupation 1 / (exp(hbar omega / k_B T) - 1); zero at T = 0.
double bose_occupation(double angular_frequency, double temperature);

/// Converts SI parameters to the dimensionless convention. Fills kappa,
/// gamma_m, g, drive, n_m and n_a; the remaining fields keep their defaults.
/// Appends a warning when Q < 1e3 (Markovian noise questionable).
PhysicalParams from_experimental(const ExperimentalParams& exp,
                                 std::vector<std::string>* warnings = nullptr);

/// SI quantities from the conversion, exposed for checks and reports.
struct ExperimentalRates {
  double omega_m;   // rad/s
  double omega_c;   // rad/s (laser frequency used as cavity frequency)
  double kappa;     // rad/s
  double gamma_m;   // rad/s
  double x_zpf;     // m
  double g;         // rad/s
};

ExperimentalRates experimental_rates(const ExperimentalParams& exp);

}  // namespace optosqueeze
