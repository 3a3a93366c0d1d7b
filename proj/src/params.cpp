#include "optosqueeze/params.hpp"

#include <cmath>
#include <sstream>

#include "optosqueeze/errors.hpp"

namespace optosqueeze {

namespace {

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw ValidationError(field + ": " + rule);
}

bool finite(double x) { return std::isfinite(x); }

}  // namespace

Complex PhysicalParams::drive_harmonic(int n) const {
  auto it = drive.find(n);
  return it == drive.end() ? Complex{} : it->second;
}

Complex PhysicalParams::drive_at(double t) const {
  Complex e{};
  for (const auto& [n, amp] : drive) {
    e += amp * std::exp(Complex(0.0, -n * omega_mod * t));
  }
  return e;
}

int PhysicalParams::max_harmonic() const {
  int m = 0;
  for (const auto& [n, amp] : drive) {
    if (amp != Complex{}) m = std::max(m, std::abs(n));
  }
  return m;
}

bool PhysicalParams::has_drive() const {
  for (const auto& [n, amp] : drive) {
    if (amp != Complex{}) return true;
  }
  return false;
}

void PhysicalParams::validate() const {
  require(omega_m == 1.0, "omega_m", "must equal 1 (internal unit)");
  require(finite(kappa) && kappa > 0.0, "kappa", "must be > 0");
  require(finite(gamma_m) && gamma_m > 0.0, "gamma_m", "must be > 0");
  require(finite(delta0), "delta0", "must be finite");
  require(finite(g) && g >= 0.0, "g", "must be >= 0");
  require(finite(lambda_gain) && lambda_gain >= 0.0, "lambda", "must be >= 0");
  require(finite(theta), "theta", "must be finite");
  require(finite(omega_mod) && omega_mod > 0.0, "omega_mod", "must be > 0");
  require(!delta_p || finite(*delta_p), "delta_p", "must be finite");
  require(finite(n_a) && n_a >= 0.0, "n_a", "must be >= 0");
  require(finite(n_m) && n_m >= 0.0, "n_m", "must be >= 0");
  for (const auto& [n, amp] : drive) {
    require(finite(amp.real()) && finite(amp.imag()),
            "drive.E" + std::to_string(n), "must be finite");
  }
}

void ExperimentalParams::validate() const {
  const auto positive = [](double x) { return std::isfinite(x) && x > 0.0; };
  require(positive(cavity_length), "experimental.cavity_length", "must be > 0");
  require(positive(finesse), "experimental.finesse", "must be > 0");
  require(positive(laser_wavelength), "experimental.laser_wavelength", "must be > 0");
  require(positive(mirror_mass), "experimental.mirror_mass", "must be > 0");
  require(positive(mech_freq_hz), "experimental.mech_freq_hz", "must be > 0");
  require(positive(quality_factor), "experimental.quality_factor", "must be > 0");
  require(positive(temperature), "experimental.temperature", "must be > 0");
  require(!sideband_powers.empty(), "experimental.P", "at least one sideband power required");
  for (const auto& [n, p] : sideband_powers) {
    require(positive(p), "experimental.P" + std::to_string(n), "must be > 0");
  }
}

double bose_occupation(double angular_frequency, double temperature) {
  if (temperature <= 0.0) return 0.0;
  const double x = si::kHbar * angular_frequency / (si::kBoltzmann * temperature);
  const double d = std::expm1(x);
  return std::isinf(d) ? 0.0 : 1.0 / d;
}

ExperimentalRates experimental_rates(const ExperimentalParams& exp) {
  ExperimentalRates r{};
  r.omega_m = 2.0 * kPi * exp.mech_freq_hz;
  r.omega_c = 2.0 * kPi * si::kSpeedOfLight / exp.laser_wavelength;
  r.kappa = kPi * si::kSpeedOfLight / (2.0 * exp.finesse * exp.cavity_length);
  r.gamma_m = r.omega_m / exp.quality_factor;
  r.x_zpf = std::sqrt(si::kHbar / (2.0 * exp.mirror_mass * r.omega_m));
  r.g = r.x_zpf * r.omega_c / exp.cavity_length;
  return r;
}

PhysicalParams from_experimental(const ExperimentalParams& exp,
                                 std::vector<std::string>* warnings) {
  exp.validate();
  const ExperimentalRates r = experimental_rates(exp);

  if (warnings != nullptr && exp.quality_factor < 1e3) {
    std::ostringstream os;
    os << "quality factor Q = " << exp.quality_factor
       << " < 1e3: delta-correlated mechanical noise is a poor approximation";
    warnings->push_back(os.str());
  }

  PhysicalParams p;
  p.kappa = r.kappa / r.omega_m;
  p.gamma_m = r.gamma_m / r.omega_m;
  p.g = r.g / r.omega_m;
  p.n_m = bose_occupation(r.omega_m, exp.temperature);
  p.n_a = bose_occupation(r.omega_c, exp.temperature);
  for (const auto& [n, power] : exp.sideband_powers) {
    const double mag = std::sqrt(2.0 * r.kappa * power / (si::kHbar * r.omega_c));
    auto ph = exp.sideband_phases.find(n);
    const double phase = ph == exp.sideband_phases.end() ? 0.0 : ph->second;
    p.drive[n] = std::polar(mag / r.omega_m, phase);
  }
  return p;
}

}  // namespace optosqueeze
