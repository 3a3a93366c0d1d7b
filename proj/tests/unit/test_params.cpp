#include <doctest.h>

#include <cmath>

#include "optosqueeze/config.hpp"
#include "optosqueeze/coupling.hpp"
#include "optosqueeze/derived.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/params.hpp"
#include "oracles.hpp"

using namespace optosqueeze;
using doctest::Approx;

namespace {

// Expects ValidationError whose message starts with the field name.
template <class F>
void expect_field_error(F&& f, const std::string& field) {
  try {
    f();
    FAIL("no ValidationError for " << field);
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).rfind(field, 0) == 0);
  }
}

ExperimentalParams reference_lab() {
  ExperimentalParams e;
  e.cavity_length = 25e-3;
  e.finesse = 1.4e4;
  e.laser_wavelength = 1064e-9;
  e.mirror_mass = 150e-12;
  e.mech_freq_hz = 1e6;
  e.quality_factor = 1e6;
  e.temperature = 5e-3;
  e.sideband_powers[0] = 1e-3;
  return e;
}

double wrap(double x) { return std::remainder(x, 2.0 * kPi); }

}  // namespace

TEST_CASE("validate names the offending field") {
  PhysicalParams p;
  p.validate();
  auto with = [&](auto edit) {
    PhysicalParams q = p;
    edit(q);
    return q;
  };
  expect_field_error([&] { with([](auto& q) { q.kappa = 0; }).validate(); }, "kappa");
  expect_field_error([&] { with([](auto& q) { q.gamma_m = -1; }).validate(); }, "gamma_m");
  expect_field_error([&] { with([](auto& q) { q.omega_m = 2; }).validate(); }, "omega_m");
  expect_field_error([&] { with([](auto& q) { q.lambda_gain = -0.1; }).validate(); }, "lambda");
  expect_field_error([&] { with([](auto& q) { q.n_m = -1; }).validate(); }, "n_m");
  expect_field_error([&] { with([](auto& q) { q.n_a = NAN; }).validate(); }, "n_a");
  // Lambda_bar above one is legal here; stability is checked elsewhere.
  with([](auto& q) { q.lambda_gain = 1.0; }).validate();
}

TEST_CASE("drive sums harmonics with exp(-i n Omega t)") {
  PhysicalParams p;
  p.drive[0] = 2.0;
  p.drive[1] = Complex(0.5, 0.25);
  p.drive[-1] = 0.7;
  const double t = 0.37;
  const Complex w = std::exp(Complex(0, -p.omega_mod * t));
  const Complex expect = 2.0 + Complex(0.5, 0.25) * w + 0.7 / w;
  CHECK(std::abs(p.drive_at(t) - expect) < 1e-14);
  CHECK(p.max_harmonic() == 1);
  CHECK(p.pump_detuning() == 1.0);
  CHECK(p.period() == Approx(kPi));
  PhysicalParams none;
  CHECK_FALSE(none.has_drive());
  CHECK(none.max_harmonic() == 0);
}

TEST_CASE("Bose occupation limits") {
  CHECK(bose_occupation(1e6, 0.0) == 0.0);
  // High temperature: kT/(hbar w) - 1/2 + O(hbar w / kT).
  const double w = 2 * kPi * 1e3;
  const double t = 10.0;
  const double x = si::kBoltzmann * t / (si::kHbar * w);
  CHECK(bose_occupation(w, t) == Approx(x - 0.5).epsilon(1e-9));
}

TEST_CASE("experimental conversion against hand arithmetic") {
  const auto e = reference_lab();
  std::vector<std::string> warnings;
  const PhysicalParams p = from_experimental(e, &warnings);
  CHECK(warnings.empty());
  const double wm = 2 * kPi * e.mech_freq_hz;
  const double wc = 2 * kPi * si::kSpeedOfLight / e.laser_wavelength;
  const double kappa = kPi * si::kSpeedOfLight / (2 * e.finesse * e.cavity_length);
  const double xzpf = std::sqrt(si::kHbar / (2 * e.mirror_mass * wm));
  CHECK(p.omega_m == 1.0);
  CHECK(p.kappa == Approx(kappa / wm).epsilon(1e-12));
  CHECK(p.gamma_m == Approx(1e-6).epsilon(1e-12));
  CHECK(p.g == Approx(xzpf * wc / e.cavity_length / wm).epsilon(1e-12));
  const double e0 = std::sqrt(2 * kappa * 1e-3 / (si::kHbar * wc)) / wm;
  CHECK(std::abs(p.drive_harmonic(0)) == Approx(e0).epsilon(1e-12));
  // 5 mK at 1 MHz gives about a hundred phonons.
  CHECK(p.n_m == Approx(1.0 / std::expm1(si::kHbar * wm / (si::kBoltzmann * 5e-3))));
  CHECK(p.n_m > 95);
  CHECK(p.n_m < 110);
  CHECK(p.n_a < 1e-100);
}

TEST_CASE("experimental round trip reproduces SI rates") {
  const auto e = reference_lab();
  const auto p = from_experimental(e);
  const auto r = experimental_rates(e);
  CHECK(p.kappa * r.omega_m == Approx(r.kappa).epsilon(1e-10));
  CHECK(p.gamma_m * r.omega_m == Approx(r.gamma_m).epsilon(1e-10));
  CHECK(p.g * r.omega_m == Approx(r.g).epsilon(1e-10));
  CHECK(r.omega_m / r.gamma_m == Approx(e.quality_factor).epsilon(1e-10));
}

TEST_CASE("experimental validation and the low-Q warning") {
  auto e = reference_lab();
  e.finesse = 0;
  expect_field_error([&] { from_experimental(e); }, "experimental.finesse");
  e = reference_lab();
  e.quality_factor = 500;
  std::vector<std::string> w;
  from_experimental(e, &w);
  CHECK(w.size() == 1);
}

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(
# comment
kappa = 0.2
gamma_m = 1e-5   # trailing comment
theta = 0.5pi
delta0 = 1
[drive]
E0 = 3
E+1 = 1,2
E-1 = 2@0.5pi
)");
  const auto& p = cfg.params;
  CHECK(p.kappa == 0.2);
  CHECK(p.gamma_m == 1e-5);
  CHECK(p.theta == Approx(kPi / 2));
  CHECK(p.drive_harmonic(0) == Complex(3, 0));
  CHECK(p.drive_harmonic(1) == Complex(1, 2));
  CHECK(std::abs(p.drive_harmonic(-1) - Complex(0, 2)) < 1e-15);
  CHECK(parse_real("-0.5*pi", "x") == Approx(-kPi / 2));
  CHECK(std::abs(parse_complex("2\xE2\x88\xA0pi", "x") - Complex(-2, 0)) < 1e-15);

  CHECK_THROWS_AS(parse_config("kappa = 1\nkappa = 2\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("kapa = 1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("kappa = abc\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("kappa = -1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("lambda = 0.1\nlambda_bar = 0.5\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[coupling]\nC = 1e4\ng0 = 0.01\n"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ValidationError);

  const auto lb = parse_config("kappa = 0.1\nlambda_bar = 0.5\n");
  CHECK(lb.params.lambda_bar() == Approx(0.5));
}

TEST_CASE("shipped presets load") {
  const auto f1 = load_config(oracle::source_path("configs/reference_orbit.cfg"));
  CHECK(f1.params.kappa == 0.1);
  CHECK(f1.params.delta0 == 1.06);
  CHECK(f1.params.lambda_gain / f1.params.kappa == Approx(0.3));
  CHECK(f1.params.drive_harmonic(1) == Complex(0.7e4, 0));
  const auto f3 = load_config(oracle::source_path("configs/scenarios.cfg"));
  CHECK(f3.phase_match == PhaseMatch::kMomentum);
  const auto f2 = load_config(oracle::source_path("configs/rotating_crt.cfg"));
  REQUIRE(f2.coupling.has_value());
  CHECK(*f2.coupling->cooperativity == 1e4);
  CHECK(f2.coupling->ratio_m1 == 0.3);
  const auto ex = load_config(oracle::source_path("configs/experimental.cfg"));
  CHECK(ex.experimental.has_value());
  CHECK(ex.params.gamma_m == Approx(1e-6));
  CHECK(ex.params.lambda_bar() == Approx(0.3));
  // The experimental block owns kappa.
  CHECK_THROWS_AS(parse_config("kappa = 0.1\n[experimental]\ncavity_length = 1\n"),
                  ValidationError);
}

TEST_CASE("phase-matched coupling sits at the momentum point") {
  const auto c = EffectiveCoupling::phase_matched(0.01, 0.6, 0.3);
  CHECK(wrap(c.phi_r() - kPi) == Approx(0).epsilon(1e-15));
  CHECK(wrap(c.phi_r0() - kPi) == Approx(0).epsilon(1e-15));
  CHECK(wrap(c.phi_r1() + kPi) == Approx(0).epsilon(1e-15));
  CHECK(c.ratio() == Approx(0.6));
  CHECK(std::abs(c.g_minus1) == Approx(0.3 * 0.6 * 0.01));
  CHECK(c.squeeze_r() == Approx(std::atanh(0.6)));
  CHECK(std::norm(c.g_b()) == Approx(0.01 * 0.01 * (1 - 0.36)));
  const auto deg = EffectiveCoupling::phase_matched(0.01, 1.2);
  CHECK(std::isinf(deg.squeeze_r()));
  CHECK_FALSE(deg.squeezable());
  CHECK_THROWS_AS(deg.g_b(), ValidationError);
  const auto fc = EffectiveCoupling::from_cooperativity(1e4, 0.1, 1e-6, 0.6);
  CHECK(4 * std::norm(fc.g0) / (0.1 * 1e-6) == Approx(1e4));
}

TEST_CASE("derived quantities: thresholds") {
  const double r = std::atanh(0.6);
  const double eta = eta_factor(r, 100, 1e-5);
  CHECK(eta == Approx(std::exp(-2 * r) / 100.5 + 1e-5).epsilon(1e-14));
  const double thr = c_tilde_threshold(eta);
  const double ins = c_tilde_instability(eta);
  CHECK(thr == Approx(4 * (1 / eta - 1)));
  CHECK(ins == Approx(8 * (2 / eta - 1)));
  CHECK(ins > thr);
  // Values quoted for this setup: 1.6e3 and 6.4e3, i.e. C = 2.5e3 and 1e4.
  CHECK(std::abs(thr / 1.6e3 - 1) < 0.02);
  CHECK(std::abs(ins / 6.4e3 - 1) < 0.02);
  CHECK(std::abs(thr / 0.64 / 2.5e3 - 1) < 0.02);
  CHECK(std::abs(ins / 0.64 / 1e4 - 1) < 0.02);
  // Threshold definitions are consistent with the optimal-gain formula.
  CHECK(std::abs(lambda_bar_opt_formula(thr, eta)) < 1e-10);
  CHECK(std::abs(lambda_bar_opt_formula(ins, eta) - 1) < 1e-10);
}

TEST_CASE("derived quantities: degenerate and trivial cases") {
  const double eta = eta_factor(0, 0, 0);
  CHECK(eta == 2.0);
  CHECK(c_tilde_threshold(eta) == -2.0);
  CHECK(c_tilde(5e4, std::atanh(0.4)) == Approx(4.2e4));

  PhysicalParams p;
  p.kappa = 0.1;
  p.gamma_m = 1e-6;
  p.n_m = 100;
  p.lambda_gain = 0.025;
  const auto c = EffectiveCoupling::from_cooperativity(1e4, p.kappa, p.gamma_m, 0.6);
  const auto d = derived(p, c);
  CHECK(d.lambda_bar == Approx(0.5));
  CHECK(d.cooperativity == Approx(1e4));
  CHECK(d.c_tilde == Approx(6.4e3));
  CHECK(d.c_tilde <= d.cooperativity);
  CHECK(d.c_thr == Approx(d.c_tilde_thr / 0.64));
  // C~ = 6.4e3 sits a hair above C~_ins, so the raw optimum crosses one.
  CHECK(d.lambda_bar_opt_clamped);
  CHECK_THROWS_AS(derived(p, EffectiveCoupling::phase_matched(0.01, 1.0)), ValidationError);
}
