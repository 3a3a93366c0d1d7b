#include "optosqueeze/meanfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/ode.hpp"

namespace optosqueeze::meanfield {

namespace {

using State = std::array<double, 4>;  // q, p, Re a, Im a

constexpr Complex kI{0.0, 1.0};

State to_array(const MeanFieldState& s) {
  return {s.q_mean, s.p_mean, s.a_mean.real(), s.a_mean.imag()};
}

MeanFieldState from_array(const State& x, double t) {
  return {t, x[0], x[1], {x[2], x[3]}};
}

void rhs(const PhysicalParams& prm, const State& x, State& dx, double t, double guard) {
  const Complex a{x[2], x[3]};
  if (!(std::abs(a) <= guard) || !std::isfinite(x[0]) || !std::isfinite(x[1])) {
    std::ostringstream os;
    os << "mean field diverged at t = " << t << " (|a| = " << std::abs(a) << ")";
    throw InstabilityError(os.str());
  }
  const double q = x[0];
  const double p = x[1];
  const Complex da = -(prm.kappa + kI * prm.delta0) * a + kI * prm.g * a * q + prm.drive_at(t) +
                     2.0 * prm.lambda_gain * std::exp(kI * prm.theta) * std::conj(a) *
                         std::exp(-2.0 * kI * prm.pump_detuning() * t);
  dx[0] = prm.omega_m * p;
  dx[1] = -prm.omega_m * q - prm.gamma_m * p + prm.g * std::norm(a);
  dx[2] = da.real();
  dx[3] = da.imag();
}

double wrap_time(double t, double t0, double period) {
  double s = std::fmod(t - t0, period);
  if (s < 0.0) s += period;
  return s;
}

// Per-observable max-norm relative difference between two one-period samples.
double periodicity_residual(const std::vector<MeanFieldState>& prev,
                            const std::vector<MeanFieldState>& last) {
  double dq = 0, dp = 0, da = 0, aq = 0, ap = 0, aa = 0;
  for (std::size_t k = 0; k < last.size(); ++k) {
    dq = std::max(dq, std::abs(last[k].q_mean - prev[k].q_mean));
    dp = std::max(dp, std::abs(last[k].p_mean - prev[k].p_mean));
    da = std::max(da, std::abs(last[k].a_mean - prev[k].a_mean));
    aq = std::max(aq, std::abs(last[k].q_mean));
    ap = std::max(ap, std::abs(last[k].p_mean));
    aa = std::max(aa, std::abs(last[k].a_mean));
  }
  auto rel = [](double d, double a) { return a > 0.0 ? d / a : d; };
  return std::max({rel(dq, aq), rel(dp, ap), rel(da, aa)});
}

}  // namespace

MeanFieldState rate(const PhysicalParams& params, const MeanFieldState& s) {
  State dx{};
  rhs(params, to_array(s), dx, s.t, std::numeric_limits<double>::infinity());
  return from_array(dx, s.t);
}

MeanFieldState MeanFieldOrbit::at(double t) const {
  if (samples.empty()) throw ValidationError("orbit: no samples");
  const std::size_t n = samples.size();
  const double h = period / static_cast<double>(n);
  const double s = wrap_time(t, t0, period);
  std::size_t k = static_cast<std::size_t>(s / h);
  if (k >= n) k = n - 1;
  const std::size_t k1 = (k + 1) % n;
  const double u = (s - static_cast<double>(k) * h) / h;
  const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
  const double h10 = u * (1 - u) * (1 - u);
  const double h01 = u * u * (3 - 2 * u);
  const double h11 = u * u * (u - 1);
  auto mix = [&](auto y0, auto d0, auto y1, auto d1) {
    return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
  };
  MeanFieldState out;
  out.t = t;
  out.q_mean = mix(samples[k].q_mean, rates[k].q_mean, samples[k1].q_mean, rates[k1].q_mean);
  out.p_mean = mix(samples[k].p_mean, rates[k].p_mean, samples[k1].p_mean, rates[k1].p_mean);
  out.a_mean = mix(samples[k].a_mean, rates[k].a_mean, samples[k1].a_mean, rates[k1].a_mean);
  return out;
}

double MeanFieldOrbit::q_amplitude() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.q_mean));
  return m;
}

double MeanFieldOrbit::p_amplitude() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.p_mean));
  return m;
}

double MeanFieldOrbit::a_amplitude() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, std::abs(s.a_mean));
  return m;
}

std::vector<MeanFieldState> integrate_mean_field(const PhysicalParams& params,
                                                 const MeanFieldState& initial, double t_end,
                                                 std::size_t count,
                                                 const IntegrateOptions& opt) {
  params.validate();
  if (!(t_end > initial.t)) throw ValidationError("t_end: must exceed the initial time");
  if (!(opt.rtol > 0.0) || !(opt.atol > 0.0)) throw ValidationError("tol: must be > 0");
  if (count < 1) throw ValidationError("count: must be >= 1");
  State x = to_array(initial);
  std::vector<MeanFieldState> out;
  out.reserve(count + 1);
  const auto times = ode::uniform_times(initial.t, t_end, count);
  ode::integrate_at<4>(
      [&](const State& s, State& ds, double t) { rhs(params, s, ds, t, opt.divergence_guard); },
      x, times, {opt.rtol, opt.atol},
      [&](const State& s, double t) { out.push_back(from_array(s, t)); });
  return out;
}

bool zero_drive_unstable(const PhysicalParams& params) {
  const double det = params.delta0 - params.pump_detuning();
  return 4.0 * params.lambda_gain * params.lambda_gain >=
         params.kappa * params.kappa + det * det;
}

MeanFieldOrbit detect_periodic_orbit(const PhysicalParams& params, const OrbitOptions& opt) {
  params.validate();
  if (opt.settle_periods < 1) throw ValidationError("settle_periods: must be >= 1");
  if (opt.sample_periods < 1) throw ValidationError("sample_periods: must be >= 1");
  if (opt.grid < 4) throw ValidationError("grid: must be >= 4");
  if (!(opt.tol > 0.0)) throw ValidationError("tol: must be > 0");

  const double tau = params.period();
  const std::size_t grid = static_cast<std::size_t>(opt.grid);

  if (!params.has_drive()) {
    if (zero_drive_unstable(params)) {
      std::ostringstream os;
      os << "zero drive above the parametric threshold: 4 Lambda^2 = "
         << 4.0 * params.lambda_gain * params.lambda_gain
         << " >= kappa^2 + (delta0 - delta_p)^2";
      throw InstabilityError(os.str());
    }
    MeanFieldOrbit orbit;
    orbit.period = tau;
    orbit.t0 = opt.settle_periods * tau;
    for (std::size_t k = 0; k < grid; ++k) {
      MeanFieldState s;
      s.t = orbit.t0 + tau * static_cast<double>(k) / static_cast<double>(grid);
      orbit.samples.push_back(s);
      orbit.rates.push_back({s.t, 0.0, 0.0, {}});
    }
    const std::size_t total = grid * static_cast<std::size_t>(opt.sample_periods);
    for (std::size_t k = 0; k <= total; ++k) {
      orbit.trajectory.push_back(
          {orbit.t0 + tau * static_cast<double>(k) / static_cast<double>(grid), 0.0, 0.0, {}});
    }
    return orbit;
  }

  MeanFieldState state;
  double t = 0.0;
  auto advance = [&](int periods) {
    auto traj = integrate_mean_field(params, state, t + periods * tau, 1, opt.integrate);
    state = traj.back();
    t = state.t;
  };
  advance(opt.settle_periods);

  std::vector<MeanFieldState> window_traj;
  for (int attempt = 0;; ++attempt) {
    const std::size_t window = grid * static_cast<std::size_t>(opt.sample_periods + 1);
    auto traj = integrate_mean_field(params, state, t + (opt.sample_periods + 1) * tau, window,
                                     opt.integrate);
    const std::vector<MeanFieldState> last(traj.end() - static_cast<long>(grid) - 1,
                                           traj.end() - 1);
    const std::vector<MeanFieldState> prev(traj.end() - 2 * static_cast<long>(grid) - 1,
                                           traj.end() - static_cast<long>(grid) - 1);
    const double residual = periodicity_residual(prev, last);
    state = traj.back();
    t = state.t;
    // The exported window is always the first one, right after settling.
    if (attempt == 0) {
      window_traj.assign(traj.begin(),
                         traj.begin() + static_cast<long>(grid) * opt.sample_periods + 1);
    }
    if (residual <= opt.tol) {
      MeanFieldOrbit orbit;
      orbit.period = tau;
      orbit.t0 = t - tau;
      orbit.samples = last;
      for (const auto& s : last) orbit.rates.push_back(rate(params, s));
      orbit.periodicity_residual = residual;
      orbit.trajectory = std::move(window_traj);
      return orbit;
    }
    if (attempt >= opt.max_extensions) {
      std::ostringstream os;
      os << "mean-field orbit did not close: residual " << residual << " > tol " << opt.tol
         << " after " << opt.max_extensions << " extensions";
      throw ConvergenceError(os.str(), residual);
    }
    advance(opt.extension_periods);
  }
}

// ---------------------------------------------------------------------------
// Perturbative Fourier recursion.

Complex FourierCoefficients::a_mean(double t, double g, double omega_mod) const {
  Complex s{};
  for (int n = -harmonics; n <= harmonics; ++n) {
    Complex c{};
    double gj = 1.0;
    for (int j = 0; j <= orders; ++j, gj *= g) c += gj * a_at(n, j);
    s += c * std::exp(kI * (n * omega_mod * t));
  }
  return s;
}

Complex FourierCoefficients::q_mean(double t, double g, double omega_mod) const {
  Complex s{};
  for (int n = -harmonics; n <= harmonics; ++n) {
    Complex c{};
    double gj = 1.0;
    for (int j = 0; j <= orders; ++j, gj *= g) c += gj * q_at(n, j);
    s += c * std::exp(kI * (n * omega_mod * t));
  }
  return s;
}

Complex FourierCoefficients::p_mean(double t, double g, double omega_mod) const {
  Complex s{};
  for (int n = -harmonics; n <= harmonics; ++n) {
    Complex c{};
    double gj = 1.0;
    for (int j = 0; j <= orders; ++j, gj *= g) c += gj * p_at(n, j);
    s += c * std::exp(kI * (n * omega_mod * t));
  }
  return s;
}

FourierCoefficients fourier_perturbation_coefficients(const PhysicalParams& params, int J,
                                                      int N) {
  params.validate();
  if (J < 0) throw ValidationError("J: must be >= 0");
  if (N < 0) throw ValidationError("N: must be >= 0");
  if (N < params.max_harmonic()) {
    throw ValidationError("N: must be >= the largest drive harmonic (" +
                          std::to_string(params.max_harmonic()) + ")");
  }
  if (std::abs(params.pump_detuning() - params.omega_mod / 2.0) > 1e-12 * params.omega_mod) {
    throw ValidationError("delta_p: the Fourier recursion requires delta_p = omega_mod / 2");
  }

  const double W = params.omega_mod;
  const double wm = params.omega_m;
  const double kap = params.kappa;
  const double d0 = params.delta0;
  const Complex opa = 2.0 * params.lambda_gain * std::exp(kI * params.theta);
  const double lam2x4 = 4.0 * params.lambda_gain * params.lambda_gain;

  FourierCoefficients fc;
  fc.harmonics = N;
  fc.orders = J;
  const std::size_t width = static_cast<std::size_t>(2 * N + 1);
  fc.a.assign(width, std::vector<Complex>(static_cast<std::size_t>(J + 1)));
  fc.q = fc.a;
  fc.p = fc.a;

  auto in_window = [N](int n) { return n >= -N && n <= N; };
  auto A = [&](int n, int j) -> Complex& { return fc.a[static_cast<std::size_t>(n + N)][j]; };
  auto Q = [&](int n, int j) -> Complex& { return fc.q[static_cast<std::size_t>(n + N)][j]; };

  // Source of the cavity equation at harmonic n (any integer) and order j.
  auto source = [&](int n, int j) -> Complex {
    if (j == 0) return params.drive_harmonic(-n);
    Complex s{};
    for (int k = 0; k < j; ++k) {
      for (int m = -N; m <= N; ++m) {
        if (!in_window(n - m)) continue;
        s += A(m, k) * Q(n - m, j - k - 1);
      }
    }
    return kI * s;
  };

  for (int j = 0; j <= J; ++j) {
    // Mechanics at order j only needs cavity orders below j.
    for (int n = -N; n <= N; ++n) {
      if (j == 0) continue;  // q_{n,0} = p_{n,0} = 0
      Complex conv{};
      for (int k = 0; k < j; ++k) {
        for (int m = -N; m <= N; ++m) {
          if (!in_window(n + m)) continue;
          conv += std::conj(A(m, k)) * A(n + m, j - k - 1);
        }
      }
      const Complex den(wm * wm - n * n * W * W, params.gamma_m * n * W);
      if (std::abs(den) < 1e-14 * wm * wm) {
        throw InstabilityError("mechanical resonance in the Fourier recursion at n = " +
                               std::to_string(n));
      }
      Q(n, j) = wm * conv / den;
      fc.p[static_cast<std::size_t>(n + N)][j] = kI * (n * W) * Q(n, j) / wm;
    }
    for (int n = -N; n <= N; ++n) {
      const int m = -n - 1;
      const Complex dn(kap, d0 + n * W);
      const Complex dm_conj(kap, -(d0 + m * W));
      const Complex den = dn * dm_conj - lam2x4;
      if (std::abs(den) <= 1e-14 * (std::abs(dn) * std::abs(dm_conj) + lam2x4)) {
        throw InstabilityError("parametric resonance: vanishing denominator at n = " +
                               std::to_string(n));
      }
      A(n, j) = (dm_conj * source(n, j) + opa * std::conj(source(m, j))) / den;
    }
  }
  return fc;
}

EffectiveCoupling effective_coupling(const FourierCoefficients& coeffs,
                                     const PhysicalParams& params) {
  auto gn = [&](int n) -> Complex {
    if (std::abs(n) > coeffs.harmonics) return {};
    Complex s{};
    double gj = params.g;
    for (int j = 0; j <= coeffs.orders; ++j, gj *= params.g) s += coeffs.a_at(-n, j) * gj;
    return s / std::sqrt(2.0);
  };
  EffectiveCoupling c;
  c.g_minus1 = gn(-1);
  c.g0 = gn(0);
  c.g_plus1 = gn(1);
  c.theta = params.theta;
  return c;
}

EffectiveCoupling effective_coupling(const MeanFieldOrbit& orbit, const PhysicalParams& params) {
  if (orbit.samples.empty()) throw ValidationError("orbit: no samples");
  const double W = params.omega_mod;
  auto gn = [&](int n) {
    Complex s{};
    for (const auto& st : orbit.samples) {
      s += params.g * st.a_mean / std::sqrt(2.0) * std::exp(kI * (n * W * st.t));
    }
    return s / static_cast<double>(orbit.samples.size());
  };
  EffectiveCoupling c;
  c.g_minus1 = gn(-1);
  c.g0 = gn(0);
  c.g_plus1 = gn(1);
  c.theta = params.theta;
  return c;
}

CouplingComparison compare_couplings(const FourierCoefficients& coeffs,
                                     const MeanFieldOrbit& orbit, const PhysicalParams& params) {
  CouplingComparison cmp;
  cmp.analytic = effective_coupling(coeffs, params);
  cmp.numeric = effective_coupling(orbit, params);
  const double scale = std::abs(cmp.numeric.g0);
  const double d = std::max({std::abs(cmp.analytic.g_minus1 - cmp.numeric.g_minus1),
                             std::abs(cmp.analytic.g0 - cmp.numeric.g0),
                             std::abs(cmp.analytic.g_plus1 - cmp.numeric.g_plus1)});
  cmp.max_relative_difference = scale > 0.0 ? d / scale : d;
  return cmp;
}

PhysicalParams phase_match_drive(const PhysicalParams& params, bool momentum) {
  PhysicalParams out = params;
  const double phi0 = momentum ? (params.theta - kPi) / 2.0 : params.theta / 2.0;
  const double phi_side = momentum ? phi0 + kPi : phi0;
  auto target = [&](int n) { return n == 0 ? phi0 : phi_side; };
  // Zeroth order, no gain: g_n ~ E_n / (kappa + i(delta0 - n Omega)).
  for (auto& [n, amp] : out.drive) {
    const double lag = std::arg(Complex(params.kappa, params.delta0 - n * params.omega_mod));
    amp = std::polar(std::abs(amp), target(n) + lag);
  }
  // Then correct on the resummed couplings, which carry the OPA mixing and
  // the radiation-pressure shift.
  const int N = std::max(1, out.max_harmonic());
  for (int it = 0; it < 100; ++it) {
    const EffectiveCoupling c =
        effective_coupling(fourier_perturbation_coefficients(out, 6, N), out);
    double worst = 0.0;
    for (auto& [n, amp] : out.drive) {
      if (std::abs(n) > 1 || std::abs(amp) == 0.0) continue;
      const Complex g = n == 0 ? c.g0 : n == 1 ? c.g_plus1 : c.g_minus1;
      if (std::abs(g) == 0.0) continue;
      const double d = std::remainder(target(n) - std::arg(g), 2.0 * kPi);
      worst = std::max(worst, std::abs(d));
      amp *= std::polar(1.0, d);
    }
    if (worst < 1e-12) return out;
  }
  throw ConvergenceError("phase matching of the drive did not converge");
}

ExpansionDeviation compare_expansion(const FourierCoefficients& coeffs,
                                     const MeanFieldOrbit& orbit, const PhysicalParams& params) {
  ExpansionDeviation d;
  const double aq = orbit.q_amplitude();
  const double ap = orbit.p_amplitude();
  const double aa = orbit.a_amplitude();
  for (const auto& s : orbit.samples) {
    const Complex q = coeffs.q_mean(s.t, params.g, params.omega_mod);
    const Complex p = coeffs.p_mean(s.t, params.g, params.omega_mod);
    const Complex a = coeffs.a_mean(s.t, params.g, params.omega_mod);
    d.q = std::max(d.q, std::abs(q.real() - s.q_mean));
    d.p = std::max(d.p, std::abs(p.real() - s.p_mean));
    d.a = std::max(d.a, std::abs(a - s.a_mean));
    d.max_imag_q = std::max(d.max_imag_q, std::abs(q.imag()));
  }
  auto rel = [](double x, double amp) { return amp > 0.0 ? x / amp : x; };
  d.q = rel(d.q, aq);
  d.p = rel(d.p, ap);
  d.a = rel(d.a, aa);
  d.max_imag_q = rel(d.max_imag_q, aq);
  return d;
}

}  // namespace optosqueeze::meanfield
