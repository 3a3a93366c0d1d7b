#include "optosqueeze/floquet.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/ode.hpp"

namespace optosqueeze::floquet {

namespace {

using Sym = std::array<double, 10>;
using Full = std::array<double, 16>;

constexpr Complex kI{0.0, 1.0};

// Upper-triangle packing (row-major): 00 01 02 03 11 12 13 22 23 33.
constexpr int kRow[10] = {0, 0, 0, 0, 1, 1, 1, 2, 2, 3};
constexpr int kCol[10] = {0, 1, 2, 3, 1, 2, 3, 2, 3, 3};

Sym pack(const Mat4& v) {
  Sym s{};
  for (int k = 0; k < 10; ++k) s[k] = 0.5 * (v(kRow[k], kCol[k]) + v(kCol[k], kRow[k]));
  return s;
}

Mat4 unpack(const Sym& s) {
  Mat4 v;
  for (int k = 0; k < 10; ++k) {
    v(kRow[k], kCol[k]) = s[k];
    v(kCol[k], kRow[k]) = s[k];
  }
  return v;
}

double max_abs(const Mat4& m) { return m.cwiseAbs().maxCoeff(); }

// Quadrature block for z' = alpha w + beta w^dagger.
Eigen::Matrix2d quad_block(Complex alpha, Complex beta) {
  Eigen::Matrix2d b;
  b << (alpha + beta).real(), -(alpha - beta).imag(), (alpha + beta).imag(),
      (alpha - beta).real();
  return b;
}

// Vertex of the parabola through (k-1, k, k+1) on a periodic grid.
double refined_min(const std::vector<double>& y) {
  const std::size_t n = y.size();
  const std::size_t k =
      static_cast<std::size_t>(std::min_element(y.begin(), y.end()) - y.begin());
  const double ym = y[(k + n - 1) % n];
  const double y0 = y[k];
  const double yp = y[(k + 1) % n];
  const double den = ym - 2.0 * y0 + yp;
  if (den <= 0.0) return y0;
  const double shift = 0.5 * (ym - yp) / den;
  return std::min(y0, y0 - 0.25 * (ym - yp) * shift);
}

double refined_max(const std::vector<double>& y) {
  std::vector<double> neg(y.size());
  std::transform(y.begin(), y.end(), neg.begin(), [](double v) { return -v; });
  return -refined_min(neg);
}

}  // namespace

const char* frame_name(Frame f) {
  switch (f) {
    case Frame::kLab:
      return "lab";
    case Frame::kRotatingRwa:
      return "rotating_rwa";
    case Frame::kRotatingCrt:
      return "rotating_crt";
  }
  return "unknown";
}

double DriftMatrix::periodicity_residual(int samples) const {
  if (is_constant()) return 0.0;
  double diff = 0.0;
  double scale = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = *period * (k + 0.37) / samples;
    const Mat4 a = eval(t);
    diff = std::max(diff, max_abs(eval(t + *period) - a));
    scale = std::max(scale, max_abs(a));
  }
  return scale > 0.0 ? diff / scale : diff;
}

Mat4 DriftMatrix::time_average(int samples) const {
  if (is_constant()) return eval(0.0);
  Mat4 acc = Mat4::Zero();
  for (int k = 0; k < samples; ++k) acc += eval(*period * k / samples);
  return acc / samples;
}

DriftMatrix DriftMatrix::constant(const Mat4& m, Frame frame) {
  DriftMatrix d;
  d.eval = [m](double) { return m; };
  d.frame = frame;
  return d;
}

NoiseDiffusion NoiseDiffusion::lab(const PhysicalParams& p) {
  NoiseDiffusion n;
  n.d.diagonal() << 0.0, p.gamma_m * (2.0 * p.n_m + 1.0), p.kappa * (2.0 * p.n_a + 1.0),
      p.kappa * (2.0 * p.n_a + 1.0);
  return n;
}

NoiseDiffusion NoiseDiffusion::rotating(const PhysicalParams& p) {
  NoiseDiffusion n;
  n.d.diagonal() << p.gamma_m * (p.n_m + 0.5), p.gamma_m * (p.n_m + 0.5),
      p.kappa * (2.0 * p.n_a + 1.0), p.kappa * (2.0 * p.n_a + 1.0);
  return n;
}

double CovarianceMatrix::symmetry_error() const {
  const double s = max_abs(v);
  const double e = max_abs(v - v.transpose());
  return s > 0.0 ? e / s : e;
}

double CovarianceMatrix::uncertainty_min_eigenvalue() const {
  Eigen::Matrix4cd h = v.cast<Complex>();
  h(0, 1) += 0.5 * kI;
  h(1, 0) -= 0.5 * kI;
  h(2, 3) += 0.5 * kI;
  h(3, 2) -= 0.5 * kI;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool CovarianceMatrix::physical(double tol) const {
  return symmetry_error() <= 1e-10 && uncertainty_min_eigenvalue() >= -tol &&
         v.diagonal().minCoeff() >= 0.0;
}

CovarianceMatrix CovarianceMatrix::vacuum() { return {Mat4::Identity() * 0.5}; }

CovarianceMatrix CovarianceMatrix::thermal(const PhysicalParams& p) {
  CovarianceMatrix c;
  c.v = Mat4::Zero();
  c.v.diagonal() << p.n_m + 0.5, p.n_m + 0.5, p.n_a + 0.5, p.n_a + 0.5;
  return c;
}

double squeezing_db(double variance) {
  if (!(variance > 0.0)) {
    throw ValidationError("squeezing_db: variance must be > 0");
  }
  return -10.0 * std::log10(variance / 0.5);
}

DriftMatrix lab_drift(const PhysicalParams& params, const meanfield::MeanFieldOrbit& orbit) {
  params.validate();
  if (orbit.samples.empty()) throw ValidationError("lab_drift: orbit has no samples");
  DriftMatrix d;
  d.frame = Frame::kLab;
  d.period = orbit.period;
  const PhysicalParams p = params;
  d.eval = [p, orbit](double t) {
    const auto s = orbit.at(t);
    const Complex G = p.g * s.a_mean / std::sqrt(2.0);
    const double gx = G.real();
    const double gy = G.imag();
    const double delta = p.delta0 - p.g * s.q_mean;
    const double tb = 2.0 * p.pump_detuning() * t - p.theta;
    const double lc = 2.0 * p.lambda_gain * std::cos(tb);
    const double ls = 2.0 * p.lambda_gain * std::sin(tb);
    Mat4 m;
    m << 0.0, p.omega_m, 0.0, 0.0,  //
        -p.omega_m, -p.gamma_m, 2.0 * gx, 2.0 * gy,  //
        -2.0 * gy, 0.0, -p.kappa + lc, delta - ls,  //
        2.0 * gx, 0.0, -delta - ls, -p.kappa - lc;
    return m;
  };
  return d;
}

DriftMatrix rotating_crt_drift(const EffectiveCoupling& c, const PhysicalParams& params) {
  params.validate();
  if (std::abs(params.omega_mod - 2.0 * params.omega_m) > 1e-12) {
    throw ValidationError("rotating_crt_drift: requires omega_mod = 2 omega_m");
  }
  if (std::abs(params.pump_detuning() - params.omega_m) > 1e-12) {
    throw ValidationError("rotating_crt_drift: requires delta_p = omega_m");
  }
  DriftMatrix d;
  d.frame = Frame::kRotatingCrt;
  d.period = params.period();
  const PhysicalParams p = params;
  d.eval = [p, c](double t) {
    const Complex e2 = std::exp(2.0 * kI * t);
    const Complex e4 = e2 * e2;
    const Complex a1 = kI * (c.g0 + c.g_plus1 * std::conj(e2) + c.g_minus1 * e2);
    const Complex a2 = kI * (c.g_plus1 + c.g0 * e2 + c.g_minus1 * e4);
    const Complex b1 = kI * (std::conj(c.g0) + std::conj(c.g_plus1) * e2 +
                             std::conj(c.g_minus1) * std::conj(e2));
    Mat4 m;
    m.block<2, 2>(0, 0) = quad_block(-0.5 * p.gamma_m, 0.5 * p.gamma_m * e2);
    m.block<2, 2>(0, 2) = quad_block(b1, a2);
    m.block<2, 2>(2, 0) = quad_block(a1, a2);
    m.block<2, 2>(2, 2) =
        quad_block(-p.kappa, 2.0 * p.lambda_gain * std::exp(kI * p.theta));
    return m;
  };
  return d;
}

namespace {

// No physicality precondition: the monodromy route propagates V0 = 0.
std::vector<CovarianceSample> propagate(const DriftMatrix& drift, const NoiseDiffusion& noise,
                                        const Mat4& v0, double t0, double t_end,
                                        std::size_t count, const PropagateOptions& opt) {
  Sym x = pack(v0);
  std::vector<CovarianceSample> out;
  out.reserve(count + 1);
  const Mat4 D = noise.d;
  const double guard = opt.trace_guard;
  ode::integrate_at<10>(
      [&](const Sym& s, Sym& ds, double t) {
        const Mat4 v = unpack(s);
        const double tr = v.trace();
        if (!(std::abs(tr) <= guard)) {
          std::ostringstream os;
          os << "covariance diverged at t = " << t << " (tr V = " << tr << ")";
          throw InstabilityError(os.str());
        }
        const Mat4 mv = drift(t) * v;
        ds = pack(mv + mv.transpose() + D);
      },
      x, ode::uniform_times(t0, t_end, count), {opt.rtol, opt.atol},
      [&](const Sym& s, double t) { out.push_back({t, {unpack(s)}}); });
  return out;
}

}  // namespace

std::vector<CovarianceSample> evolve_covariance(const DriftMatrix& drift,
                                                const NoiseDiffusion& noise,
                                                const CovarianceMatrix& v0, double t0,
                                                double t_end, std::size_t count,
                                                const PropagateOptions& opt) {
  if (!(t_end > t0)) throw ValidationError("evolve_covariance: t_end must exceed t0");
  if (count < 1) throw ValidationError("evolve_covariance: count must be >= 1");
  if ((noise.d.array() < 0.0).any()) throw ValidationError("noise diffusion must be >= 0");
  if (!v0.physical()) throw ValidationError("evolve_covariance: initial covariance is unphysical");
  return propagate(drift, noise, v0.v, t0, t_end, count, opt);
}

Mat4 monodromy(const DriftMatrix& drift, double period, double t0, const PropagateOptions& opt) {
  Full x{};
  for (int i = 0; i < 4; ++i) x[i * 4 + i] = 1.0;
  ode::integrate_at<16>(
      [&](const Full& s, Full& ds, double t) {
        const Eigen::Map<const Mat4> phi(s.data());
        Eigen::Map<Mat4> dphi(ds.data());
        dphi = drift(t) * phi;
      },
      x, {t0, t0 + period}, {opt.rtol, opt.atol}, [](const Full&, double) {});
  return Eigen::Map<const Mat4>(x.data());
}

std::vector<std::complex<double>> floquet_multipliers(const DriftMatrix& drift, double period,
                                                      const PropagateOptions& opt) {
  const Mat4 phi = monodromy(drift, period, 0.0, opt);
  Eigen::EigenSolver<Mat4> es(phi, false);
  std::vector<std::complex<double>> mu(4);
  for (int i = 0; i < 4; ++i) mu[i] = es.eigenvalues()[i];
  return mu;
}

PeriodicSteadyState periodic_steady_covariance(const DriftMatrix& drift,
                                               const NoiseDiffusion& noise,
                                               const SteadyOptions& opt) {
  if (opt.grid < 8) throw ValidationError("grid: must be >= 8");
  if (opt.check_periods < 2) throw ValidationError("check_periods: must be >= 2");
  const double tau = drift.period.value_or(opt.nominal_period);
  if (!(tau > 0.0)) throw ValidationError("period: must be > 0");

  const Mat4 phi = monodromy(drift, tau, 0.0, opt.propagate);
  Eigen::EigenSolver<Mat4> es(phi, false);
  std::vector<double> moduli(4);
  for (int i = 0; i < 4; ++i) moduli[i] = std::abs(es.eigenvalues()[i]);
  const double rho = *std::max_element(moduli.begin(), moduli.end());
  if (!(rho < 1.0)) {
    std::ostringstream os;
    os << "Floquet multiplier outside the unit disk: |mu| =";
    for (double m : moduli) os << ' ' << m;
    throw InstabilityError(os.str());
  }

  CovarianceMatrix start;
  std::string method;
  double t_start = 0.0;
  if (opt.mode == SteadyMode::kMonodromy) {
    // V(tau) = Phi V0 Phi^T + W with W the response from V0 = 0.
    const auto w = propagate(drift, noise, Mat4::Zero(), 0.0, tau, 1, opt.propagate).back();
    Eigen::Matrix<double, 16, 16> k = Eigen::Matrix<double, 16, 16>::Identity();
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d) k(a + 4 * b, c + 4 * d) -= phi(a, c) * phi(b, d);
    const Eigen::Matrix<double, 16, 1> wv = Eigen::Map<const Eigen::Matrix<double, 16, 1>>(
        w.cov.v.data());
    const Eigen::Matrix<double, 16, 1> sol = k.partialPivLu().solve(wv);
    start.v = Eigen::Map<const Mat4>(sol.data());
    start.v = 0.5 * (start.v + start.v.transpose()).eval();
    method = "floquet-monodromy";
  } else {
    if (opt.settle_periods < 1) throw ValidationError("settle_periods: must be >= 1");
    const CovarianceMatrix v0 = opt.v0.value_or(CovarianceMatrix::thermal(opt.params));
    t_start = opt.settle_periods * tau;
    start = evolve_covariance(drift, noise, v0, 0.0, t_start,
                              static_cast<std::size_t>(opt.settle_periods), opt.propagate)
                .back()
                .cov;
    method = "floquet-settle";
  }

  const std::size_t grid = static_cast<std::size_t>(opt.grid);
  const auto traj = propagate(drift, noise, start.v, t_start,
                                      t_start + opt.check_periods * tau,
                                      grid * static_cast<std::size_t>(opt.check_periods),
                                      opt.propagate);
  double periodicity = 0.0;
  for (int per = 0; per + 1 < opt.check_periods; ++per) {
    for (std::size_t k = 0; k < grid; ++k) {
      const Mat4& a = traj[per * grid + k].cov.v;
      const Mat4& b = traj[(per + 1) * grid + k].cov.v;
      periodicity = std::max(periodicity, max_abs(b - a) / max_abs(b));
    }
  }
  if (!(periodicity < opt.tol)) {
    std::ostringstream os;
    os << "covariance not periodic: residual " << periodicity << " >= " << opt.tol;
    throw ConvergenceError(os.str(), periodicity);
  }

  PeriodicSteadyState out;
  const std::size_t last = (static_cast<std::size_t>(opt.check_periods) - 1) * grid;
  out.samples.assign(traj.begin() + static_cast<long>(last),
                     traj.begin() + static_cast<long>(last + grid));
  std::vector<double> vq, vp;
  double sym = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& s : traj) {
    sym = std::max(sym, s.cov.symmetry_error());
    min_eig = std::min(min_eig, s.cov.uncertainty_min_eigenvalue());
  }
  for (const auto& s : out.samples) {
    vq.push_back(s.cov.var_q());
    vp.push_back(s.cov.var_p());
  }
  SqueezingReport& r = out.report;
  r.var_q = std::accumulate(vq.begin(), vq.end(), 0.0) / vq.size();
  r.var_p = std::accumulate(vp.begin(), vp.end(), 0.0) / vp.size();
  r.var_q_min = refined_min(vq);
  r.var_q_max = refined_max(vq);
  r.var_p_min = refined_min(vp);
  r.var_p_max = refined_max(vp);
  r.db_q = squeezing_db(r.var_q_min);
  r.db_p = squeezing_db(r.var_p_min);
  r.stable = true;
  r.method = method;
  r.residuals["periodicity"] = periodicity;
  r.residuals["symmetry"] = sym;
  r.residuals["uncertainty_min_eig"] = min_eig;
  r.residuals["spectral_radius"] = rho;
  r.multiplier_moduli = moduli;
  return out;
}

}  // namespace optosqueeze::floquet
