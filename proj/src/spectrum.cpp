#include "optosqueeze/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Eigenvalues>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/rwa.hpp"

namespace optosqueeze::spectrum {

namespace {

constexpr Complex kI{0.0, 1.0};

struct Pair {
  double q_rp, q_th, p_rp, p_th;
};

Pair densities(const SpectralTransfer& t, const PhysicalParams& p) {
  const double na = p.n_a + 0.5;
  const double nm = p.n_m + 0.5;
  return {(std::norm(t.a1) + std::norm(t.b1)) * na, (std::norm(t.e1) + std::norm(t.f1)) * nm,
          (std::norm(t.a2) + std::norm(t.b2)) * na, (std::norm(t.e2) + std::norm(t.f2)) * nm};
}

}  // namespace

SpectralTransfer transfer_at(double omega, const EffectiveCoupling& c, const PhysicalParams& p) {
  SpectralTransfer t;
  t.omega = omega;
  const double lam = p.lambda_gain;
  const Complex eth = std::exp(-kI * p.theta);
  const Complex g0 = c.g0;
  const Complex g1 = c.g_plus1;
  t.u = Complex(0.5 * p.gamma_m, -omega);
  t.v = Complex(p.kappa, -omega);
  const double G2 = std::norm(g0) - std::norm(g1);
  t.alpha0 = g0 * eth - std::conj(g0) / eth;
  t.alpha1 = g1 * eth - std::conj(g1) / eth;
  t.beta0 = g0 * eth + std::conj(g0) / eth;
  t.beta1 = g1 * eth + std::conj(g1) / eth;
  t.gamma0 = g0 * g0 * eth + std::conj(g0) * std::conj(g0) / eth;
  t.gamma1 = g1 * g1 * eth + std::conj(g1) * std::conj(g1) / eth;

  const Complex uv = t.u * t.v;
  const Complex core = uv + G2;
  t.d = core * core - 4.0 * lam * lam * t.u * t.u;
  const double scale = std::norm(std::abs(uv) + std::abs(G2)) + 4.0 * lam * lam * std::norm(t.u);
  if (!(std::abs(t.d) > 1e-14 * scale)) {
    std::ostringstream os;
    os << "transfer function denominator vanishes near omega = " << omega
       << " (system at the stability boundary)";
    throw InstabilityError(os.str());
  }

  const double sk = std::sqrt(2.0 * p.kappa);
  const double sg = std::sqrt(p.gamma_m);
  const Complex gm = g0 - g1;
  const Complex gp = g0 + g1;
  const Complex vv = t.v * t.v - 4.0 * lam * lam;

  t.a1 = -sk * kI * (lam * (t.alpha0 - t.alpha1) * t.u + kI * core * gm.imag());
  t.b1 = sk * (lam * (t.beta0 - t.beta1) * t.u - core * gm.real());
  t.e1 = sg * (vv * t.u + G2 * t.v + lam * (t.gamma0 - t.gamma1));
  t.f1 = sg * kI * lam * (gm * gm * eth - std::conj(gm) * std::conj(gm) / eth);
  t.a2 = sk * (lam * (t.beta0 + t.beta1) * t.u + core * gp.real());
  t.b2 = sk * kI * (lam * (t.alpha0 + t.alpha1) * t.u - kI * core * gp.imag());
  t.e2 = sg * kI * lam * (gp * gp * eth - std::conj(gp) * std::conj(gp) / eth);
  t.f2 = sg * (vv * t.u + G2 * t.v - lam * (t.gamma0 - t.gamma1));
  for (Complex* x : {&t.a1, &t.b1, &t.e1, &t.f1, &t.a2, &t.b2, &t.e2, &t.f2}) *x /= t.d;
  return t;
}

Spectrum spectra(const std::vector<double>& grid, const EffectiveCoupling& c,
                 const PhysicalParams& p) {
  p.validate();
  Spectrum s;
  s.omega = grid;
  for (double w : grid) {
    if (!std::isfinite(w)) throw ValidationError("spectra: frequency grid must be finite");
    const Pair d = densities(transfer_at(w, c, p), p);
    s.sq_rp.push_back(d.q_rp);
    s.sq_th.push_back(d.q_th);
    s.sq_total.push_back(d.q_rp + d.q_th);
    s.sp_rp.push_back(d.p_rp);
    s.sp_th.push_back(d.p_th);
    s.sp_total.push_back(d.p_rp + d.p_th);
  }
  return s;
}

VarianceIntegral integrate_variance(const EffectiveCoupling& c, const PhysicalParams& p,
                                    const QuadratureConfig& cfg) {
  p.validate();
  const rwa::Mat4 m = rwa::tilde_matrix(c, p);
  const auto st = rwa::stability_check(m);
  if (!st.stable) throw InstabilityError("integrate_variance: drift matrix is not Hurwitz");

  auto sq = [&](double w) {
    const Pair d = densities(transfer_at(w, c, p), p);
    return d.q_rp + d.q_th;
  };
  auto sp = [&](double w) {
    const Pair d = densities(transfer_at(w, c, p), p);
    return d.p_rp + d.p_th;
  };

  double lam_max = 0.0;
  for (const auto& l : st.eigenvalues) lam_max = std::max(lam_max, std::abs(l));
  double W = cfg.width_factor *
             std::max({p.kappa, std::abs(c.g0), p.gamma_m, lam_max});

  // Breakpoints around every resonance: the resolvent has poles at
  // omega = -Im(lambda) with half width |Re(lambda)|.
  auto breakpoints = [&](double width) {
    std::vector<double> b{-width, width, 0.0};
    for (const auto& l : st.eigenvalues) {
      const double centre = -l.imag();
      const double hw = std::abs(l.real());
      b.push_back(centre);
      for (double off = 0.5 * hw; off < 2.0 * width; off *= 2.0) {
        b.push_back(centre - off);
        b.push_back(centre + off);
      }
    }
    std::sort(b.begin(), b.end());
    std::vector<double> out;
    for (double x : b) {
      if (x < -width || x > width) continue;
      if (out.empty() || x - out.back() > 1e-14 * width) out.push_back(x);
    }
    return out;
  };

  // Boost reports its error estimate in the units of the rescaled [-1, 1]
  // panel, so accuracy is measured as the gap between two independent rules
  // and panels are bisected by hand. The log-spaced breakpoints already
  // resolve the resonances, so most panels stop at the first level.
  using GK61 = boost::math::quadrature::gauss_kronrod<double, 61>;
  using GK31 = boost::math::quadrature::gauss_kronrod<double, 31>;
  auto panel_sum = [&](auto&& f, const std::vector<double>& b, double& err) {
    double coarse = 0.0;
    for (std::size_t i = 0; i + 1 < b.size(); ++i)
      coarse += std::abs(GK61::integrate(f, b[i], b[i + 1], 0));
    const double abs_tol = cfg.rel_tol * coarse / static_cast<double>(b.size());
    double total = 0.0;
    auto adapt = [&](auto&& self, double lo_x, double hi_x, int depth) -> void {
      const double hi = GK61::integrate(f, lo_x, hi_x, 0);
      const double lo = GK31::integrate(f, lo_x, hi_x, 0);
      const double gap = std::abs(hi - lo);
      if (depth >= 30 || gap <= std::max(cfg.rel_tol * std::abs(hi), abs_tol)) {
        total += hi;
        err += gap;
        return;
      }
      const double mid = 0.5 * (lo_x + hi_x);
      self(self, lo_x, mid, depth + 1);
      self(self, mid, hi_x, depth + 1);
    };
    for (std::size_t i = 0; i + 1 < b.size(); ++i) adapt(adapt, b[i], b[i + 1], 0);
    return total;
  };

  VarianceIntegral out;
  for (int it = 0; it <= cfg.max_doublings; ++it, W *= 2.0) {
    const auto b = breakpoints(W);
    double eq = 0.0, ep = 0.0;
    const double iq = panel_sum(sq, b, eq);
    const double ip = panel_sum(sp, b, ep);
    // Tail coefficient c from S(w) ~ c / w^2, each side; the change of the
    // estimate between W/2 and W bounds the tail model error.
    auto tail = [&](auto&& f, double& bound) {
      double t = 0.0;
      bound = 0.0;
      for (double s : {-1.0, 1.0}) {
        const double c_w = f(s * W) * W * W;
        const double c_h = f(s * W / 2.0) * W * W / 4.0;
        t += c_w / W;
        bound += std::abs(c_w - c_h) / W;
      }
      return t;
    };
    double bq = 0.0, bp = 0.0;
    const double tq = tail(sq, bq);
    const double tp = tail(sp, bp);
    out.var_q = (iq + tq) / (2.0 * kPi);
    out.var_p = (ip + tp) / (2.0 * kPi);
    out.tail_q = tq / (2.0 * kPi);
    out.tail_p = tp / (2.0 * kPi);
    out.tail_bound = std::max(bq / std::abs(iq + tq), bp / std::abs(ip + tp));
    out.quad_error = std::max(eq / std::abs(iq), ep / std::abs(ip));
    out.width = W;
    if (out.tail_bound < cfg.tail_tol) break;
    if (it == cfg.max_doublings) {
      std::ostringstream os;
      os << "spectral tail bound " << out.tail_bound << " above " << cfg.tail_tol;
      throw ConvergenceError(os.str(), out.tail_bound);
    }
  }
  if (!(out.quad_error < 1e3 * cfg.rel_tol)) {
    std::ostringstream os;
    os << "spectral quadrature did not converge: relative error " << out.quad_error;
    throw ConvergenceError(os.str(), out.quad_error);
  }
  return out;
}

}  // namespace optosqueeze::spectrum
