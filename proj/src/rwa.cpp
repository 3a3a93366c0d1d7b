#include "optosqueeze/rwa.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "optosqueeze/derived.hpp"
#include "optosqueeze/errors.hpp"

namespace optosqueeze::rwa {

Mat4 tilde_matrix(const EffectiveCoupling& c, const PhysicalParams& p) {
  const Complex gp = c.g_plus();
  const Complex gm = c.g_minus();
  const double lc = 2.0 * p.lambda_gain * std::cos(p.theta);
  const double ls = 2.0 * p.lambda_gain * std::sin(p.theta);
  const double hg = 0.5 * p.gamma_m;
  Mat4 m;
  m << -hg, 0.0, gm.imag(), -gm.real(),  //
      0.0, -hg, gp.real(), gp.imag(),  //
      -gp.imag(), -gm.real(), -p.kappa + lc, ls,  //
      gp.real(), -gm.imag(), ls, -p.kappa - lc;
  return m;
}

floquet::DriftMatrix build_tilde_drift(const EffectiveCoupling& coupling,
                                       const PhysicalParams& params) {
  params.validate();
  return floquet::DriftMatrix::constant(tilde_matrix(coupling, params),
                                        floquet::Frame::kRotatingRwa);
}

StabilityResult stability_check(const Mat4& m) {
  Eigen::EigenSolver<Mat4> es(m, false);
  StabilityResult r;
  double max_re = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    r.eigenvalues.push_back(es.eigenvalues()[i]);
    max_re = std::max(max_re, es.eigenvalues()[i].real());
  }
  r.stable = max_re < 0.0;
  r.margin = -max_re;
  return r;
}

StabilityResult stability_check(const EffectiveCoupling& coupling, const PhysicalParams& params) {
  StabilityResult r = stability_check(tilde_matrix(coupling, params));
  r.gain_below_threshold = params.lambda_bar() < 1.0;
  return r;
}

floquet::CovarianceMatrix steady_lyapunov(const Mat4& m, const Mat4& d) {
  const StabilityResult st = stability_check(m);
  if (!st.stable) {
    std::ostringstream os;
    os << "drift matrix is not Hurwitz; eigenvalues:";
    for (const auto& l : st.eigenvalues) os << " (" << l.real() << ", " << l.imag() << ")";
    throw InstabilityError(os.str());
  }
  // vec(M V + V M^T) = (I (x) M + M (x) I) vec V, column-major vec.
  Eigen::Matrix<double, 16, 16> k = Eigen::Matrix<double, 16, 16>::Zero();
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        k(a + 4 * b, c + 4 * b) += m(a, c);
        k(a + 4 * b, a + 4 * c) += m(b, c);
      }
    }
  }
  const Eigen::Matrix<double, 16, 1> rhs = -Eigen::Map<const Eigen::Matrix<double, 16, 1>>(d.data());
  const Eigen::Matrix<double, 16, 1> sol = k.partialPivLu().solve(rhs);
  floquet::CovarianceMatrix out;
  out.v = Eigen::Map<const Mat4>(sol.data());
  out.v = (0.5 * (out.v + out.v.transpose())).eval();
  const double res = (m * out.v + out.v * m.transpose() + d).cwiseAbs().maxCoeff();
  const double scale = d.cwiseAbs().maxCoeff();
  if (!(res <= 1e-10 * scale)) {
    std::ostringstream os;
    os << "Lyapunov residual " << res << " exceeds 1e-10 |D| = " << 1e-10 * scale;
    throw ConvergenceError(os.str(), res / scale);
  }
  return out;
}

floquet::CovarianceMatrix steady_covariance(const EffectiveCoupling& coupling,
                                            const PhysicalParams& params) {
  params.validate();
  return steady_lyapunov(tilde_matrix(coupling, params),
                         floquet::NoiseDiffusion::rotating(params).d);
}

AnalyticVariances analytic_variances(const EffectiveCoupling& c, const PhysicalParams& p) {
  p.validate();
  if (!c.squeezable()) throw ValidationError("analytic_variances: requires |g1| < |g0|");
  const double lb = p.lambda_bar();
  if (lb >= 1.0) throw InstabilityError("analytic_variances: requires lambda_bar < 1");
  const double a0 = std::abs(c.g0);
  const double a1 = std::abs(c.g_plus1);
  AnalyticVariances r;
  r.norm = 2.0 * (1.0 - lb * lb) * (a0 * a0 - a1 * a1);
  if (!(r.norm > 0.0)) throw ValidationError("analytic_variances: degenerate normalization");
  const double cross = 2.0 * a0 * a1;
  const double so = a0 * a0 + a1 * a1;
  r.s_omega_minus = (so - cross * std::cos(c.phi_r())) / r.norm;
  r.s_omega_plus = (so + cross * std::cos(c.phi_r())) / r.norm;
  const double sl = a0 * a0 * std::cos(c.phi_r0()) + a1 * a1 * std::cos(c.phi_r1());
  const double half = std::cos(c.theta - c.phi0() - c.phi1());
  r.s_lambda_minus = (sl - cross * half) / r.norm;
  r.s_lambda_plus = (sl + cross * half) / r.norm;
  r.var_q = r.s_omega_minus - lb * r.s_lambda_minus;
  r.var_p = r.s_omega_plus + lb * r.s_lambda_plus;
  return r;
}

double phase_matched_momentum_variance(double rho, double lambda_bar) {
  return 0.5 * (1.0 - rho) / (1.0 + rho) / (1.0 + lambda_bar);
}

DampedVariance momentum_variance_damped(double cooperativity, double r, double lambda_bar,
                                        double n_m, double gamma_over_kappa) {
  if (!(cooperativity > 0.0)) throw ValidationError("C: must be > 0");
  if (!(r >= 0.0) || !std::isfinite(r)) throw ValidationError("r: must be finite and >= 0");
  if (!(lambda_bar >= 0.0)) throw ValidationError("lambda_bar: must be >= 0");
  const double ct = c_tilde(cooperativity, r);
  const double e = std::exp(-r);
  const double one_l = 1.0 + lambda_bar;
  DampedVariance out;
  out.var_p = e * e / (2.0 * one_l) +
              (2.0 * n_m + 1.0) * (one_l / ct + gamma_over_kappa / (4.0 * one_l));
  out.valid = ct >= 20.0 * one_l;
  return out;
}

const char* regime_name(GainRegime r) {
  switch (r) {
    case GainRegime::kBelowThreshold:
      return "below_threshold";
    case GainRegime::kInteriorOptimum:
      return "interior_optimum";
    case GainRegime::kGainSaturated:
      return "gain_saturated";
  }
  return "unknown";
}

OptimalGain optimal_gain(double ct, double eta) {
  if (!(ct > 0.0)) throw ValidationError("c_tilde: must be > 0");
  if (!(eta > 0.0)) throw ValidationError("eta: must be > 0");
  OptimalGain g;
  g.raw = lambda_bar_opt_formula(ct, eta);
  g.c_tilde_thr = c_tilde_threshold(eta);
  g.c_tilde_ins = c_tilde_instability(eta);
  if (ct <= g.c_tilde_thr) {
    g.regime = GainRegime::kBelowThreshold;
  } else if (ct >= g.c_tilde_ins) {
    g.regime = GainRegime::kGainSaturated;
  } else {
    g.regime = GainRegime::kInteriorOptimum;
  }
  g.lambda_bar_opt = std::clamp(g.raw, 0.0, 1.0);
  return g;
}

}  // namespace optosqueeze::rwa
