#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "optosqueeze/coupling.hpp"
#include "optosqueeze/meanfield.hpp"
#include "optosqueeze/params.hpp"

namespace optosqueeze::floquet {

using Mat4 = Eigen::Matrix4d;

enum class Frame { kLab, kRotatingRwa, kRotatingCrt };

const char* frame_name(Frame f);

/// Drift evaluator t -> M(t) over the quadratures (q, p, x, y).
struct DriftMatrix {
  std::function<Mat4(double)> eval;
  Frame frame = Frame::kLab;
  std::optional<double> period;  // empty for a constant matrix

  Mat4 operator()(double t) const { return eval(t); }
  bool is_constant() const { return !period.has_value(); }
  /// max_t |M(t + tau) - M(t)| / max|M| over `samples` points; 0 when constant.
  double periodicity_residual(int samples = 64) const;
  /// Uniform-grid mean over one period (exact for trigonometric polynomials).
  Mat4 time_average(int samples = 512) const;

  static DriftMatrix constant(const Mat4& m, Frame frame);
};

struct NoiseDiffusion {
  Mat4 d = Mat4::Zero();

  /// diag[0, gamma_m(2n_m+1), kappa(2n_a+1), kappa(2n_a+1)].
  static NoiseDiffusion lab(const PhysicalParams& params);
  /// diag[gamma_m(n_m+1/2), gamma_m(n_m+1/2), kappa(2n_a+1), kappa(2n_a+1)]:
  /// the rotating quadratures share the mechanical noise equally.
  static NoiseDiffusion rotating(const PhysicalParams& params);
};

struct CovarianceMatrix {
  Mat4 v = Mat4::Identity() * 0.5;

  double var_q() const { return v(0, 0); }
  double var_p() const { return v(1, 1); }
  /// max |V - V^T| / max|V|.
  double symmetry_error() const;
  /// Smallest eigenvalue of V + (i/2) sigma (two-mode symplectic form).
  double uncertainty_min_eigenvalue() const;
  bool physical(double tol = 1e-8) const;

  static CovarianceMatrix vacuum();
  /// diag[n_m + 1/2, n_m + 1/2, n_a + 1/2, n_a + 1/2].
  static CovarianceMatrix thermal(const PhysicalParams& params);
};

struct CovarianceSample {
  double t = 0.0;
  CovarianceMatrix cov;
};

struct SqueezingReport {
  double var_q = 0.0;  // period mean in periodic frames
  double var_p = 0.0;
  double var_q_min = 0.0, var_q_max = 0.0;
  double var_p_min = 0.0, var_p_max = 0.0;
  double db_q = 0.0;  // from the minima
  double db_p = 0.0;
  bool stable = true;
  std::string method;
  std::map<std::string, double> residuals;
  std::vector<double> multiplier_moduli;
};

/// -10 log10(var / 0.5). Throws ValidationError for var <= 0.
double squeezing_db(double variance);

/// Lab-frame drift along the mean-field orbit (cubic interpolation of the orbit).
DriftMatrix lab_drift(const PhysicalParams& params, const meanfield::MeanFieldOrbit& orbit);

/// Rotating-frame drift keeping the counter-rotating e^{+-2it}, e^{4it}
/// terms. Requires omega_mod = 2 and delta_p = 1 (the frame assumes the
/// effective detuning equals omega_m).
DriftMatrix rotating_crt_drift(const EffectiveCoupling& coupling, const PhysicalParams& params);

struct PropagateOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double trace_guard = 1e12;
};

/// V' = M V + V M^T + D on the 10 independent entries of V.
std::vector<CovarianceSample> evolve_covariance(const DriftMatrix& drift,
                                                const NoiseDiffusion& noise,
                                                const CovarianceMatrix& v0, double t0,
                                                double t_end, std::size_t count,
                                                const PropagateOptions& opt = {});

/// Fundamental matrix over [t0, t0 + period].
Mat4 monodromy(const DriftMatrix& drift, double period, double t0 = 0.0,
               const PropagateOptions& opt = {});
std::vector<std::complex<double>> floquet_multipliers(const DriftMatrix& drift, double period,
                                                      const PropagateOptions& opt = {});

enum class SteadyMode {
  kMonodromy,  // solve V0 = Phi V0 Phi^T + W exactly, then verify periodicity
  kSettle,     // integrate settle_periods from V0, then verify periodicity
};

struct SteadyOptions {
  SteadyMode mode = SteadyMode::kMonodromy;
  int settle_periods = 300;
  int check_periods = 3;
  int grid = 512;
  double tol = 1e-5;
  /// Period used for constant drifts (monodromy stability test).
  double nominal_period = kPi;
  std::optional<CovarianceMatrix> v0;  // settle mode start; thermal when unset
  PhysicalParams params;                // only read for the thermal default
  PropagateOptions propagate;
};

struct PeriodicSteadyState {
  std::vector<CovarianceSample> samples;  // one period on the grid
  SqueezingReport report;
};

/// Throws InstabilityError when a Floquet multiplier has modulus >= 1 and
/// ConvergenceError when the settled covariance is not periodic to tol.
PeriodicSteadyState periodic_steady_covariance(const DriftMatrix& drift,
                                               const NoiseDiffusion& noise,
                                               const SteadyOptions& opt = {});

}  // namespace optosqueeze::floquet
