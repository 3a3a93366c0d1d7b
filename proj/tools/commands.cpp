#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "optosqueeze/bogoliubov.hpp"
#include "optosqueeze/config.hpp"
#include "optosqueeze/derived.hpp"
#include "optosqueeze/errors.hpp"
#include "optosqueeze/floquet.hpp"
#include "optosqueeze/io.hpp"
#include "optosqueeze/meanfield.hpp"
#include "optosqueeze/rwa.hpp"
#include "optosqueeze/spectrum.hpp"

namespace optosqueeze::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using io::Json;

std::string resolve_out_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("OPTOSQUEEZE_OUT_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// ---------------------------------------------------------------------------
// Rotating-frame point evaluation, shared by `rwa` and `sweep`.

struct RwaInputs {
  std::string config;
  std::optional<double> ratio, ratio_m1, cooperativity, g0, lambda_bar;
  std::optional<double> kappa, gamma_m, n_m, n_a;
};

struct RwaPoint {
  PhysicalParams params;
  double cooperativity = 1e4;
  double ratio = 0.0;
  double ratio_m1 = 0.0;
  std::optional<EffectiveCoupling> fixed;  // couplings taken from the drive

  EffectiveCoupling coupling() const {
    if (fixed) return *fixed;
    return EffectiveCoupling::from_cooperativity(cooperativity, params.kappa, params.gamma_m,
                                                 ratio, ratio_m1, params.theta);
  }
};

RwaPoint make_point(const RwaInputs& in) {
  RwaPoint pt;
  PhysicalParams& p = pt.params;
  p.kappa = 0.1;
  p.gamma_m = 1e-6;
  p.delta0 = 1.0;
  p.n_m = 100.0;
  p.n_a = 0.0;
  p.theta = kPi;
  std::optional<CouplingSpec> spec;
  if (!in.config.empty()) {
    Config cfg = load_config(in.config);
    p = cfg.params;
    spec = cfg.coupling;
    if (!spec && p.has_drive()) {
      const auto fc = meanfield::fourier_perturbation_coefficients(
          p, 6, std::max(1, p.max_harmonic()));
      pt.fixed = meanfield::effective_coupling(fc, p);
    }
  }
  if (in.kappa) p.kappa = *in.kappa;
  if (in.gamma_m) p.gamma_m = *in.gamma_m;
  if (in.n_m) p.n_m = *in.n_m;
  if (in.n_a) p.n_a = *in.n_a;
  if (in.lambda_bar) {
    if (!(*in.lambda_bar >= 0.0)) throw ValidationError("lambda-bar: must be >= 0");
    p.lambda_gain = *in.lambda_bar * p.kappa / 2.0;
  }
  p.validate();
  if (spec) {
    if (spec->cooperativity) pt.cooperativity = *spec->cooperativity;
    if (spec->g0) pt.cooperativity = 4.0 * *spec->g0 * *spec->g0 / (p.kappa * p.gamma_m);
    pt.ratio = spec->ratio;
    pt.ratio_m1 = spec->ratio_m1;
  }
  const bool override_coupling = in.ratio || in.ratio_m1 || in.cooperativity || in.g0;
  if (override_coupling) pt.fixed.reset();
  if (in.cooperativity && in.g0) throw ValidationError("C: conflicts with --g0");
  if (in.cooperativity) pt.cooperativity = *in.cooperativity;
  if (in.g0) pt.cooperativity = 4.0 * *in.g0 * *in.g0 / (p.kappa * p.gamma_m);
  if (in.ratio) pt.ratio = *in.ratio;
  if (in.ratio_m1) pt.ratio_m1 = *in.ratio_m1;
  if (!(pt.cooperativity >= 0.0)) throw ValidationError("C: must be >= 0");
  if (!(pt.ratio >= 0.0)) throw ValidationError("ratio: must be >= 0");
  return pt;
}

floquet::SqueezingReport constant_report(double var_q, double var_p, const std::string& method) {
  floquet::SqueezingReport r;
  r.method = method;
  r.var_q = r.var_q_min = r.var_q_max = var_q;
  r.var_p = r.var_p_min = r.var_p_max = var_p;
  r.db_q = std::isfinite(var_q) ? floquet::squeezing_db(var_q) : kNaN;
  r.db_p = std::isfinite(var_p) ? floquet::squeezing_db(var_p) : kNaN;
  r.stable = true;
  return r;
}

floquet::SqueezingReport evaluate(const RwaPoint& pt, const std::string& method) {
  const PhysicalParams& p = pt.params;
  const EffectiveCoupling c = pt.coupling();
  if (method == "lyapunov") {
    const auto cov = rwa::steady_covariance(c, p);
    auto r = constant_report(cov.var_q(), cov.var_p(), method);
    r.residuals["uncertainty_min_eig"] = cov.uncertainty_min_eigenvalue();
    r.residuals["product_qp"] = cov.var_q() * cov.var_p();
    return r;
  }
  if (method == "analytic") {
    const auto a = rwa::analytic_variances(c, p);
    return constant_report(a.var_q, a.var_p, method);
  }
  if (method == "bogoliubov") {
    const auto mode = bogoliubov::to_bogoliubov(c, p.n_m);
    const auto ad = bogoliubov::adiabatic_momentum_variance(mode, p);
    auto r = constant_report(kNaN, bogoliubov::back_transform_variance(ad.var_pb, mode.r), method);
    r.residuals["kappa_over_gb"] = ad.kappa_over_gb;
    r.residuals["adiabatic"] = ad.adiabatic ? 1.0 : 0.0;
    return r;
  }
  if (method == "spectrum") {
    const auto v = spectrum::integrate_variance(c, p);
    auto r = constant_report(v.var_q, v.var_p, method);
    r.residuals["tail_bound"] = v.tail_bound;
    r.residuals["quad_error"] = v.quad_error;
    return r;
  }
  if (method == "damped") {
    if (!c.squeezable()) throw ValidationError("damped: requires |g1| < |g0|");
    const double cc = 4.0 * std::norm(c.g0) / (p.kappa * p.gamma_m);
    const auto d = rwa::momentum_variance_damped(cc, c.squeeze_r(), p.lambda_bar(), p.n_m,
                                                 p.gamma_m / p.kappa);
    if (p.lambda_bar() >= 1.0) throw InstabilityError("damped: requires lambda_bar < 1");
    auto r = constant_report(kNaN, d.var_p, method);
    r.residuals["valid"] = d.valid ? 1.0 : 0.0;
    return r;
  }
  throw ValidationError("method: unknown '" + method + "'");
}

double lambda_bar_opt_for(const RwaPoint& pt) {
  const EffectiveCoupling c = pt.coupling();
  if (!c.squeezable() || !(std::abs(c.g0) > 0.0)) return kNaN;
  const double r = c.squeeze_r();
  const double cc = 4.0 * std::norm(c.g0) / (pt.params.kappa * pt.params.gamma_m);
  const double ct = c_tilde(cc, r);
  const double eta = eta_factor(r, pt.params.n_m, pt.params.gamma_m / pt.params.kappa);
  return rwa::optimal_gain(ct, eta).lambda_bar_opt;
}

void add_rwa_flags(CLI::App* cmd, RwaInputs& in) {
  cmd->add_option("--config", in.config, "Config file")->check(CLI::ExistingFile);
  cmd->add_option("--ratio", in.ratio, "|g1|/|g0| (tanh r)");
  cmd->add_option("--ratio-m1", in.ratio_m1, "|g-1|/|g1|");
  cmd->add_option("--C", in.cooperativity, "Cooperativity 4|g0|^2/(kappa gamma_m)");
  cmd->add_option("--g0", in.g0, "|g0| in units of omega_m");
  cmd->add_option("--lambda-bar", in.lambda_bar, "Normalized OPA gain 2 Lambda/kappa");
  cmd->add_option("--kappa", in.kappa, "Cavity decay rate");
  cmd->add_option("--gamma-m", in.gamma_m, "Mechanical damping rate");
  cmd->add_option("--n-m", in.n_m, "Thermal phonon number");
  cmd->add_option("--n-a", in.n_a, "Thermal photon number");
}

// ---------------------------------------------------------------------------

struct Axis {
  std::string name;
  std::vector<double> values;
};

Axis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ValidationError("axis: expected name=start:stop:count");
  Axis a;
  a.name = spec.substr(0, eq);
  static const std::vector<std::string> known = {"lambda_bar", "tanh_r", "C", "n_m",
                                                 "gamma_m", "kappa"};
  if (std::find(known.begin(), known.end(), a.name) == known.end()) {
    throw ValidationError("axis: unknown name '" + a.name + "'");
  }
  const std::string body = spec.substr(eq + 1);
  if (body.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw ValidationError("axis: expected start:stop:count");
    const double lo = parse_real(parts[0], "axis " + a.name);
    const double hi = parse_real(parts[1], "axis " + a.name);
    const double cnt = parse_real(parts[2], "axis " + a.name);
    if (!(cnt >= 1.0) || cnt != std::floor(cnt)) throw ValidationError("axis: count must be >= 1");
    const int n = static_cast<int>(cnt);
    for (int k = 0; k < n; ++k) {
      a.values.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
    }
  } else {
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) a.values.push_back(parse_real(tok, "axis " + a.name));
  }
  if (a.values.empty()) throw ValidationError("axis: no values");
  return a;
}

void apply_axis(RwaPoint& pt, const std::string& name, double v) {
  if (name == "lambda_bar") {
    pt.params.lambda_gain = v * pt.params.kappa / 2.0;
  } else if (name == "tanh_r") {
    pt.ratio = v;
  } else if (name == "C") {
    pt.cooperativity = v;
  } else if (name == "n_m") {
    pt.params.n_m = v;
  } else if (name == "gamma_m") {
    pt.params.gamma_m = v;
  } else if (name == "kappa") {
    const double lb = pt.params.lambda_bar();
    pt.params.kappa = v;
    pt.params.lambda_gain = lb * v / 2.0;
  }
  pt.fixed.reset();
}

// ---------------------------------------------------------------------------

int dispatch_error(const std::exception& e, std::ostream& err) {
  if (dynamic_cast<const ValidationError*>(&e) != nullptr) {
    err << "validation error: " << e.what() << '\n';
    return 2;
  }
  if (dynamic_cast<const InstabilityError*>(&e) != nullptr) {
    err << "instability: " << e.what() << '\n';
    return 3;
  }
  if (dynamic_cast<const ConvergenceError*>(&e) != nullptr) {
    err << "non-convergence: " << e.what() << '\n';
    return 4;
  }
  err << "error: " << e.what() << '\n';
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mechanical squeezing in a modulated, parametrically driven optomechanical cavity"};
  app.require_subcommand(1);

  std::string out_dir_flag;
  std::string format = "csv";
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", out_dir_flag, "Output directory");
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  };

  // meanfield
  auto* mf = app.add_subcommand("meanfield", "Settle and export the periodic mean-field orbit");
  std::string mf_config;
  meanfield::OrbitOptions mf_opt;
  int mf_orders = 6;
  int mf_harmonics = -1;
  mf->add_option("--config", mf_config, "Config file")->required()->check(CLI::ExistingFile);
  mf->add_option("--settle", mf_opt.settle_periods, "Settling periods")->check(CLI::PositiveNumber);
  mf->add_option("--sample", mf_opt.sample_periods, "Exported periods")->check(CLI::PositiveNumber);
  mf->add_option("--grid", mf_opt.grid, "Grid points per period");
  mf->add_option("--tol", mf_opt.tol, "Orbit periodicity tolerance");
  mf->add_option("--extensions", mf_opt.max_extensions, "Extension attempts of 100 periods");
  mf->add_option("--orders", mf_orders, "Perturbation order J");
  mf->add_option("--harmonics", mf_harmonics, "Harmonic cutoff N (default: drive support, >= 1)");
  add_common(mf);

  // floquet
  auto* fl = app.add_subcommand("floquet", "Periodic steady covariance in the time domain");
  std::string fl_config;
  std::string fl_scenario = "both";
  std::string fl_frame = "lab";
  std::string fl_mode = "monodromy";
  meanfield::OrbitOptions fl_orbit;
  floquet::SteadyOptions fl_opt;
  fl->add_option("--config", fl_config, "Config file")->required()->check(CLI::ExistingFile);
  fl->add_option("--scenario", fl_scenario, "opa-only | mod-only | both")
      ->check(CLI::IsMember({"opa-only", "mod-only", "both"}));
  fl->add_option("--frame", fl_frame, "lab (mean-field drift) | crt (rotating frame with CRT)")
      ->check(CLI::IsMember({"lab", "crt"}));
  fl->add_option("--mode", fl_mode, "monodromy | settle")
      ->check(CLI::IsMember({"monodromy", "settle"}));
  fl->add_option("--settle", fl_orbit.settle_periods, "Mean-field settling periods");
  fl->add_option("--cov-settle", fl_opt.settle_periods, "Covariance settling periods (settle mode)");
  fl->add_option("--grid", fl_opt.grid, "Covariance samples per period");
  fl->add_option("--tol", fl_opt.tol, "Covariance periodicity tolerance");
  add_common(fl);

  // rwa
  auto* rw = app.add_subcommand("rwa", "Rotating-frame steady state by one or all routes");
  RwaInputs rw_in;
  std::string rw_method = "lyapunov";
  bool rw_compare = false;
  double rw_bound = 1e-2;
  add_rwa_flags(rw, rw_in);
  rw->add_option("--method", rw_method, "lyapunov | analytic | bogoliubov | spectrum | damped")
      ->check(CLI::IsMember({"lyapunov", "analytic", "bogoliubov", "spectrum", "damped"}));
  rw->add_flag("--compare-all", rw_compare, "Run the four routes and report pairwise residuals");
  rw->add_option("--bound", rw_bound, "Largest accepted pairwise relative residual");
  add_common(rw);

  // sweep
  auto* sw = app.add_subcommand("sweep", "Grid of rotating-frame momentum variances");
  RwaInputs sw_in;
  std::vector<std::string> sw_axes;
  std::string sw_method = "lyapunov";
  unsigned sw_jobs = std::max(1u, std::thread::hardware_concurrency());
  add_rwa_flags(sw, sw_in);
  sw->add_option("--axis", sw_axes, "name=start:stop:count or name=v1,v2,...")->required();
  sw->add_option("--method", sw_method, "Route used per point")
      ->check(CLI::IsMember({"lyapunov", "analytic", "bogoliubov", "spectrum", "damped"}));
  sw->add_option("--jobs", sw_jobs, "Worker threads")->check(CLI::PositiveNumber);
  add_common(sw);

  std::vector<std::string> argv_tail(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(argv_tail.begin(), argv_tail.end());
  try {
    app.parse(argv_tail);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "validation error: " << e.what() << '\n';
    return 2;
  }

  try {
    const std::string out_dir = resolve_out_dir(out_dir_flag);

    if (*mf) {
      const Config cfg = load_config(mf_config);
      const PhysicalParams& p = cfg.params;
      const auto orbit = meanfield::detect_periodic_orbit(p, mf_opt);
      Json report;
      report["orbit"] = io::to_json(orbit);
      report["coupling_numeric"] = io::to_json(meanfield::effective_coupling(orbit, p));
      const bool recursion_ok =
          std::abs(p.pump_detuning() - p.omega_mod / 2.0) <= 1e-12 * p.omega_mod;
      std::optional<meanfield::FourierCoefficients> fc;
      if (recursion_ok && p.has_drive()) {
        const int n = mf_harmonics >= 0 ? mf_harmonics : std::max(1, p.max_harmonic());
        fc = meanfield::fourier_perturbation_coefficients(p, mf_orders, n);
        const auto cmp = meanfield::compare_couplings(*fc, orbit, p);
        const auto dev = meanfield::compare_expansion(*fc, orbit, p);
        report["coupling_analytic"] = io::to_json(cmp.analytic);
        report["coupling_discrepancy"] = io::round12(cmp.max_relative_difference);
        report["expansion_deviation"] = {{"q", io::round12(dev.q)},
                                         {"p", io::round12(dev.p)},
                                         {"a", io::round12(dev.a)}};
      }
      for (const auto& w : cfg.warnings) report["warnings"].push_back(w);
      if (format == "csv") {
        std::ostringstream traj, one;
        io::write_orbit_csv(traj, orbit.trajectory);
        io::write_orbit_csv(one, orbit.samples);
        io::write_file(join(out_dir, "trajectory.csv"), traj.str());
        io::write_file(join(out_dir, "orbit.csv"), one.str());
        if (fc) io::write_file(join(out_dir, "coefficients.json"), io::to_json(*fc).dump(2) + "\n");
        io::write_file(join(out_dir, "orbit.json"), report.dump(2) + "\n");
      }
      out << report.dump(2) << '\n';
      return 0;
    }

    if (*fl) {
      const Config cfg = load_config(fl_config);
      PhysicalParams p = cfg.params;
      fl_opt.mode = fl_mode == "settle" ? floquet::SteadyMode::kSettle
                                        : floquet::SteadyMode::kMonodromy;
      fl_opt.params = p;
      floquet::PeriodicSteadyState st;
      Json report;
      if (fl_frame == "lab") {
        if (fl_scenario == "opa-only") {
          for (auto& [n, amp] : p.drive) {
            if (n != 0) amp = 0.0;
          }
        } else if (fl_scenario == "mod-only") {
          p.lambda_gain = 0.0;
        }
        // The matched phases depend on the gain and on which sidebands are on.
        if (cfg.phase_match != PhaseMatch::kNone) {
          p = meanfield::phase_match_drive(p, cfg.phase_match == PhaseMatch::kMomentum);
        }
        fl_opt.params = p;
        const auto orbit = meanfield::detect_periodic_orbit(p, fl_orbit);
        st = floquet::periodic_steady_covariance(floquet::lab_drift(p, orbit),
                                                 floquet::NoiseDiffusion::lab(p), fl_opt);
        report = io::to_json(st.report);
        report["scenario"] = fl_scenario;
        report["frame"] = "lab";
        report["orbit_residual"] = io::round12(orbit.periodicity_residual);
      } else {
        if (!cfg.coupling) throw ValidationError("--frame crt needs a [coupling] block");
        RwaInputs in;
        in.config = fl_config;
        const RwaPoint pt = make_point(in);
        const EffectiveCoupling c = pt.coupling();
        st = floquet::periodic_steady_covariance(floquet::rotating_crt_drift(c, pt.params),
                                                 floquet::NoiseDiffusion::rotating(pt.params),
                                                 fl_opt);
        const auto rwa_cov = rwa::steady_covariance(c, pt.params);
        report = io::to_json(st.report);
        report["frame"] = "rotating_crt";
        report["rwa_var_p"] = io::round12(rwa_cov.var_p());
        report["rwa_var_q"] = io::round12(rwa_cov.var_q());
        report["crt_vs_rwa_p"] =
            io::round12(std::abs(st.report.var_p - rwa_cov.var_p()) / rwa_cov.var_p());
      }
      if (format == "csv") {
        std::ostringstream cov;
        io::write_covariance_csv(cov, st.samples);
        io::write_file(join(out_dir, "covariance.csv"), cov.str());
        io::write_file(join(out_dir, "report.json"), report.dump(2) + "\n");
      }
      out << report.dump(2) << '\n';
      return 0;
    }

    if (*rw) {
      const RwaPoint pt = make_point(rw_in);
      Json report;
      if (!rw_compare) {
        report = io::to_json(evaluate(pt, rw_method));
      } else {
        const std::vector<std::string> routes = {"lyapunov", "analytic", "bogoliubov",
                                                 "spectrum"};
        std::map<std::string, floquet::SqueezingReport> rep;
        for (const auto& m : routes) rep[m] = evaluate(pt, m);
        Json res = Json::object();
        double worst = 0.0;
        for (std::size_t i = 0; i < routes.size(); ++i) {
          for (std::size_t j = i + 1; j < routes.size(); ++j) {
            const double a = rep[routes[i]].var_p;
            const double b = rep[routes[j]].var_p;
            const double r = std::abs(a - b) / std::abs(b);
            res[routes[i] + "_vs_" + routes[j]] = io::round12(r);
            worst = std::max(worst, r);
          }
        }
        for (const auto& m : routes) report["reports"][m] = io::to_json(rep[m]);
        report["residuals"] = res;
        report["max_residual"] = io::round12(worst);
        report["bound"] = rw_bound;
        report["within_bound"] = worst < rw_bound;
        out << report.dump(2) << '\n';
        if (format == "csv") io::write_file(join(out_dir, "rwa.json"), report.dump(2) + "\n");
        if (!(worst < rw_bound)) {
          err << "non-convergence: routes disagree, max residual " << worst << " >= bound "
              << rw_bound << '\n';
          return 4;
        }
        return 0;
      }
      report["lambda_bar_opt"] = io::round12(lambda_bar_opt_for(pt));
      if (format == "csv") io::write_file(join(out_dir, "rwa.json"), report.dump(2) + "\n");
      out << report.dump(2) << '\n';
      return 0;
    }

    if (*sw) {
      const RwaPoint base = make_point(sw_in);
      std::vector<Axis> axes;
      for (const auto& s : sw_axes) axes.push_back(parse_axis(s));
      std::vector<RwaPoint> points{base};
      for (const auto& ax : axes) {
        std::vector<RwaPoint> next;
        for (const auto& pt : points) {
          for (double v : ax.values) {
            RwaPoint q = pt;
            apply_axis(q, ax.name, v);
            next.push_back(q);
          }
        }
        points = std::move(next);
      }
      struct Row {
        double var_p = kNaN;
        bool stable = false;
        std::string error;
        int code = 0;
      };
      std::vector<Row> rows(points.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
          try {
            rows[i].var_p = evaluate(points[i], sw_method).var_p;
            rows[i].stable = true;
          } catch (const InstabilityError&) {
            rows[i].stable = false;
          } catch (const std::exception& e) {
            std::ostringstream msg;
            rows[i].code = dispatch_error(e, msg);
            rows[i].error = msg.str();
          }
        }
      };
      const unsigned jobs = std::min<unsigned>(sw_jobs, static_cast<unsigned>(points.size()));
      std::vector<std::thread> pool;
      for (unsigned k = 1; k < jobs; ++k) pool.emplace_back(worker);
      worker();
      for (auto& t : pool) t.join();
      for (const auto& r : rows) {
        if (r.code != 0) {
          err << r.error;
          return r.code;
        }
      }

      std::ostringstream csv;
      csv << "lambda_bar,tanh_r,C,var_p,db_p,stable,lambda_bar_opt\n";
      std::size_t stable = 0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const RwaPoint& pt = points[i];
        const double cc = pt.fixed ? 4.0 * std::norm(pt.fixed->g0) /
                                         (pt.params.kappa * pt.params.gamma_m)
                                   : pt.cooperativity;
        const double ratio = pt.fixed ? pt.fixed->ratio() : pt.ratio;
        const double vp = rows[i].var_p;
        stable += rows[i].stable ? 1 : 0;
        csv << io::fmt(pt.params.lambda_bar()) << ',' << io::fmt(ratio) << ',' << io::fmt(cc)
            << ',' << io::fmt(vp) << ','
            << io::fmt(rows[i].stable && vp > 0.0 ? floquet::squeezing_db(vp) : kNaN) << ','
            << (rows[i].stable ? 1 : 0) << ',' << io::fmt(lambda_bar_opt_for(pt)) << '\n';
      }
      Json summary;
      summary["points"] = points.size();
      summary["stable_points"] = stable;
      summary["method"] = sw_method;
      if (format == "csv") {
        const std::string path = join(out_dir, "grid.csv");
        io::write_file(path, csv.str());
        summary["file"] = path;
        out << summary.dump(2) << '\n';
      } else {
        out << csv.str();
      }
      return 0;
    }
  } catch (const std::exception& e) {
    return dispatch_error(e, err);
  }
  return 1;
}

}  // namespace optosqueeze::cli
