#include "optosqueeze/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "optosqueeze/errors.hpp"

namespace optosqueeze::io {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(fmt(x));
}

void write_orbit_csv(std::ostream& os, const std::vector<meanfield::MeanFieldState>& states) {
  os << "t,q_mean,p_mean,re_a,im_a\n";
  for (const auto& s : states) {
    os << fmt(s.t) << ',' << fmt(s.q_mean) << ',' << fmt(s.p_mean) << ','
       << fmt(s.a_mean.real()) << ',' << fmt(s.a_mean.imag()) << '\n';
  }
}

void write_covariance_csv(std::ostream& os, const std::vector<floquet::CovarianceSample>& s) {
  os << "t,Vqq,Vpp,Vxx,Vyy,Vqp,Vqx,Vqy,Vpx,Vpy,Vxy\n";
  for (const auto& x : s) {
    const auto& v = x.cov.v;
    os << fmt(x.t) << ',' << fmt(v(0, 0)) << ',' << fmt(v(1, 1)) << ',' << fmt(v(2, 2)) << ','
       << fmt(v(3, 3)) << ',' << fmt(v(0, 1)) << ',' << fmt(v(0, 2)) << ',' << fmt(v(0, 3))
       << ',' << fmt(v(1, 2)) << ',' << fmt(v(1, 3)) << ',' << fmt(v(2, 3)) << '\n';
  }
}

void write_spectrum_csv(std::ostream& os, const spectrum::Spectrum& s) {
  os << "omega,Sq_total,Sq_rp,Sq_th,Sp_total,Sp_rp,Sp_th\n";
  for (std::size_t i = 0; i < s.omega.size(); ++i) {
    os << fmt(s.omega[i]) << ',' << fmt(s.sq_total[i]) << ',' << fmt(s.sq_rp[i]) << ','
       << fmt(s.sq_th[i]) << ',' << fmt(s.sp_total[i]) << ',' << fmt(s.sp_rp[i]) << ','
       << fmt(s.sp_th[i]) << '\n';
  }
}

Json complex_json(Complex z) { return Json::array({round12(z.real()), round12(z.imag())}); }

Json to_json(const floquet::SqueezingReport& r) {
  Json j;
  j["method"] = r.method;
  j["stable"] = r.stable;
  j["var_q"] = round12(r.var_q);
  j["var_p"] = round12(r.var_p);
  j["var_q_min"] = round12(r.var_q_min);
  j["var_q_max"] = round12(r.var_q_max);
  j["var_p_min"] = round12(r.var_p_min);
  j["var_p_max"] = round12(r.var_p_max);
  j["db_q"] = round12(r.db_q);
  j["db_p"] = round12(r.db_p);
  Json res = Json::object();
  for (const auto& [k, v] : r.residuals) res[k] = round12(v);
  j["residuals"] = res;
  if (!r.multiplier_moduli.empty()) {
    Json mu = Json::array();
    for (double m : r.multiplier_moduli) mu.push_back(round12(m));
    j["multiplier_moduli"] = mu;
  }
  return j;
}

Json to_json(const EffectiveCoupling& c) {
  Json j;
  j["g_minus1"] = complex_json(c.g_minus1);
  j["g0"] = complex_json(c.g0);
  j["g_plus1"] = complex_json(c.g_plus1);
  j["theta"] = round12(c.theta);
  j["phi_r"] = round12(c.phi_r());
  j["phi_r0"] = round12(c.phi_r0());
  j["phi_r1"] = round12(c.phi_r1());
  j["ratio"] = round12(c.ratio());
  const double r = c.squeeze_r();
  j["r"] = std::isfinite(r) ? Json(round12(r)) : Json("inf");
  return j;
}

Json to_json(const meanfield::FourierCoefficients& fc) {
  Json j = Json::object();
  const char names[3] = {'q', 'p', 'a'};
  for (char o : names) {
    for (int n = -fc.harmonics; n <= fc.harmonics; ++n) {
      for (int k = 0; k <= fc.orders; ++k) {
        const Complex z = o == 'q' ? fc.q_at(n, k) : o == 'p' ? fc.p_at(n, k) : fc.a_at(n, k);
        j[std::string(1, o) + "," + std::to_string(n) + "," + std::to_string(k)] =
            complex_json(z);
      }
    }
  }
  return j;
}

Json to_json(const meanfield::MeanFieldOrbit& orbit) {
  Json j;
  j["period"] = round12(orbit.period);
  j["t0"] = round12(orbit.t0);
  j["grid"] = orbit.samples.size();
  j["periodicity_residual"] = round12(orbit.periodicity_residual);
  j["q_amplitude"] = round12(orbit.q_amplitude());
  j["p_amplitude"] = round12(orbit.p_amplitude());
  j["a_amplitude"] = round12(orbit.a_amplitude());
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << text;
}

}  // namespace optosqueeze::io
