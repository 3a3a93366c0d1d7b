#include "optosqueeze/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "optosqueeze/errors.hpp"
#include "optosqueeze/meanfield.hpp"

namespace optosqueeze {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::optional<int> harmonic_suffix(const std::string& key, const std::string& prefix) {
  if (key.rfind(prefix, 0) != 0) return std::nullopt;
  const std::string rest = key.substr(prefix.size());
  if (rest.empty()) return std::nullopt;
  std::size_t used = 0;
  int n = 0;
  try {
    n = std::stoi(rest, &used);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (used != rest.size()) return std::nullopt;
  return n;
}

}  // namespace

double parse_real(const std::string& raw, const std::string& key) {
  std::string s = trim(raw);
  double factor = 1.0;
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    factor = kPi;
    s = trim(s.substr(0, s.size() - 2));
    if (!s.empty() && s.back() == '*') s = trim(s.substr(0, s.size() - 1));
    if (s.empty() || s == "+") return factor;
    if (s == "-") return -factor;
  }
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ValidationError(key + ": cannot parse number '" + raw + "'");
  }
  if (used != s.size()) throw ValidationError(key + ": cannot parse number '" + raw + "'");
  return v * factor;
}

Complex parse_complex(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  static const std::string kAngle = "\xE2\x88\xA0";  // U+2220
  auto polar_at = [&](std::size_t pos, std::size_t width) {
    const double mag = parse_real(s.substr(0, pos), key);
    const double ph = parse_real(s.substr(pos + width), key);
    return std::polar(mag, ph);
  };
  if (auto pos = s.find(kAngle); pos != std::string::npos) return polar_at(pos, kAngle.size());
  if (auto pos = s.find('@'); pos != std::string::npos) return polar_at(pos, 1);
  if (auto pos = s.find(','); pos != std::string::npos) {
    return {parse_real(s.substr(0, pos), key), parse_real(s.substr(pos + 1), key)};
  }
  return {parse_real(s, key), 0.0};
}

Config parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ValidationError("config line " + std::to_string(lineno) + ": bad section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    if (kv.count(key) != 0) throw ValidationError(key + ": duplicate key");
    kv[key] = trim(line.substr(eq + 1));
  }

  Config cfg;
  PhysicalParams& p = cfg.params;
  ExperimentalParams exp;
  bool has_exp = false;
  CouplingSpec cs;
  bool has_coupling = false;
  std::set<std::string> physical_set;
  std::optional<double> lambda_bar;

  for (const auto& [key, value] : kv) {
    auto real = [&] { return parse_real(value, key); };
    if (key == "kappa") {
      p.kappa = real();
    } else if (key == "gamma_m") {
      p.gamma_m = real();
    } else if (key == "delta0") {
      p.delta0 = real();
    } else if (key == "g") {
      p.g = real();
    } else if (key == "lambda") {
      p.lambda_gain = real();
    } else if (key == "lambda_bar") {
      lambda_bar = real();
    } else if (key == "theta") {
      p.theta = real();
    } else if (key == "omega_mod") {
      p.omega_mod = real();
    } else if (key == "delta_p") {
      p.delta_p = real();
    } else if (key == "n_a") {
      p.n_a = real();
    } else if (key == "n_m") {
      p.n_m = real();
    } else if (key == "omega_m") {
      p.omega_m = real();
    } else if (key == "drive.phase_match") {
      if (value == "momentum") {
        cfg.phase_match = PhaseMatch::kMomentum;
      } else if (value == "position") {
        cfg.phase_match = PhaseMatch::kPosition;
      } else if (value == "none") {
        cfg.phase_match = PhaseMatch::kNone;
      } else {
        throw ValidationError(key + ": expected momentum, position or none");
      }
      continue;
    } else if (auto n = harmonic_suffix(key, "drive.E")) {
      p.drive[*n] = parse_complex(value, key);
    } else if (key.rfind("experimental.", 0) == 0) {
      has_exp = true;
      const std::string k = key.substr(13);
      if (k == "cavity_length") {
        exp.cavity_length = real();
      } else if (k == "finesse") {
        exp.finesse = real();
      } else if (k == "laser_wavelength") {
        exp.laser_wavelength = real();
      } else if (k == "mirror_mass") {
        exp.mirror_mass = real();
      } else if (k == "mech_freq_hz") {
        exp.mech_freq_hz = real();
      } else if (k == "quality_factor") {
        exp.quality_factor = real();
      } else if (k == "temperature") {
        exp.temperature = real();
      } else if (auto m = harmonic_suffix(k, "P")) {
        exp.sideband_powers[*m] = real();
      } else if (auto m2 = harmonic_suffix(k, "phase")) {
        exp.sideband_phases[*m2] = real();
      } else {
        throw ValidationError(key + ": unknown experimental key");
      }
      continue;
    } else if (key.rfind("coupling.", 0) == 0) {
      has_coupling = true;
      const std::string k = key.substr(9);
      if (k == "C") {
        cs.cooperativity = real();
      } else if (k == "g0") {
        cs.g0 = real();
      } else if (k == "ratio") {
        cs.ratio = real();
      } else if (k == "ratio_m1") {
        cs.ratio_m1 = real();
      } else {
        throw ValidationError(key + ": unknown coupling key");
      }
      continue;
    } else {
      throw ValidationError(key + ": unknown key");
    }
    physical_set.insert(key.rfind("drive.", 0) == 0 ? "drive" : key);
  }

  if (has_exp) {
    for (const char* k : {"kappa", "gamma_m", "g", "drive", "n_a", "n_m"}) {
      if (physical_set.count(k) != 0) {
        throw ValidationError(std::string(k) +
                              ": conflicts with the experimental block, which sets it");
      }
    }
    const PhysicalParams conv = from_experimental(exp, &cfg.warnings);
    p.kappa = conv.kappa;
    p.gamma_m = conv.gamma_m;
    p.g = conv.g;
    p.drive = conv.drive;
    p.n_a = conv.n_a;
    p.n_m = conv.n_m;
    cfg.experimental = exp;
  }
  if (lambda_bar) {
    if (physical_set.count("lambda") != 0) {
      throw ValidationError("lambda_bar: conflicts with lambda");
    }
    if (!(*lambda_bar >= 0.0)) throw ValidationError("lambda_bar: must be >= 0");
    p.lambda_gain = *lambda_bar * p.kappa / 2.0;
  }
  if (has_coupling) {
    if (cs.cooperativity && cs.g0) throw ValidationError("coupling.C: conflicts with coupling.g0");
    cfg.coupling = cs;
  }
  p.validate();
  if (cfg.phase_match != PhaseMatch::kNone) {
    p = meanfield::phase_match_drive(p, cfg.phase_match == PhaseMatch::kMomentum);
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace optosqueeze
