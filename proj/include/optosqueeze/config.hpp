#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "optosqueeze/params.hpp"

namespace optosqueeze {

enum class PhaseMatch { kNone, kMomentum, kPosition };

/// Couplings given directly as ratios (rotating-frame work) instead of drives.
struct CouplingSpec {
  std::optional<double> cooperativity;  // C
  std::optional<double> g0;             // |g0|, alternative to C
  double ratio = 0.0;                   // |g1|/|g0|
  double ratio_m1 = 0.0;                // |g_{-1}|/|g1|
};

struct Config {
  PhysicalParams params;
  std::optional<ExperimentalParams> experimental;
  PhaseMatch phase_match = PhaseMatch::kNone;
  std::optional<CouplingSpec> coupling;
  std::vector<std::string> warnings;
};

/// Flat key = value text. `#` starts a comment. Keys may be dotted
/// (`drive.E+1`) or grouped under a `[section]` header. Complex values accept
/// `re,im`, `mag@phase` or `mag∠phase`; real values accept a trailing `pi`.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Parses "1.5", "pi", "-0.5pi", "0.5*pi".
double parse_real(const std::string& text, const std::string& key);
Complex parse_complex(const std::string& text, const std::string& key);

}  // namespace optosqueeze
