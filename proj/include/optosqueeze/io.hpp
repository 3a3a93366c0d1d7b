#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "optosqueeze/coupling.hpp"
#include "optosqueeze/floquet.hpp"
#include "optosqueeze/meanfield.hpp"
#include "optosqueeze/spectrum.hpp"

namespace optosqueeze::io {

using Json = nlohmann::ordered_json;

/// %.12g, the fixed output precision.
std::string fmt(double x);
/// x rounded to 12 significant digits (for JSON emission).
double round12(double x);

void write_orbit_csv(std::ostream& os, const std::vector<meanfield::MeanFieldState>& states);
void write_covariance_csv(std::ostream& os, const std::vector<floquet::CovarianceSample>& s);
void write_spectrum_csv(std::ostream& os, const spectrum::Spectrum& s);

Json to_json(const floquet::SqueezingReport& r);
Json to_json(const EffectiveCoupling& c);
Json to_json(const meanfield::FourierCoefficients& fc);
Json to_json(const meanfield::MeanFieldOrbit& orbit);
Json complex_json(Complex z);

/// Writes text to path, creating parent directories.
void write_file(const std::string& path, const std::string& text);

}  // namespace optosqueeze::io
