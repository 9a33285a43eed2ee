#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "squeezelab/analytic.hpp"
#include "squeezelab/cavity.hpp"
#include "squeezelab/montecarlo.hpp"
#include "squeezelab/photon.hpp"

namespace squeezelab::cli {

using Json = nlohmann::ordered_json;

/// Malformed or out-of-range run configuration (exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json load_json(const std::string& path);

double number_at(const Json& obj, std::string_view key);
double number_or(const Json& obj, std::string_view key, double fallback);
std::int64_t integer_or(const Json& obj, std::string_view key, std::int64_t fallback);
std::string string_or(const Json& obj, std::string_view key, std::string fallback);

/// Positive number or the string "inf".
double parse_eta(const Json& value);
Json eta_to_json(double eta);

/// Array of values, or {"min", "max", "points", "spacing": "log"|"linear"}.
/// All values must be finite and positive.
std::vector<double> parse_grid(const Json& value);

/// {"type": <scheme name>, ...fields}
SchemeConfig parse_scheme(const Json& value);
Json scheme_to_json(const SchemeConfig& scheme);

/// {"kappa", "omega"} or {"kappa", "eta", "gamma_over_delta"}, or both.
CavityConfig parse_cavity(const Json& value);

/// {"shape", "center_detuning", "bandwidth"}; bandwidth may be absent when
/// the caller scans it.
PulseSpectrum parse_pulse(const Json& value, double kappa);

/// Per-photon phase from "phi" or a "cavity" block.
std::optional<double> parse_phi(const Json& cfg);

}  // namespace squeezelab::cli
