#include "squeezelab/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <type_traits>
#include <variant>

#include "squeezelab/optimize.hpp"

namespace squeezelab::cli {

namespace {

const Json& member(const Json& obj, std::string_view key) {
  if (!obj.is_object()) throw ConfigError("expected a JSON object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing key '" + std::string(key) + "'");
  return *it;
}

double as_number(const Json& v, std::string_view key) {
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + std::string(key) + "' must be finite");
  return x;
}

}  // namespace

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

double number_at(const Json& obj, std::string_view key) {
  return as_number(member(obj, key), key);
}

double number_or(const Json& obj, std::string_view key, double fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  return as_number(obj.at(key), key);
}

std::int64_t integer_or(const Json& obj, std::string_view key, std::int64_t fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const double x = as_number(obj.at(key), key);
  if (x != std::floor(x) || std::abs(x) > 9e15) {
    throw ConfigError("'" + std::string(key) + "' must be an integer");
  }
  return static_cast<std::int64_t>(x);
}

std::string string_or(const Json& obj, std::string_view key, std::string fallback) {
  if (!obj.is_object() || !obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError("'" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

double parse_eta(const Json& value) {
  if (value.is_string()) {
    if (value.get<std::string>() == "inf") return kInfiniteCooperativity;
    throw ConfigError("eta must be a positive number or \"inf\"");
  }
  const double eta = as_number(value, "eta");
  if (!(eta > 0.0)) throw ConfigError("eta must be > 0");
  return eta;
}

Json eta_to_json(double eta) {
  if (std::isinf(eta)) return "inf";
  return eta;
}

std::vector<double> parse_grid(const Json& value) {
  std::vector<double> grid;
  if (value.is_array()) {
    for (const auto& v : value) grid.push_back(as_number(v, "grid value"));
  } else if (value.is_object()) {
    const double lo = number_at(value, "min");
    const double hi = number_at(value, "max");
    const auto points = integer_or(value, "points", 0);
    const std::string spacing = string_or(value, "spacing", "log");
    if (points < 1) throw ConfigError("grid needs points >= 1");
    if (points > 10'000'000) throw ConfigError("grid has too many points");
    if (!(hi >= lo)) throw ConfigError("grid needs max >= min");
    if (spacing == "log") {
      if (!(lo > 0.0)) throw ConfigError("log grid needs min > 0");
      grid = log_space(lo, hi, static_cast<int>(points));
    } else if (spacing == "linear") {
      grid = lin_space(lo, hi, static_cast<int>(points));
    } else {
      throw ConfigError("grid spacing must be 'log' or 'linear'");
    }
  } else {
    throw ConfigError("grid must be an array or a {min, max, points} object");
  }
  if (grid.empty()) throw ConfigError("grid is empty");
  for (double x : grid) {
    if (!(x > 0.0)) throw ConfigError("grid values must be positive");
  }
  return grid;
}

SchemeConfig parse_scheme(const Json& value) {
  const std::string type = string_or(value, "type", "");
  SchemeConfig out;
  if (type == "independent-coherent") {
    out = IndependentCoherent{number_at(value, "n_mean_per_pulse")};
  } else if (type == "spin-echo") {
    out = SpinEchoDelayLine{number_at(value, "n_mean_per_pulse"), number_at(value, "loss")};
  } else if (type == "squeezed-input") {
    const double n = number_at(value, "n_mean_per_pulse");
    double s = 0.0;
    const auto& sv = member(value, "s");
    if (sv.is_string() && sv.get<std::string>() == "optimal") {
      if (!(n > 0.0)) throw ConfigError("n_mean_per_pulse must be > 0");
      s = optimal_squeezing_s(2.0 * n).s;
    } else {
      s = as_number(sv, "s");
    }
    out = SqueezedInput{n, s};
  } else if (type == "fock-by-detection") {
    out = FockByDetection{integer_or(value, "n_target", 0), number_or(value, "q", 1.0)};
  } else if (type == "cavity-loss") {
    out = CavityLoss{number_at(value, "n_mean_per_pulse"), number_at(value, "loss")};
  } else {
    throw ConfigError("unknown scheme type '" + type + "'");
  }
  validate(out);
  return out;
}

Json scheme_to_json(const SchemeConfig& scheme) {
  Json j;
  j["type"] = std::string(scheme_name(scheme));
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, IndependentCoherent>) {
          j["n_mean_per_pulse"] = s.n_mean_per_pulse;
        } else if constexpr (std::is_same_v<T, SpinEchoDelayLine>) {
          j["n_mean_per_pulse"] = s.n_mean_per_pulse;
          j["loss"] = s.loss;
        } else if constexpr (std::is_same_v<T, SqueezedInput>) {
          j["n_mean_per_pulse"] = s.n_mean_per_pulse;
          j["s"] = s.s;
        } else if constexpr (std::is_same_v<T, FockByDetection>) {
          j["n_target"] = s.n_target;
          j["q"] = s.q;
        } else {
          j["n_mean_per_pulse"] = s.n_mean_per_pulse;
          j["loss"] = s.loss;
        }
      },
      scheme);
  return j;
}

CavityConfig parse_cavity(const Json& value) {
  const double kappa = number_or(value, "kappa", 1.0);
  const bool has_omega = value.contains("omega");
  const bool has_coop = value.contains("eta") || value.contains("gamma_over_delta");
  CavityConfig cfg;
  if (has_coop) {
    cfg = CavityConfig::from_cooperativity(kappa, parse_eta(member(value, "eta")),
                                           number_at(value, "gamma_over_delta"));
    if (has_omega) cfg.omega = number_at(value, "omega");
  } else if (has_omega) {
    cfg.kappa = kappa;
    cfg.omega = number_at(value, "omega");
  } else {
    throw ConfigError("cavity needs 'omega' or 'eta' and 'gamma_over_delta'");
  }
  validate(cfg);
  return cfg;
}

PulseSpectrum parse_pulse(const Json& value, double kappa) {
  PulseSpectrum p;
  p.shape = parse_pulse_shape(string_or(value, "shape", "gaussian"));
  p.center_detuning = number_or(value, "center_detuning", 0.5 * kappa);
  p.bandwidth = number_or(value, "bandwidth", 1e-3 * kappa);
  if (!(p.bandwidth > 0.0)) throw ConfigError("pulse bandwidth must be > 0");
  return p;
}

std::optional<double> parse_phi(const Json& cfg) {
  if (cfg.contains("phi")) {
    const double phi = number_at(cfg, "phi");
    if (!(phi > 0.0)) throw ConfigError("phi must be > 0");
    return phi;
  }
  if (cfg.contains("cavity")) return per_photon_phase(parse_cavity(cfg.at("cavity")));
  return std::nullopt;
}

}  // namespace squeezelab::cli
