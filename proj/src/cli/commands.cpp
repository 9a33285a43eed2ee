#include "squeezelab/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <variant>
#include <vector>

#include "squeezelab/error.hpp"
#include "squeezelab/optimize.hpp"
#include "squeezelab/spin.hpp"

namespace squeezelab::cli {

namespace {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_short(double x) {
  if (std::isinf(x)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string csv() const {
    std::ostringstream os;
    os << "# squeezelab-csv v1\n";
    for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
    os << '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) os << ',';
        std::visit(
            [&](const auto& v) {
              using T = std::decay_t<decltype(v)>;
              if constexpr (std::is_same_v<T, double>) {
                os << format_number(v);
              } else {
                os << v;
              }
            },
            row[c]);
      }
      os << '\n';
    }
    return os.str();
  }

  Json json() const {
    Json rows_json = Json::array();
    for (const auto& row : rows) {
      Json obj = Json::object();
      for (std::size_t c = 0; c < row.size(); ++c) {
        std::visit([&](const auto& v) { obj[columns[c]] = v; }, row[c]);
      }
      rows_json.push_back(std::move(obj));
    }
    Json out;
    out["columns"] = columns;
    out["rows"] = std::move(rows_json);
    return out;
  }
};

std::string render(const Table& t, const Overrides& flags) {
  if (flags.format.value_or(Format::csv) == Format::json) return t.json().dump(2) + "\n";
  return t.csv();
}

std::string render_json(const Json& j, const Overrides& flags) {
  if (flags.format.value_or(Format::json) == Format::csv) {
    throw ConfigError("this command only emits JSON");
  }
  return j.dump(2) + "\n";
}

std::uint64_t seed_of(const Json& cfg, const Overrides& flags) {
  if (flags.seed) return *flags.seed;
  const auto s = integer_or(cfg, "seed", 0);
  if (s < 0) throw ConfigError("seed must be >= 0");
  return static_cast<std::uint64_t>(s);
}

std::int64_t trials_of(const Json& cfg, const Overrides& flags, std::int64_t fallback) {
  const auto t = flags.trials ? *flags.trials : integer_or(cfg, "trials", fallback);
  if (t < 1) throw ConfigError("trials must be >= 1");
  return t;
}

int threads_of(const Json& cfg) {
  const auto t = integer_or(cfg, "threads", 0);
  if (t < 0) throw ConfigError("threads must be >= 0");
  return static_cast<int>(t);
}

double spin_of(const Json& cfg, double fallback) {
  const double s = number_or(cfg, "S", fallback);
  twice_spin(s);
  return s;
}

// ---------------------------------------------------------------- sweep

struct Curve {
  std::optional<Model> model;  // empty for mc
  NoiseParams noise;
  std::optional<SchemeConfig> scheme;
  std::string tag;
};

Curve parse_curve(const Json& j) {
  Curve c;
  const std::string kind = string_or(j, "model", "");
  c.noise.eps = number_or(j, "eps", 0.0);
  if (c.noise.eps < 0.0) throw ConfigError("eps must be >= 0");
  if (j.contains("eta")) c.noise.eta = parse_eta(j.at("eta"));
  if (kind == "mc") {
    c.scheme = parse_scheme(j.contains("scheme") ? j.at("scheme") : Json::object());
    c.tag = "mc " + std::string(scheme_name(*c.scheme));
  } else {
    try {
      c.model = parse_model(kind);
    } catch (const InvalidArgument&) {
      throw ConfigError("unknown model '" + kind + "'");
    }
    c.tag = std::string(to_string(*c.model));
    if (*c.model != Model::kitagawa_exact) c.tag += " eps=" + format_short(c.noise.eps);
    if (*c.model == Model::scattering) c.tag += " eta=" + format_short(c.noise.eta);
  }
  c.tag = string_or(j, "tag", c.tag);
  if (c.tag.find_first_of(",\"\n") != std::string::npos) {
    throw ConfigError("curve tags may not contain commas, quotes or newlines");
  }
  return c;
}

Json preset(const std::string& name) {
  Json p;
  p["S"] = 1e4;
  p["mu_grid"] = {{"min", 1e-6}, {"max", 1e-1}, {"points", 401}, {"spacing", "log"}};
  Json curves = Json::array();
  if (name == "shot-noise") {
    for (double eps : {1.0, 0.1, 0.01, 0.0}) curves.push_back({{"model", "gaussian"}, {"eps", eps}});
  } else if (name == "cooperativity") {
    for (Json eta : {Json("inf"), Json(1.0), Json(0.1), Json(0.01)}) {
      curves.push_back({{"model", "scattering"}, {"eps", 0.0}, {"eta", eta}});
    }
    curves.push_back({{"model", "scattering"}, {"eps", 1.0}, {"eta", "inf"}, {"tag", "reference eps=1 eta=inf"}});
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  p["curves"] = std::move(curves);
  return p;
}

}  // namespace

CommandOutput cmd_sweep(const Json& raw, const Overrides& flags) {
  Json cfg = raw.is_object() ? raw : Json::object();
  if (cfg.contains("preset")) {
    const Json p = preset(string_or(cfg, "preset", ""));
    for (const auto& [key, value] : p.items()) {
      if (!cfg.contains(key)) cfg[key] = value;
    }
  }
  const double spin = spin_of(cfg, 1e4);
  if (!cfg.contains("mu_grid")) throw ConfigError("sweep needs 'mu_grid'");
  const auto grid = parse_grid(cfg.at("mu_grid"));
  if (!cfg.contains("curves") || !cfg.at("curves").is_array() || cfg.at("curves").empty()) {
    throw ConfigError("sweep needs a non-empty 'curves' array");
  }
  std::vector<Curve> curves;
  for (const auto& j : cfg.at("curves")) curves.push_back(parse_curve(j));

  const std::uint64_t seed = seed_of(cfg, flags);
  McConfig mc;
  mc.trials = trials_of(cfg, flags, 1000);
  mc.threads = threads_of(cfg);

  Table t{{"mu", "xi", "xi_dB", "variance", "contrast", "model_tag"}, {}};
  std::uint64_t stream = 0;
  for (const auto& curve : curves) {
    for (double mu : grid) {
      SpinMoments m;
      if (curve.model) {
        const auto p = evaluate_model(*curve.model, spin, mu, curve.noise);
        // the scattering expansion is not trusted past r = 0.2
        if (p.beyond_leading_order) continue;
        m = p.moments;
      } else {
        const double total = 2.0 * mean_photons_per_pulse(*curve.scheme) +
                             expected_difference(*curve.scheme);
        mc.master_seed = derive_seed(seed, stream++);
        m = mc_moments(spin, *curve.scheme, std::sqrt(mu / total), mc).mean;
      }
      const double xi = squeezing_param(m, spin);
      if (!(xi > 0.0) || !std::isfinite(xi)) {
        throw NumericError("non-positive squeezing parameter at mu = " + format_number(mu), xi);
      }
      t.rows.push_back({mu, xi, to_db(xi), min_transverse_variance(m), m.sx / spin, curve.tag});
    }
  }
  return {render(t, flags), kExitOk};
}

CommandOutput cmd_optimize(const Json& cfg, const Overrides& flags) {
  const double spin = spin_of(cfg, 1e4);
  Model model;
  try {
    model = parse_model(string_or(cfg, "model", "scattering"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  NoiseParams noise;
  noise.eps = number_or(cfg, "eps", 0.0);
  if (noise.eps < 0.0) throw ConfigError("eps must be >= 0");
  if (cfg.contains("eta")) noise.eta = parse_eta(cfg.at("eta"));

  auto scan = default_mu_scan(model, spin, noise);
  scan.lo = number_or(cfg, "mu_min", scan.lo);
  scan.hi = number_or(cfg, "mu_max", scan.hi);
  if (!(scan.lo > 0.0 && scan.hi > scan.lo)) throw ConfigError("need 0 < mu_min < mu_max");
  const auto opt = optimize_mu(model, spin, noise, scan);

  std::optional<Regime> regime;
  if (cfg.contains("regime")) {
    try {
      regime = parse_regime(string_or(cfg, "regime", ""));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  } else if (model == Model::kitagawa_exact) {
    regime = Regime::ideal;
  } else {
    regime = matching_regime(noise);
  }

  Json out;
  out["mu_opt"] = opt.mu;
  out["xi_opt"] = opt.xi;
  out["xi_opt_dB"] = to_db(opt.xi);
  if (regime) {
    const auto a = asymptotic_optimum(spin, *regime, noise.eta);
    out["asymptotic_mu"] = a.mu;
    out["asymptotic_xi"] = a.xi;
    out["asymptotic_xi_dB"] = to_db(a.xi);
    out["regime"] = std::string(to_string(*regime));
  } else {
    out["asymptotic_mu"] = nullptr;
    out["asymptotic_xi"] = nullptr;
    out["asymptotic_xi_dB"] = nullptr;
    out["regime"] = nullptr;
  }
  out["model"] = std::string(to_string(model));
  out["S"] = spin;
  out["eps"] = noise.eps;
  out["eta"] = eta_to_json(noise.eta);
  out["at_boundary"] = opt.at_boundary;
  return {render_json(out, flags), kExitOk};
}

CommandOutput cmd_scheme_eval(const Json& cfg, const Overrides& flags) {
  const double spin = spin_of(cfg, 1e4);
  const double mu = number_or(cfg, "mu", 1e-3);
  if (!cfg.contains("scheme")) throw ConfigError("scheme-eval needs a 'scheme' block");
  const SchemeConfig scheme = parse_scheme(cfg.at("scheme"));

  Json out;
  out["scheme"] = scheme_to_json(scheme);
  out["nu"] = shot_noise_fraction(scheme);
  if (const auto* sq = std::get_if<SqueezedInput>(&scheme)) {
    const auto best = optimal_squeezing_s(2.0 * sq->n_mean_per_pulse);
    out["s_opt"] = best.s;
    out["nu_min"] = best.nu;
  } else {
    out["s_opt"] = nullptr;
    out["nu_min"] = nullptr;
  }

  std::vector<double> qs{0.5, 0.8, 0.9, 0.95, 0.99};
  if (cfg.contains("q_values")) {
    qs.clear();
    if (!cfg.at("q_values").is_array()) throw ConfigError("'q_values' must be an array");
    for (const auto& q : cfg.at("q_values")) {
      if (!q.is_number()) throw ConfigError("'q_values' entries must be numbers");
      qs.push_back(q.get<double>());
    }
  }
  Json table = Json::array();
  double crossover = 0.0;
  for (double q : qs) {
    const auto c = measurement_comparison(spin, mu, q);
    crossover = c.crossover_q;
    const char* best = c.xi_cavity < c.xi_phase ? "cavity" : "phase";
    table.push_back({{"q", q},
                     {"xi_qnd", c.xi_qnd},
                     {"xi_phase", c.xi_phase},
                     {"xi_cavity", c.xi_cavity},
                     {"fastest", best}});
  }
  if (qs.empty()) crossover = measurement_comparison(spin, mu, 1.0).crossover_q;
  out["comparison_table"] = std::move(table);
  out["crossover_q"] = crossover;
  out["S"] = spin;
  out["mu"] = mu;
  return {render_json(out, flags), kExitOk};
}

namespace {

struct Check {
  std::string name;
  double model_value;
  double mc_value;
  double std_error;
  double rel_tol;
  double n_sigma;

  Json json() const {
    const double tol = std::max(rel_tol * std::abs(model_value), n_sigma * std_error);
    const bool pass = std::abs(mc_value - model_value) <= tol;
    return {{"name", name},         {"model_value", model_value},
            {"mc_value", mc_value}, {"std_error", std_error},
            {"tolerance", tol},     {"pass", pass}};
  }
};

Json run_checks(const std::vector<Check>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) arr.push_back(c.json());
  return arr;
}

Json suite_gaussian_vs_mc(const Json& p, std::uint64_t seed, const Json& cfg,
                          const Overrides& flags) {
  const double spin = spin_of(p, 500.0);
  const double mu = number_or(p, "mu", 8e-3);
  if (!(mu > 0.0)) throw ConfigError("mu must be > 0");
  const SchemeConfig scheme = p.contains("scheme")
                                  ? parse_scheme(p.at("scheme"))
                                  : SchemeConfig{IndependentCoherent{number_or(p, "n_mean_per_pulse", 1e6)}};
  const double rel = number_or(p, "rel_tol", 0.02);
  const double sig = number_or(p, "n_sigma", 3.0);
  McConfig mc;
  mc.trials = flags.trials ? *flags.trials : integer_or(p, "trials", 10000);
  if (mc.trials < 1) throw ConfigError("trials must be >= 1");
  mc.master_seed = seed;
  mc.threads = threads_of(cfg);

  const double total = 2.0 * mean_photons_per_pulse(scheme) + expected_difference(scheme);
  const auto r = mc_moments(spin, scheme, std::sqrt(mu / total), mc);
  const auto g = gaussian_moments(spin, mu, shot_noise_fraction(scheme));

  Json params;
  params["S"] = spin;
  params["mu"] = mu;
  params["scheme"] = scheme_to_json(scheme);
  params["trials"] = mc.trials;
  params["rel_tol"] = rel;
  params["n_sigma"] = sig;
  Json suite;
  suite["suite"] = "gaussian-vs-mc";
  suite["parameters"] = std::move(params);
  suite["checks"] = run_checks({{"sx", g.sx, r.mean.sx, r.std_error.sx, rel, sig},
                                {"sy2", g.sy2, r.mean.sy2, r.std_error.sy2, rel, sig},
                                {"syz", g.syz, r.mean.syz, r.std_error.syz, rel, sig}});
  return suite;
}

Json suite_scattering_vs_trajectory(const Json& p, std::uint64_t seed, const Json& cfg,
                                    const Overrides& flags) {
  McConfig mc;
  const auto n_atoms = integer_or(p, "n_atoms", 10);
  if (n_atoms < 1) throw ConfigError("n_atoms must be >= 1");
  if (n_atoms > kMaxTrajectoryAtoms) {
    throw ResourceLimit("trajectory simulation holds at most " +
                        std::to_string(kMaxTrajectoryAtoms) + " atoms, got " +
                        std::to_string(n_atoms));
  }
  mc.n_atoms = static_cast<int>(n_atoms);
  const double mu = number_or(p, "mu", 0.05);
  const double eta = p.contains("eta") ? parse_eta(p.at("eta")) : 0.5;
  mc.steps = static_cast<int>(integer_or(p, "steps", 64));
  mc.trials = flags.trials ? *flags.trials : integer_or(p, "trials", 20000);
  if (mc.trials < 1) throw ConfigError("trials must be >= 1");
  mc.master_seed = seed;
  mc.threads = threads_of(cfg);
  const double rel = number_or(p, "rel_tol", 2.0 / static_cast<double>(n_atoms));
  const double sig = number_or(p, "n_sigma", 3.0);

  const auto sim = trajectory_scattering_sim(mc.n_atoms, mu, eta, mc);
  const double spin = 0.5 * mc.n_atoms;
  const double contrast = std::exp(-2.0 * sim.r);
  const auto ideal = kitagawa_moments(spin, 0.0, mu);
  const double scale = ideal.syz * contrast;

  Json params;
  params["n_atoms"] = n_atoms;
  params["mu"] = mu;
  params["eta"] = eta_to_json(eta);
  params["steps"] = mc.steps;
  params["trials"] = mc.trials;
  params["rel_tol"] = rel;
  params["n_sigma"] = sig;
  params["r"] = sim.r;
  params["regime_warning"] = sim.regime_warning;
  Json suite;
  suite["suite"] = "scattering-vs-trajectory";
  suite["parameters"] = std::move(params);
  std::vector<Check> checks{
      {"contrast", contrast, sim.contrast_estimate, sim.contrast_std_error, rel, sig},
      {"sz2", 0.5 * spin, sim.moments.mean.sz2, sim.moments.std_error.sz2, rel, sig}};
  if (scale != 0.0) {
    checks.push_back({"cross_correlation_factor", 1.0 - sim.r, sim.moments.mean.syz / scale,
                      sim.moments.std_error.syz / std::abs(scale), rel, sig});
  }
  suite["checks"] = run_checks(checks);
  return suite;
}

}  // namespace

CommandOutput cmd_validate(const Json& raw, const Overrides& flags) {
  const Json cfg = raw.is_object() ? raw : Json::object();
  std::vector<std::string> names{"gaussian-vs-mc", "scattering-vs-trajectory"};
  if (cfg.contains("suites")) {
    names.clear();
    if (!cfg.at("suites").is_array()) throw ConfigError("'suites' must be an array");
    for (const auto& s : cfg.at("suites")) {
      if (!s.is_string()) throw ConfigError("suite names must be strings");
      names.push_back(s.get<std::string>());
    }
    if (names.empty()) throw ConfigError("no suites selected");
  }
  const std::uint64_t seed = seed_of(cfg, flags);

  Json suites = Json::array();
  bool all_pass = true;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const Json params = cfg.contains(names[i]) ? cfg.at(names[i]) : Json::object();
    Json suite;
    if (names[i] == "gaussian-vs-mc") {
      suite = suite_gaussian_vs_mc(params, derive_seed(seed, i), cfg, flags);
    } else if (names[i] == "scattering-vs-trajectory") {
      suite = suite_scattering_vs_trajectory(params, derive_seed(seed, i), cfg, flags);
    } else {
      throw ConfigError("unknown suite '" + names[i] + "'");
    }
    bool pass = true;
    for (const auto& c : suite["checks"]) pass = pass && c["pass"].get<bool>();
    suite["pass"] = pass;
    all_pass = all_pass && pass;
    suites.push_back(std::move(suite));
  }
  Json out;
  out["seed"] = seed;
  out["suites"] = std::move(suites);
  out["pass"] = all_pass;
  return {render_json(out, flags), all_pass ? kExitOk : kExitFailure};
}

CommandOutput cmd_fano(const Json& raw, const Overrides& flags) {
  const Json cfg = raw.is_object() ? raw : Json::object();
  CavityConfig cavity;
  cavity.omega = 1e-3;
  if (cfg.contains("cavity")) cavity = parse_cavity(cfg.at("cavity"));
  PulseSpectrum pulse = parse_pulse(cfg.contains("pulse") ? cfg.at("pulse") : Json::object(),
                                    cavity.kappa);
  const auto sigmas = parse_grid(cfg.contains("sigma_over_kappa")
                                     ? cfg.at("sigma_over_kappa")
                                     : Json{{"min", 1e-3}, {"max", 1e-1}, {"points", 9}});
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs{{10, 0}};
  if (cfg.contains("pairs")) {
    pairs.clear();
    for (const auto& p : cfg.at("pairs")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
        throw ConfigError("'pairs' entries must be [m, m_prime] integer pairs");
      }
      pairs.emplace_back(p[0].get<std::int64_t>(), p[1].get<std::int64_t>());
    }
    if (pairs.empty()) throw ConfigError("'pairs' is empty");
  }

  Table t{{"sigma_over_kappa", "m", "m_prime", "fidelity", "one_minus_F"}, {}};
  for (const auto& [m, mp] : pairs) {
    for (double s : sigmas) {
      pulse.bandwidth = s * cavity.kappa;
      const auto f = factorization_fidelity(cavity, pulse, static_cast<double>(m),
                                            static_cast<double>(mp));
      t.rows.push_back({s, m, mp, f.fidelity, f.one_minus_fidelity});
    }
  }
  return {render(t, flags), kExitOk};
}

Format parse_format(const std::string& name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("format must be csv or json");
}

int run(const Invocation& inv, std::ostream& out, std::ostream& err) {
  try {
    const Json cfg = inv.config_path ? load_json(*inv.config_path) : Json::object();
    CommandOutput result;
    if (inv.command == "sweep") {
      result = cmd_sweep(cfg, inv.flags);
    } else if (inv.command == "optimize") {
      result = cmd_optimize(cfg, inv.flags);
    } else if (inv.command == "scheme-eval") {
      result = cmd_scheme_eval(cfg, inv.flags);
    } else if (inv.command == "validate") {
      result = cmd_validate(cfg, inv.flags);
    } else if (inv.command == "fano") {
      result = cmd_fano(cfg, inv.flags);
    } else {
      throw ConfigError("unknown command '" + inv.command + "'");
    }
    if (inv.out_path) {
      std::ofstream file(*inv.out_path, std::ios::binary);
      if (!file) throw ConfigError("cannot write '" + *inv.out_path + "'");
      file << result.text;
      if (!file) throw ConfigError("cannot write '" + *inv.out_path + "'");
    } else {
      out << result.text;
    }
    if (result.exit_code == kExitFailure) err << "error: validation checks failed\n";
    return result.exit_code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const RegimeViolation& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const OptimizationAmbiguity& e) {
    err << "optimization ambiguity: " << e.what() << '\n';
    return kExitAmbiguity;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace squeezelab::cli
