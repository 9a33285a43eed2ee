#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "squeezelab/cli/commands.hpp"

namespace cli = squeezelab::cli;

int main(int argc, char** argv) {
  CLI::App app{"squeezelab: cavity-feedback spin squeezing calculator"};
  app.require_subcommand(1);

  cli::Invocation inv;
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;
  std::string format;

  const char* commands[][2] = {
      {"sweep", "Squeezing parameter versus shearing for a set of curves (CSV)"},
      {"optimize", "Numerical optimum shearing with the asymptotic cross-check (JSON)"},
      {"scheme-eval", "Residual shot noise of a photon scheme (JSON)"},
      {"validate", "Monte-Carlo oracles against the closed-form models (JSON)"},
      {"fano", "Pulse factorization fidelity versus bandwidth (CSV)"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out, "Output file (default stdout)");
    sub->add_option("--seed", seed, "Master seed");
    sub->add_option("--trials", trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitConfig;
  }

  for (auto* sub : app.get_subcommands()) {
    inv.command = sub->get_name();
    if (sub->count("--config")) inv.config_path = config;
    if (sub->count("--out")) inv.out_path = out;
    if (sub->count("--seed")) inv.flags.seed = seed;
    if (sub->count("--trials")) inv.flags.trials = trials;
    if (sub->count("--format")) inv.flags.format = cli::parse_format(format);
  }
  return cli::run(inv, std::cout, std::cerr);
}
