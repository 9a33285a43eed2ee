#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "squeezelab/cli/config.hpp"

namespace squeezelab::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfig = 2,
  kExitAmbiguity = 3,
  kExitResource = 4,
};

enum class Format { csv, json };

/// Flags shared by every subcommand; unset fields fall back to the config.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<Format> format;
};

struct CommandOutput {
  std::string text;
  int exit_code = kExitOk;
};

CommandOutput cmd_sweep(const Json& cfg, const Overrides& flags);
CommandOutput cmd_optimize(const Json& cfg, const Overrides& flags);
CommandOutput cmd_scheme_eval(const Json& cfg, const Overrides& flags);
/// Exit code is kExitFailure when any check fails.
CommandOutput cmd_validate(const Json& cfg, const Overrides& flags);
CommandOutput cmd_fano(const Json& cfg, const Overrides& flags);

struct Invocation {
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::string> out_path;
  Overrides flags;
};

/// Loads the config, runs the command and writes the result to out_path or
/// `out`. Errors are reported on `err` and mapped to exit codes.
int run(const Invocation& inv, std::ostream& out, std::ostream& err);

Format parse_format(const std::string& name);

}  // namespace squeezelab::cli
