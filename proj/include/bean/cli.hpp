#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "bean/numerics.hpp"

namespace bean {

// Process exit codes, one per diagnostic class.
enum ExitCode : int {
  kExitOk = 0,
  kExitTypeError = 1,
  kExitParseError = 2,
  kExitViolation = 3,  // verify found a counterexample, or bench rows disagree
  kExitUsage = 4,      // bad flags, unreadable files, malformed inputs
};

enum class OutputFormat { Text, Json };

struct CliConfig {
  std::string subcommand;
  std::string file;
  std::optional<std::string> main;
  RoundingConfig rounding;
  OutputFormat format = OutputFormat::Text;
  long trials = 1000;
  std::uint64_t seed = 42;
  bool signed_inputs = false;
  std::string inputs;  // JSON text for `run`
  std::optional<std::string> only;
};

int cmd_check(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_run(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const CliConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_bench(const CliConfig& cfg, std::ostream& out, std::ostream& err);

// Parses flags and dispatches.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bean
