#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace magtor::cli {

enum class Command {
  Validate,
  Signature,
  NormalForm,
  Spectrum,
  Equiv,
  Kahler,
  Reconstruct,
  Obstruction,
  Phi,
  Deform,
  Flow,
  Lengths,
  Demo,
};

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

struct RunConfig {
  Command command = Command::Demo;
  std::vector<std::filesystem::path> inputs;
  double tol = 1e-9;
  /// Per-check tolerances from --config: pairing, equivalence, kahler,
  /// spectrum, conjugacy, lengths.
  std::map<std::string, double, std::less<>> tol_overrides;
  int k = 1;
  std::optional<double> cutoff;
  std::optional<int> k_max;
  std::uint64_t seed = 1;
  std::vector<double> times;
  std::optional<double> bound;
  std::size_t max_count = 10000;
  std::optional<std::filesystem::path> matrix;
  std::optional<std::filesystem::path> state;
  std::optional<std::filesystem::path> out;

  double tolerance_for(std::string_view check) const;
};

struct RunResult {
  int exit_code = 0;
  /// A JSON document, or CSV for `flow`.
  std::string report;
};

/// Exit codes: 0 true verdict or success, 1 negative verdict, 2 input or
/// precondition error (the report then carries the error name).
RunResult run(const RunConfig& config);

/// Reals such as "2.5", "25pi" or "3*pi".
double parse_real(std::string_view text);

/// Loads {"tol": x, "checks": {name: x}} into the config.
void apply_config_file(RunConfig& config, const std::filesystem::path& path);

/// Parses argv (MAGTOR_TOL supplies the default tolerance), runs, writes the
/// report to stdout or --out, and returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace magtor::cli
