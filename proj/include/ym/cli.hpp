#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ym::cli {

enum class Command { validate, density, slope, measure, verify, converge, weak_cont, homog, bolza };
enum class Format { csv, json };

std::string command_name(Command c);
std::optional<Command> parse_command(const std::string& name);

struct RunConfig {
  Command command = Command::validate;
  std::string input;
  std::uint64_t seed = 42;
  std::size_t samples = 1'000'000;
  std::size_t bins = 16;
  std::size_t grid = 1024;
  std::size_t depth = 6;
  /// Index window; the sequence file's "indices" when unset.
  std::optional<std::pair<std::size_t, std::size_t>> window;
  double tol = 1e-2;
  double quad_tol = 1e-9;
  std::string out;
  Format format = Format::csv;

  /// homog: number of x samples compared pairwise.
  std::size_t points = 17;
  /// bolza: indices for the decay table.
  std::vector<std::size_t> n_list{1, 2, 4, 8, 16};
  /// bolza: emit the gradient Young measure of sawtooth(n) instead.
  bool gradient_ym = false;
  std::size_t n = 4;
  /// Sampling threads for verify; the result does not depend on it.
  unsigned workers = 1;
};

enum ExitCode : int { success = 0, negative = 1, input_error = 2, numeric_error = 3 };

struct RunResult {
  int exit_code = success;
  /// CSV or JSON text; empty on CSV-format errors.
  std::string payload;
  /// Human-readable message for stderr.
  std::string diagnostic;
};

/// Throws PreconditionError on a non-positive parameter or a window that is
/// not increasing.
void check_config(const RunConfig& config);

/// Applies YM_SEED when set. Throws ParseError if it is not an unsigned
/// integer.
void apply_environment(RunConfig& config, const char* ym_seed);

/// Runs one command. Never throws: failures map to exit codes 2 (input) and
/// 3 (numerics). When config.out is set the payload is also written there
/// through a temporary file and a rename.
RunResult run(const RunConfig& config);

}  // namespace ym::cli
