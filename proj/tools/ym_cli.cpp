#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "ym/cli.hpp"
#include "ym/errors.hpp"

namespace {

std::vector<std::size_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos)
      throw ym::ParseError(std::string(flag) + " expects comma-separated positive integers");
    out.push_back(std::stoull(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Young measures of piecewise-monotone functions"};
  ym::cli::RunConfig config;
  std::string command;
  std::string window;
  std::string n_list;
  std::string format = "csv";
  bool quiet = false;

  app.add_option("command", command,
                 "validate | density | slope | measure | verify | converge | weak-cont | homog | bolza")
      ->required();
  app.add_option("--input", config.input, "function, sequence or family file");
  app.add_option("--seed", config.seed, "sampling seed (YM_SEED overrides)")->capture_default_str();
  app.add_option("--samples", config.samples, "Monte-Carlo sample count")->capture_default_str();
  app.add_option("--bins", config.bins, "histogram bins")->capture_default_str();
  app.add_option("--grid", config.grid, "export grid size")->capture_default_str();
  app.add_option("--depth", config.depth, "dyadic test-set depth")->capture_default_str();
  app.add_option("--window", window, "index window n_min,n_max (default: from the input file)");
  app.add_option("--tol", config.tol, "verdict tolerance")->capture_default_str();
  app.add_option("--quad-tol", config.quad_tol, "quadrature tolerance")->capture_default_str();
  app.add_option("--points", config.points, "homog: x samples")->capture_default_str();
  app.add_option("--n-list", n_list, "bolza: indices, e.g. 1,2,4,8,16");
  app.add_flag("--gradient-ym", config.gradient_ym, "bolza: gradient Young measure of sawtooth(n)");
  app.add_option("--n", config.n, "bolza: sawtooth index for --gradient-ym")->capture_default_str();
  app.add_option("--workers", config.workers, "verify: sampling threads (0 = all cores)")
      ->capture_default_str();
  app.add_option("--out", config.out, "write the payload to this file");
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--quiet", quiet, "suppress the stderr summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ym::cli::input_error;
  }

  try {
    const auto cmd = ym::cli::parse_command(command);
    if (!cmd) throw ym::ParseError("unknown command: " + command);
    config.command = *cmd;
    config.format = format == "json" ? ym::cli::Format::json : ym::cli::Format::csv;
    if (!window.empty()) {
      const auto w = parse_list(window, "--window");
      if (w.size() != 2) throw ym::ParseError("--window expects n_min,n_max");
      config.window = std::make_pair(w[0], w[1]);
    }
    if (!n_list.empty()) config.n_list = parse_list(n_list, "--n-list");
    if (config.workers == 0) config.workers = std::max(1u, std::thread::hardware_concurrency());
    ym::cli::apply_environment(config, std::getenv("YM_SEED"));
  } catch (const ym::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ym::cli::input_error;
  }

  const ym::cli::RunResult result = ym::cli::run(config);
  if (config.out.empty() || result.exit_code >= ym::cli::input_error) std::cout << result.payload;
  if (!quiet && !result.diagnostic.empty())
    std::cerr << (result.exit_code >= ym::cli::input_error ? "error: " : "") << result.diagnostic
              << "\n";
  return result.exit_code;
}
