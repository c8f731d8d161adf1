#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ym/cli.hpp"
#include "ym/errors.hpp"

using namespace ym::cli;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

class Scratch {
 public:
  Scratch() {
    dir_ = fs::temp_directory_path() / ("ym_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kSine = R"({"domain":[0,1],"pieces":[
  {"interval":[0,0.25],"kind":"sin","params":{"amplitude":1,"frequency":1,"phase":0}},
  {"interval":[0.25,0.75],"kind":"sin","params":{"amplitude":1,"frequency":1,"phase":0}},
  {"interval":[0.75,1],"kind":"sin","params":{"amplitude":1,"frequency":1,"phase":0}}]})";

const char* kTent = R"({"domain":[0,1],"pieces":[
  {"interval":[0,0.5],"kind":"affine","params":{"slope":2,"intercept":0}},
  {"interval":[0.5,1],"kind":"affine","params":{"slope":-2,"intercept":2}}]})";

RunConfig config_for(Command c, const std::string& input = {}) {
  RunConfig cfg;
  cfg.command = c;
  cfg.input = input;
  return cfg;
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("command names round trip") {
  for (Command c : {Command::validate, Command::density, Command::slope, Command::measure,
                    Command::verify, Command::converge, Command::weak_cont, Command::homog,
                    Command::bolza})
    CHECK(parse_command(command_name(c)) == c);
  CHECK(command_name(Command::weak_cont) == "weak-cont");
  CHECK_FALSE(parse_command("plot"));
}

TEST_CASE("density on the sine file") {
  Scratch s;
  RunConfig cfg = config_for(Command::density, s.write("sin.json", kSine));
  cfg.grid = 512;
  const RunResult r = run(cfg);
  REQUIRE(r.exit_code == success);
  const auto rows = csv_rows(r.payload);
  REQUIRE(rows.size() == 512);
  // The midpoint grid puts y = -1/512 and y = 1/512 next to zero.
  const auto& near_zero = rows[256];
  CHECK(std::abs(near_zero[0]) == doctest::Approx(1.0 / 512.0));
  CHECK(near_zero[1] == doctest::Approx(0.3183099).epsilon(1e-5));
}

TEST_CASE("verify on the tent file") {
  Scratch s;
  RunConfig cfg = config_for(Command::verify, s.write("tent.json", kTent));
  cfg.samples = 1'000'000;
  cfg.seed = 42;
  cfg.format = Format::json;
  const RunResult r = run(cfg);
  CHECK(r.exit_code == success);
  const json j = json::parse(r.payload);
  CHECK(j.at("result").at("passed") == true);
  CHECK(j.at("result").at("max_standard_errors").get<double>() < 3.0);
}

TEST_CASE("converge on the amplitude tent sequence") {
  Scratch s;
  RunConfig cfg = config_for(
      Command::converge, s.write("seq.json", R"({"family":"amplitude_tent","params":{},"indices":[8,64]})"));
  cfg.window = std::make_pair(std::size_t{8}, std::size_t{64});
  cfg.format = Format::json;
  const RunResult r = run(cfg);
  REQUIRE(r.exit_code == success);
  const json j = json::parse(r.payload);
  CHECK(j.at("result").at("verdict").at("converged") == true);
  const auto& grid = j.at("result").at("limit").at("density_grid");
  const auto& range = j.at("result").at("limit").at("range");
  const double lo = range[0].get<double>();
  const double hi = range[1].get<double>();
  const std::size_t n = grid.size();
  REQUIRE(n > 0);
  for (std::size_t k = 0; k < n; ++k) {
    const double y = lo + (hi - lo) * (static_cast<double>(k) + 0.5) / static_cast<double>(n);
    if (y < 1.0) CHECK(std::abs(grid[k].get<double>() - 1.0) <= 0.02);
  }
}

TEST_CASE("windows outside a custom sequence are rejected") {
  Scratch s;
  const std::string member = R"({"domain":[0,1],"pieces":[{"interval":[0,1],"kind":"affine","params":{"slope":1,"intercept":0}}]})";
  RunConfig cfg = config_for(
      Command::converge,
      s.write("seq.json", R"({"family":"custom","indices":[1,2],"params":{"members":[)" + member +
                              "," + member + "]}}"));
  cfg.window = std::make_pair(std::size_t{1}, std::size_t{5});
  CHECK(run(cfg).exit_code == input_error);
  cfg.window = std::make_pair(std::size_t{1}, std::size_t{2});
  CHECK(run(cfg).exit_code == success);
}

TEST_CASE("negative verdicts exit with 1") {
  Scratch s;
  RunConfig weak = config_for(
      Command::weak_cont,
      s.write("disc.json", R"({"family":"discontinuous","indices":[3,64],"approach":"below"})"));
  CHECK(run(weak).exit_code == negative);

  RunConfig homog = config_for(Command::homog,
                               s.write("tri.json", R"({"family":"triangular","indices":[3,1024]})"));
  homog.format = Format::json;
  const RunResult r = run(homog);
  CHECK(r.exit_code == negative);
  CHECK(json::parse(r.payload).at("result").at("homogeneous") == false);
}

TEST_CASE("bolza tables") {
  RunConfig cfg = config_for(Command::bolza);
  const RunResult r = run(cfg);
  REQUIRE(r.exit_code == success);
  CHECK(r.payload.rfind("n,J_value,predicted,abs_error\n", 0) == 0);
  const auto rows = csv_rows(r.payload);
  REQUIRE(rows.size() == 5);
  for (const auto& row : rows) CHECK(row[3] <= 1e-8);

  cfg.gradient_ym = true;
  cfg.n = 4;
  const auto atoms = csv_rows(run(cfg).payload);
  REQUIRE(atoms.size() == 2);
  CHECK(atoms[0][0] == -1.0);
  CHECK(atoms[0][1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(atoms[1][0] == 1.0);
  CHECK(atoms[1][1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("input errors exit with 2") {
  Scratch s;
  const RunResult syntax =
      run(config_for(Command::density, s.write("bad.json", "{\"domain\": [0, 1],\n \"pieces\": [,]}")));
  CHECK(syntax.exit_code == input_error);
  CHECK(syntax.diagnostic.find("line 2") != std::string::npos);

  CHECK(run(config_for(Command::validate, s.path("missing.json"))).exit_code == input_error);

  const RunResult invalid = run(config_for(
      Command::density,
      s.write("overlap.json", R"({"domain":[0,1],"pieces":[
        {"interval":[0,0.6],"kind":"affine","params":{"slope":1,"intercept":0}},
        {"interval":[0.4,1],"kind":"affine","params":{"slope":1,"intercept":0}}]})")));
  CHECK(invalid.exit_code == input_error);
  CHECK(invalid.diagnostic.find("overlapping_subintervals") != std::string::npos);

  RunConfig zero = config_for(Command::bolza);
  zero.grid = 0;
  CHECK_THROWS_AS(check_config(zero), ym::PreconditionError);
  CHECK(run(zero).exit_code == input_error);

  RunConfig backwards = config_for(Command::bolza);
  backwards.window = std::make_pair(std::size_t{9}, std::size_t{3});
  CHECK_THROWS_AS(check_config(backwards), ym::PreconditionError);
}

TEST_CASE("numeric errors exit with 3 and name the offending set") {
  Scratch s;
  // The slope vanishes at x = 1/2, so the density is infinite at y = 0.
  RunConfig cfg = config_for(
      Command::measure,
      s.write("flat.json", R"({"domain":[0,1],"pieces":[
        {"interval":[0,1],"kind":"expr","params":{"expression":"(x - 0.5)^3"}}]})"));
  const RunResult r = run(cfg);
  CHECK(r.exit_code == numeric_error);
  CHECK(r.diagnostic.find("[-0.125, 0.125]") != std::string::npos);

  cfg.format = Format::json;
  const json j = json::parse(run(cfg).payload);
  CHECK(j.at("error").at("kind") == "quadrature");
}

TEST_CASE("JSON output is a single envelope") {
  Scratch s;
  RunConfig cfg = config_for(Command::slope, s.write("tent.json", kTent));
  cfg.format = Format::json;
  cfg.grid = 8;
  const json ok = json::parse(run(cfg).payload);
  CHECK(ok.at("command") == "slope");
  CHECK(ok.at("config").at("grid") == 8);
  CHECK(ok.contains("result"));

  cfg.input = s.path("missing.json");
  const json err = json::parse(run(cfg).payload);
  CHECK(err.at("command") == "slope");
  CHECK(err.contains("error"));
  CHECK_FALSE(err.contains("result"));
}

TEST_CASE("property: identical configs give byte-identical output") {
  Scratch s;
  const std::string tent = s.write("tent.json", kTent);
  for (Command c : {Command::density, Command::slope, Command::measure, Command::verify}) {
    RunConfig cfg = config_for(c, tent);
    cfg.samples = 100'000;
    const RunResult a = run(cfg);
    const RunResult b = run(cfg);
    CHECK(a.exit_code <= negative);
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.payload == b.payload);
  }
  RunConfig cfg = config_for(Command::verify, tent);
  cfg.samples = 100'000;
  cfg.workers = 3;
  RunConfig one = cfg;
  one.workers = 1;
  CHECK(run(cfg).payload == run(one).payload);
  RunConfig other = cfg;
  other.seed = 7;
  CHECK(run(other).payload != run(cfg).payload);
}

TEST_CASE("YM_SEED overrides the seed") {
  RunConfig cfg = config_for(Command::verify);
  cfg.seed = 42;
  apply_environment(cfg, "1234");
  CHECK(cfg.seed == 1234);
  apply_environment(cfg, nullptr);
  CHECK(cfg.seed == 1234);
  CHECK_THROWS_AS(apply_environment(cfg, "12abc"), ym::ParseError);
  CHECK_THROWS_AS(apply_environment(cfg, "-3"), ym::ParseError);
}

TEST_CASE("--out writes the payload and leaves no temporary behind") {
  Scratch s;
  RunConfig cfg = config_for(Command::slope, s.write("tent.json", kTent));
  cfg.grid = 16;
  cfg.out = s.path("slope.csv");
  const RunResult r = run(cfg);
  REQUIRE(r.exit_code == success);
  CHECK(read_file(cfg.out) == r.payload);
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(s.dir())) ++files;
  CHECK(files == 2);

  cfg.out = s.path("no_such_dir/slope.csv");
  CHECK(run(cfg).exit_code != success);
}
