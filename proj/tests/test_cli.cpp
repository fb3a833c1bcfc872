#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "lsr/cli/run.hpp"
#include "lsr/cli/run_config.hpp"
#include "lsr/error.hpp"

using namespace lsr;
using namespace lsr::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lsr_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

}  // namespace

TEST_CASE("run config defaults and round trip") {
  const RunConfig defaults = parse_run_config(json::object());
  CHECK(defaults.command == Command::solve);
  CHECK(parse_run_config(to_json(defaults)) == defaults);

  RunConfig c;
  c.command = Command::ladder;
  c.dim = 2;
  c.beta = -0.2;
  c.epsilon = 1e-3;
  c.potential_q = PotentialSpec::exponential(0.3, 0.25);
  c.grid = {40.0, 0.1, 4};
  c.mu = 9.0;
  c.configuration = Configuration{2, 9.0, {Point{1.5, -2.25, 0}, Point{20, 3, 0}}};
  c.tolerances.fixed_point = 1e-10;
  c.optimizer.restarts = 3;
  c.mus = {7.5, 9.0};
  c.sweep_betas = {0.1, 0.2};
  c.seed = 123456789012345ULL;
  c.output_dir = "somewhere";
  CHECK(parse_run_config(to_json(c)) == c);
  CHECK(parse_run_config(json::parse(to_json(c).dump())) == c);
}

TEST_CASE("run config errors") {
  CHECK_THROWS_AS(parse_run_config(json{{"bogus", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"beta", 1.0}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"command", "dance"}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"grid", {{"spacing", -1}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"dim", "one"}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config(json{{"configuration_file", "/nonexistent/c.json"}}), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/run.json"), ConfigError);
}

TEST_CASE("configuration file is loaded and survives the round trip") {
  const fs::path dir = scratch("conf_file");
  fs::create_directories(dir);
  const Configuration c{1, 10.0, {Point{-3, 0, 0}, Point{12, 0, 0}}};
  std::ofstream(dir / "c.json") << to_json(c).dump();
  const RunConfig rc = parse_run_config(json{{"configuration_file", (dir / "c.json").string()}});
  REQUIRE(rc.configuration);
  CHECK(*rc.configuration == c);
  CHECK(initial_configuration(rc) == c);
  CHECK(parse_run_config(to_json(rc)) == rc);
}

TEST_CASE("line placement") {
  RunConfig c;
  c.m = 3;
  c.beta = 0.5;
  const Configuration init = initial_configuration(c);
  REQUIRE(init.count() == 3);
  CHECK(init.centers[1][0] == doctest::Approx(0.0));
  CHECK(init.min_separation() == doctest::Approx(1.5 * 10.0 / std::sqrt(0.5)));
}

TEST_CASE("plot data") {
  ResidualDecayReport d;
  d.points = {{8.0, 1e-2, std::log(1e-2)}, {10.0, 1e-3, std::log(1e-3)}};
  std::ostringstream out;
  emit_plot_data(d, PlotKind::residual_decay, out);
  CHECK(out.str().rfind("mu,log_star_norm\n8,", 0) == 0);

  LadderReport l;
  l.levels.resize(2);
  l.levels[0].m = 1;
  l.levels[1].m = 2;
  std::ostringstream lo;
  emit_plot_data(l, PlotKind::ladder, lo);
  CHECK(lo.str().rfind("m,R_m,gap\n1,", 0) == 0);

  InteractionReport i;
  i.points = {{8.0, 0.0, 0.0, 0.99}};
  std::ostringstream io;
  emit_plot_data(i, PlotKind::interaction, io);
  CHECK(io.str() == "d,ratio_to_gamma1\n8,0.98999999999999999\n");

  std::ostringstream bad;
  CHECK_THROWS_AS(emit_plot_data(i, PlotKind::ladder, bad), DomainError);
  CHECK(plot_kind_from_string("residual-decay") == PlotKind::residual_decay);
  CHECK_THROWS_AS(plot_kind_from_string("pie"), ConfigError);
}

TEST_CASE("ground-state command writes the profile") {
  const fs::path dir = scratch("gs");
  RunConfig c;
  c.command = Command::ground_state;
  c.output_dir = dir.string();
  run(c);
  std::ifstream in(dir / "w.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "r,w");
  double sup = 0.0;
  while (std::getline(in, line)) {
    double r, w;
    char comma;
    std::istringstream(line) >> r >> comma >> w;
    sup = std::max(sup, std::abs(w - std::sqrt(2.0) / std::cosh(r)));
  }
  CHECK(sup <= 1e-6);
  const json m = read_json(dir / "manifest.json");
  CHECK(m.at("outputs").at("sech_sup_error").get<double>() <= 1e-6);
  CHECK(parse_run_config(m.at("config")) == c);
}

TEST_CASE("solve command") {
  const fs::path dir = scratch("solve");
  RunConfig c = parse_run_config(json{{"command", "solve"}, {"epsilon", 0.0}, {"grid", {{"spacing", 0.025}}}});
  c.output_dir = dir.string();
  run(c);
  const json m = read_json(dir / "manifest.json");
  CHECK(m.at("outputs").at("star_norm").get<double>() < 1e-8);
  CHECK(m.at("outputs").at("max_multiplier").get<double>() < 1e-8);
  CHECK(parse_run_config(m.at("config")) == c);
  CHECK(fs::exists(dir / "fields.csv"));
  // One log line per fixed-point iteration plus the preamble.
  std::ifstream log(dir / "log.jsonl");
  std::string line;
  int iterations = 0;
  while (std::getline(log, line))
    if (json::parse(line).at("event") == "iteration") ++iterations;
  CHECK(iterations == m.at("outputs").at("iterations").get<int>());
}

TEST_CASE("identical runs give identical CSV files") {
  RunConfig c = parse_run_config(json{{"command", "diagnose"}, {"grid", {{"spacing", 0.05}}}, {"seed", 5}});
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  c.output_dir = a.string();
  run(c);
  c.output_dir = b.string();
  run(c);
  for (const char* f : {"residual_decay.csv", "interaction.csv"}) {
    CAPTURE(f);
    CHECK(slurp(a / f) == slurp(b / f));
    CHECK_FALSE(slurp(a / f).empty());
  }
}

TEST_CASE("exit codes") {
  CHECK(exit_code(ConfigError("x")) == 2);
  CHECK(exit_code(DomainError("x")) == 2);
  CHECK(exit_code(ValidationError("x")) == 4);
  CHECK(exit_code(TruncationError("x", 3.0)) == 4);
  CHECK(exit_code(ContractionFailure("x", {1.0})) == 3);
  CHECK(exit_code(SingularSystem("x", 1e20)) == 3);
  CHECK(exit_code(std::runtime_error("x")) == 3);
  const json e = error_json(ContractionFailure("diverged", {1.0, 2.0}));
  CHECK(e.at("kind") == "contraction_failure");
  CHECK(e.at("exit_code") == 3);
  CHECK(e.at("update_history").size() == 2);

  RunConfig c = parse_run_config(json{{"command", "solve"}, {"grid", {{"half_width", 10.0}}}});
  c.output_dir = scratch("trunc").string();
  CHECK_THROWS_AS(run(c), TruncationError);
}
