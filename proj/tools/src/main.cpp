#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lsr/cli/run.hpp"
#include "lsr/cli/run_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"lsr: multi-bump solutions of a linearly coupled Schrödinger system"};
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool verbose = false;
  std::string command;
  app.add_option("command", command,
                 "ground-state | solve | optimize | ladder | spectrum | diagnose (overrides the config)");
  app.add_option("--config", config_path, "run config (JSON)")->required();
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--seed", seed, "optimizer seed (overrides the config)");
  app.add_flag("--verbose", verbose, "echo log events to stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::string dir = out_dir;
  try {
    auto config = lsr::cli::load_run_config(config_path);
    if (!command.empty()) config.command = lsr::cli::command_from_string(command);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (seed) config.seed = *seed;
    dir = config.output_dir;
    lsr::cli::run(config, {verbose});
    return 0;
  } catch (const std::exception& e) {
    const auto err = lsr::cli::error_json(e);
    std::cerr << err.dump() << '\n';
    if (!dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      std::ofstream f(std::filesystem::path(dir) / "error.json");
      if (f) f << err.dump(2) << '\n';
    }
    return lsr::cli::exit_code(e);
  }
}
