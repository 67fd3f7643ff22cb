#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pointdelta/commands.hpp"
#include "pointdelta/config.hpp"
#include "pointdelta/point.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Point-supported perturbations of the Dirichlet Laplacian on the interval and the unit ball"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  std::uint64_t seed = 0;
  bool strict = false;
  for (const auto& name : pdelta::commands::command_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "key=value experiment file");
    sub->add_option("--out", out_dir, "output directory for <command>.csv and <command>.json");
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_flag("--strict", strict, "treat warnings as failures");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  const bool seed_given = app.get_subcommands().front()->count("--seed") > 0;

  try {
    auto cfg = config_path.empty() ? pdelta::config::ExperimentConfig{} : pdelta::config::load_config(config_path);
    if (seed_given) cfg.seed = seed;
    pdelta::config::validate(cfg);

    const auto result = pdelta::commands::run_command(command, cfg);
    fs::create_directories(out_dir);
    const fs::path base = fs::path(out_dir) / command;
    std::ofstream csv(base.string() + ".csv");
    pdelta::commands::write_csv(result.table, csv);
    std::ofstream js(base.string() + ".json");
    js << pdelta::commands::to_json(result.table).dump(2) << "\n";

    for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& f : result.failures) std::cerr << "FAIL: " << f << "\n";
    std::cout << command << ": " << result.table.rows.size() << " rows -> " << base.string() << ".csv ("
              << (result.status(strict) == 0 ? "ok" : "failed") << ")\n";
    return result.status(strict);
  } catch (const pdelta::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
