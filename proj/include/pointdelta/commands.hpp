#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pointdelta/config.hpp"

namespace pdelta::commands {

/// Output table: `# key=value` metadata lines, a header row, then rows.
struct Table {
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void add(std::vector<nlohmann::json> row) { rows.push_back(std::move(row)); }
};

void write_csv(const Table& table, std::ostream& os);
nlohmann::json to_json(const Table& table);

struct CommandResult {
  Table table;
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  /// Exit status: 0 iff no failures (and, when strict, no warnings).
  int status(bool strict) const { return failures.empty() && (!strict || warnings.empty()) ? 0 : 1; }
};

const std::vector<std::string>& command_names();

/// Runs one experiment. Throws InvalidArgument for an unknown command.
CommandResult run_command(const std::string& name, const config::ExperimentConfig& cfg);

}  // namespace pdelta::commands
