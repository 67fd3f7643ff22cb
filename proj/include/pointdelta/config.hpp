#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdelta::config {

/// Parse or validation failure; what() is "<source>:<line>: <message>".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

struct ExperimentConfig {
  int dimension = 1;
  std::vector<double> puncture{0.3};
  int cutoff = 64;                   ///< M
  std::string preset = "delta";      ///< zero | delta | alpha | tangential
  double k = 1.0;
  std::vector<std::complex<double>> alpha;
  std::string kappa = "auto";        ///< auto | 1 | 2
  double lambda_min = -30.0;
  double lambda_max = -1.0;
  int lambda_count = 10;
  double window_min = -300.0;
  double window_max = 10.0;
  int roots = 5;                     ///< roots compared against the oracle
  int theorem_index = 2;             ///< N of the eigenvalue-shift scenario
  std::vector<std::pair<int, double>> f_modes{{1, 1.0}};
  int grid = 11;
  double tol = 1e-6;
  double root_tol = 1e-8;
  double krein_tol = 1e-4;
  std::uint64_t seed = 1;

  /// Line of each key in the source, for anchoring validation errors.
  std::map<std::string, int> lines;
  std::string source = "<defaults>";
};

/// Flat key=value text; '#' starts a comment; unknown keys are errors.
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);
/// Puncture strictly interior, M ≥ 8, positive tolerances, consistent sizes.
void validate(const ExperimentConfig& cfg);

}  // namespace pdelta::config
