#include "pointdelta/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace pdelta::config {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a finite number: " + s);
  return v;
}

long long to_integer(const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: " + s);
  return v;
}

// "a", "a+bi", "a-bi" or "bi".
std::complex<double> to_complex(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty value");
  if (s.back() != 'i') return {to_double(s), 0.0};
  const std::string body = s.substr(0, s.size() - 1);
  const auto pos = body.find_last_of("+-");
  if (pos == std::string::npos || pos == 0 || body[pos - 1] == 'e' || body[pos - 1] == 'E')
    return {0.0, to_double(body.empty() ? "1" : body)};
  return {to_double(body.substr(0, pos)), to_double(body.substr(pos))};
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
  ExperimentConfig cfg;
  cfg.source = source;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, Setter> setters{
      {"dimension", [&](const std::string& v) { cfg.dimension = static_cast<int>(to_integer(v)); }},
      {"puncture",
       [&](const std::string& v) {
         cfg.puncture.clear();
         for (const auto& p : split(v, ',')) cfg.puncture.push_back(to_double(p));
       }},
      {"M", [&](const std::string& v) { cfg.cutoff = static_cast<int>(to_integer(v)); }},
      {"preset", [&](const std::string& v) { cfg.preset = v; }},
      {"k", [&](const std::string& v) { cfg.k = to_double(v); }},
      {"alpha",
       [&](const std::string& v) {
         cfg.alpha.clear();
         for (const auto& p : split(v, ',')) cfg.alpha.push_back(to_complex(p));
       }},
      {"kappa", [&](const std::string& v) { cfg.kappa = v; }},
      {"lambda_min", [&](const std::string& v) { cfg.lambda_min = to_double(v); }},
      {"lambda_max", [&](const std::string& v) { cfg.lambda_max = to_double(v); }},
      {"lambda_count", [&](const std::string& v) { cfg.lambda_count = static_cast<int>(to_integer(v)); }},
      {"window_min", [&](const std::string& v) { cfg.window_min = to_double(v); }},
      {"window_max", [&](const std::string& v) { cfg.window_max = to_double(v); }},
      {"roots", [&](const std::string& v) { cfg.roots = static_cast<int>(to_integer(v)); }},
      {"N", [&](const std::string& v) { cfg.theorem_index = static_cast<int>(to_integer(v)); }},
      {"f_modes",
       [&](const std::string& v) {
         cfg.f_modes.clear();
         for (const auto& p : split(v, ',')) {
           const auto parts = split(p, ':');
           if (parts.size() != 2) throw std::invalid_argument("f_modes entries are index:coefficient");
           cfg.f_modes.emplace_back(static_cast<int>(to_integer(parts[0])), to_double(parts[1]));
         }
       }},
      {"grid", [&](const std::string& v) { cfg.grid = static_cast<int>(to_integer(v)); }},
      {"tol", [&](const std::string& v) { cfg.tol = to_double(v); }},
      {"root_tol", [&](const std::string& v) { cfg.root_tol = to_double(v); }},
      {"krein_tol", [&](const std::string& v) { cfg.krein_tol = to_double(v); }},
      {"seed", [&](const std::string& v) { cfg.seed = static_cast<std::uint64_t>(to_integer(v)); }},
  };

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw.substr(0, raw.find('#')));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "expected key=value");
    const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(source, line, "unknown key '" + key + "'");
    if (cfg.lines.count(key)) throw ConfigError(source, line, "duplicate key '" + key + "'");
    try {
      it->second(value);
    } catch (const std::exception& e) {
      throw ConfigError(source, line, key + ": " + e.what());
    }
    cfg.lines[key] = line;
  }
  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError(path, 0, "cannot open file");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

void validate(const ExperimentConfig& cfg) {
  const auto fail = [&](const std::string& key, const std::string& msg) {
    const auto it = cfg.lines.find(key);
    throw ConfigError(cfg.source, it == cfg.lines.end() ? 0 : it->second, msg);
  };
  if (cfg.dimension != 1 && cfg.dimension != 3) fail("dimension", "dimension must be 1 or 3");
  if (static_cast<int>(cfg.puncture.size()) != cfg.dimension) fail("puncture", "puncture needs one coordinate per dimension");
  double r2 = 0.0;
  for (double c : cfg.puncture) r2 += c * c;
  if (cfg.dimension == 1 ? !(cfg.puncture[0] > 0.0 && cfg.puncture[0] < 1.0) : !(r2 < 1.0))
    fail("puncture", "puncture must be strictly interior");
  if (cfg.cutoff < 8) fail("M", "M must be at least 8");
  if (cfg.preset != "zero" && cfg.preset != "delta" && cfg.preset != "alpha" && cfg.preset != "tangential")
    fail("preset", "preset must be zero, delta, alpha or tangential");
  if (cfg.preset == "alpha" && static_cast<int>(cfg.alpha.size()) != cfg.dimension + 1)
    fail(cfg.lines.count("alpha") ? "alpha" : "preset", "alpha preset needs d+1 values");
  if (cfg.kappa != "auto" && cfg.kappa != "1" && cfg.kappa != "2") fail("kappa", "kappa must be auto, 1 or 2");
  if (!(cfg.lambda_min < cfg.lambda_max)) fail("lambda_max", "lambda_min must be below lambda_max");
  if (cfg.lambda_count < 1) fail("lambda_count", "lambda_count must be positive");
  if (!(cfg.window_min < cfg.window_max)) fail("window_max", "window_min must be below window_max");
  if (cfg.roots < 0) fail("roots", "roots must be nonnegative");
  if (cfg.theorem_index < 1 || cfg.theorem_index > cfg.cutoff) fail("N", "N must lie in 1..M");
  for (const auto& [n, c] : cfg.f_modes)
    if (n < 1 || n > cfg.cutoff) fail("f_modes", "f_modes index outside 1..M");
  if (cfg.grid < 1) fail("grid", "grid must be positive");
  if (!(cfg.tol > 0.0)) fail("tol", "tol must be positive");
  if (!(cfg.root_tol > 0.0)) fail("root_tol", "root_tol must be positive");
  if (!(cfg.krein_tol > 0.0)) fail("krein_tol", "krein_tol must be positive");
}

}  // namespace pdelta::config
