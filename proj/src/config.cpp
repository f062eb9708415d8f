#include "vclab/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vclab {

namespace {
std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

std::vector<double> parse_double_list(const std::string& comma_separated) {
  std::vector<double> out;
  std::stringstream ss(comma_separated);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

void ExperimentConfig::normalize_and_validate() {
  if (epsilons.empty()) throw std::domain_error("config: epsilon list is empty");
  for (double e : epsilons)
    if (!(e > 0.0)) throw std::domain_error("config: epsilon values must be positive");
  std::sort(epsilons.rbegin(), epsilons.rend());
  if (mach == 0.0) throw std::domain_error("config: mach must be nonzero");
  if (!(length > 0.0)) throw std::domain_error("config: length must be positive");
  if (!(horizon > 0.0)) throw std::domain_error("config: horizon must be positive");
  if (modes < 1) throw std::domain_error("config: modes must be >= 1");
  if (precision_bits < 64) throw std::domain_error("config: precision_bits must be >= 64");
  if (grid_n < 8) throw std::domain_error("config: grid must have >= 8 interior nodes");
  if (dt < 0.0) throw std::domain_error("config: dt must be nonnegative");
  if (!(tolerance > 0.0)) throw std::domain_error("config: tolerance must be positive");
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "epsilon") {
    cfg.epsilons = parse_double_list(value);
  } else if (key == "mach") {
    cfg.mach = std::stod(value);
  } else if (key == "length") {
    cfg.length = std::stod(value);
  } else if (key == "horizon") {
    cfg.horizon = std::stod(value);
  } else if (key == "modes") {
    cfg.modes = std::stoi(value);
  } else if (key == "precision_bits" || key == "precision-bits") {
    cfg.precision_bits = std::stol(value);
  } else if (key == "grid") {
    cfg.grid_n = std::stoi(value);
  } else if (key == "dt") {
    cfg.dt = std::stod(value);
  } else if (key == "tolerance") {
    cfg.tolerance = std::stod(value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "seed") {
    cfg.seed = std::stoull(value);
  } else {
    throw std::domain_error("config: unknown key '" + key + "'");
  }
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::domain_error("config: cannot open '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::domain_error("config: line " + std::to_string(lineno) + " is not key = value");
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void apply_env_precision(ExperimentConfig& cfg, bool flag_was_set) {
  if (flag_was_set) return;
  const char* env = std::getenv("VC_PRECISION_BITS");
  if (env && *env) cfg.precision_bits = std::stol(env);
}

}  // namespace vclab
