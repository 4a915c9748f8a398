#pragma once

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "conedef/sim.hpp"

namespace conedef {

/// Everything a run needs. Defaults reproduce the reference scenario.
struct RunConfig {
  double r_t = 6.0;
  double rho_t = 8.0;
  double rho_a = 1.0;
  double nu = 0.85;
  double phi = std::numbers::pi / 3.0;
  int n_trials = 100;
  int n_attackers = 200;
  std::uint64_t seed = 1;
  double dt = 1e-3;
  double epsilon = 0.01;
  double capture_radius = 0.05;
  int tau_grid = 200;
  int theta_samples = kDefaultCaptureSamples;
  std::string defender = "optimal";
  std::string attacker = "optimal";
  std::string output_dir = "out";
  int workers = 0;
  bool physical_restart = false;
  bool full_set = false;
  int field_radii = 100;
  int field_angles = 100;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : std::runtime_error(msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Parses a real, accepting multiples of pi such as "pi/3" or "5*pi/12".
double parse_real(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// Applies one key = value setting. Throws ConfigError naming the key.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads a flat key = value file; '#' starts a comment.
void load_config_file(RunConfig& cfg, const std::filesystem::path& path);

/// Environment variable that overrides output_dir (flags still win).
inline constexpr const char* kOutputDirEnv = "CONEDEF_OUTPUT_DIR";

/// Checks every field; throws ConfigError or ParameterViolation.
GameParams validate(const RunConfig& cfg);

SimOptions sim_options(const RunConfig& cfg);
EngagementGrid engagement_grid(const RunConfig& cfg);
MonteCarloOptions monte_carlo_options(const RunConfig& cfg);
Strategies strategies(const RunConfig& cfg);

/// Fixed six-decimal rendering used in every CSV.
std::string fmt6(double v);

/// Each command writes its CSVs into cfg.output_dir and returns their paths.
std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_bounds(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_distribution(const RunConfig& cfg);
std::vector<std::filesystem::path> cmd_sweep(const RunConfig& cfg, const std::string& param,
                                             const std::vector<double>& values);
std::vector<std::filesystem::path> cmd_matchup(const RunConfig& cfg);

}  // namespace conedef
