#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "conedef/cli.hpp"

namespace {

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> dt;
  std::optional<int> trials;
  std::optional<int> attackers;
  std::optional<int> workers;
  std::optional<std::string> defender;
  std::optional<std::string> attacker;
  std::vector<std::string> set;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "key = value config file");
  cmd->add_option("--seed", o.seed, "base random seed");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--dt", o.dt, "integration step");
  cmd->add_option("--trials", o.trials, "number of trials");
  cmd->add_option("--attackers", o.attackers, "attackers per trial");
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)");
  cmd->add_option("--defender", o.defender, "optimal | pure_pursuit");
  cmd->add_option("--attacker", o.attacker, "optimal | pure_evader");
  cmd->add_option("--set", o.set, "extra key=value overrides");
}

// Config file, then the environment, then flags.
conedef::RunConfig resolve(const Overrides& o) {
  conedef::RunConfig cfg;
  if (!o.config.empty()) conedef::load_config_file(cfg, o.config);
  if (const char* env = std::getenv(conedef::kOutputDirEnv); env && *env) cfg.output_dir = env;
  for (const std::string& kv : o.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw conedef::ConfigError(kv, "--set expects key=value");
    conedef::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.dt) cfg.dt = *o.dt;
  if (o.trials) cfg.n_trials = *o.trials;
  if (o.attackers) cfg.n_attackers = *o.attackers;
  if (o.workers) cfg.workers = *o.workers;
  if (o.defender) cfg.defender = *o.defender;
  if (o.attacker) cfg.attacker = *o.attacker;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cone target-defense simulator"};
  app.require_subcommand(1);
  Overrides o;
  std::string param;
  std::string values;

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo runs: trials.csv, summary.csv");
  auto* bounds = app.add_subcommand("bounds", "Markov-chain bounds: bounds.csv");
  auto* distribution = app.add_subcommand("distribution", "capture probability field: field.csv");
  auto* sweep = app.add_subcommand("sweep", "parameter sweep: sweep.csv");
  auto* matchup = app.add_subcommand("matchup", "strategy pairings: matchup.csv");
  for (auto* cmd : {simulate, bounds, distribution, sweep, matchup}) add_common(cmd, o);
  sweep->add_option("--param", param, "phi | nu | rho_a")->required();
  sweep->add_option("--values", values, "comma separated, e.g. pi/6,pi/4")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const conedef::RunConfig cfg = resolve(o);
    std::vector<std::filesystem::path> written;
    if (simulate->parsed()) written = conedef::cmd_simulate(cfg);
    if (bounds->parsed()) written = conedef::cmd_bounds(cfg);
    if (distribution->parsed()) written = conedef::cmd_distribution(cfg);
    if (matchup->parsed()) written = conedef::cmd_matchup(cfg);
    if (sweep->parsed()) {
      std::vector<double> list;
      try {
        list = conedef::parse_real_list(values);
      } catch (const std::invalid_argument& e) {
        throw conedef::ConfigError("values", std::string("invalid values: ") + e.what());
      }
      if (list.empty()) {
        std::cerr << "error: --values must list at least one value\n";
        return 2;
      }
      written = conedef::cmd_sweep(cfg, param, list);
    }
    for (const auto& p : written) std::cout << p.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
