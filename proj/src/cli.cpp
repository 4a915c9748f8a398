#include "conedef/cli.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "conedef/bounds.hpp"

namespace conedef {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + s + "'");
  }
  return v;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& s) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError(key, "invalid " + key + ": expected an integer, got '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw ConfigError(key, "invalid " + key + ": expected true or false, got '" + s + "'");
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << body;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::filesystem::path prepare_dir(const RunConfig& cfg) {
  const std::filesystem::path dir(cfg.output_dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

double parse_real(const std::string& raw) {
  std::string s;
  for (const char c : raw) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  const auto at = s.find("pi");
  if (at == std::string::npos) return parse_plain(s);
  // [k*]pi[/d]
  double k = 1.0;
  if (at > 0) {
    if (s[at - 1] != '*') throw std::invalid_argument("bad pi expression: '" + raw + "'");
    k = parse_plain(s.substr(0, at - 1));
  }
  double d = 1.0;
  const std::string rest = s.substr(at + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw std::invalid_argument("bad pi expression: '" + raw + "'");
    d = parse_plain(rest.substr(1));
  }
  return k * std::numbers::pi / d;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_real(item));
  }
  return out;
}

void apply_setting(RunConfig& cfg, const std::string& key_raw, const std::string& value_raw) {
  const std::string key = trim(key_raw);
  const std::string value = trim(value_raw);
  auto real = [&](double& field) {
    try {
      field = parse_real(value);
    } catch (const std::invalid_argument&) {
      throw ConfigError(key, "invalid " + key + ": expected a number, got '" + value + "'");
    }
  };
  if (key == "r_t") return real(cfg.r_t);
  if (key == "rho_t") return real(cfg.rho_t);
  if (key == "rho_a") return real(cfg.rho_a);
  if (key == "nu") return real(cfg.nu);
  if (key == "phi") return real(cfg.phi);
  if (key == "dt") return real(cfg.dt);
  if (key == "epsilon") return real(cfg.epsilon);
  if (key == "capture_radius") return real(cfg.capture_radius);
  if (key == "n_trials") cfg.n_trials = parse_int<int>(key, value);
  else if (key == "n_attackers") cfg.n_attackers = parse_int<int>(key, value);
  else if (key == "seed") cfg.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "tau_grid") cfg.tau_grid = parse_int<int>(key, value);
  else if (key == "theta_samples") cfg.theta_samples = parse_int<int>(key, value);
  else if (key == "workers") cfg.workers = parse_int<int>(key, value);
  else if (key == "field_radii") cfg.field_radii = parse_int<int>(key, value);
  else if (key == "field_angles") cfg.field_angles = parse_int<int>(key, value);
  else if (key == "defender") cfg.defender = value;
  else if (key == "attacker") cfg.attacker = value;
  else if (key == "output_dir") cfg.output_dir = value;
  else if (key == "physical_restart") cfg.physical_restart = parse_bool(key, value);
  else if (key == "full_set") cfg.full_set = parse_bool(key, value);
  else throw ConfigError(key, "unknown config key: " + key);
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    apply_setting(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

GameParams validate(const RunConfig& cfg) {
  const GameParams p = make_params(cfg.r_t, cfg.rho_t, cfg.rho_a, cfg.nu, cfg.phi);
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, std::string("invalid ") + field + ": " + what);
  };
  require(cfg.n_trials >= 1, "n_trials", "must be >= 1");
  require(cfg.n_attackers >= 1, "n_attackers", "must be >= 1");
  require(std::isfinite(cfg.dt) && cfg.dt > 0.0, "dt", "must be > 0");
  require(std::isfinite(cfg.epsilon) && cfg.epsilon > 0.0, "epsilon", "must be > 0");
  require(std::isfinite(cfg.capture_radius) && cfg.capture_radius > 0.0, "capture_radius",
          "must be > 0");
  require(cfg.tau_grid >= 2, "tau_grid", "must be >= 2");
  require(cfg.theta_samples >= 8, "theta_samples", "must be >= 8");
  require(cfg.workers >= 0, "workers", "must be >= 0");
  require(cfg.field_radii >= 2 && cfg.field_angles >= 2, "field_radii",
          "field grid needs at least 2x2 cells");
  require(!cfg.output_dir.empty(), "output_dir", "must not be empty");
  try {
    parse_defender(cfg.defender);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("defender", e.what());
  }
  try {
    parse_attacker(cfg.attacker);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("attacker", e.what());
  }
  return p;
}

SimOptions sim_options(const RunConfig& cfg) {
  SimOptions o;
  o.dt = cfg.dt;
  o.epsilon = cfg.epsilon;
  o.capture_radius = cfg.capture_radius;
  o.physical_restart = cfg.physical_restart;
  o.choice.capture_samples = cfg.theta_samples;
  o.choice.full_set = cfg.full_set;
  return o;
}

EngagementGrid engagement_grid(const RunConfig& cfg) {
  EngagementGrid g;
  g.tau_points = cfg.tau_grid;
  return g;
}

MonteCarloOptions monte_carlo_options(const RunConfig& cfg) {
  MonteCarloOptions mc;
  mc.n_trials = cfg.n_trials;
  mc.n_attackers = cfg.n_attackers;
  mc.base_seed = cfg.seed;
  mc.workers = cfg.workers;
  return mc;
}

Strategies strategies(const RunConfig& cfg) {
  return {parse_defender(cfg.defender), parse_attacker(cfg.attacker)};
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid a distinct "-0.000000" for values that round to zero.
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

std::vector<std::filesystem::path> cmd_simulate(const RunConfig& cfg) {
  const GameParams p = validate(cfg);
  const CaptureModel model(p, engagement_grid(cfg));
  const MonteCarloSummary mc =
      monte_carlo(monte_carlo_options(cfg), strategies(cfg), model, sim_options(cfg));
  const auto dir = prepare_dir(cfg);

  std::ostringstream trials;
  trials << "trial,game,theta_a0,outcome,capture_x,capture_y,cum_capture_pct\n";
  for (std::size_t i = 0; i < mc.trials.size(); ++i) {
    const TrialRecord& tr = mc.trials[i];
    for (std::size_t n = 0; n < tr.games.size(); ++n) {
      const GameOutcome& g = tr.games[n];
      trials << i << ',' << n + 1 << ',' << fmt6(g.attacker_entry_angle) << ','
             << to_string(g.kind) << ',';
      if (g.capture_point) trials << fmt6(g.capture_point->x) << ',' << fmt6(g.capture_point->y);
      else trials << ',';
      trials << ',' << fmt6(100.0 * tr.captures[n] / static_cast<double>(n + 1)) << '\n';
    }
  }

  const auto lower = markov_bound(cfg.n_attackers, p_star(model));
  const auto upper = markov_bound(cfg.n_attackers, q_star(model));
  std::ostringstream summary;
  summary << "game,mean_pct,lower_bound_pct,upper_bound_pct\n";
  for (std::size_t n = 0; n < mc.mean_pct.size(); ++n) {
    summary << n + 1 << ',' << fmt6(mc.mean_pct[n]) << ',' << fmt6(lower[n]) << ','
            << fmt6(upper[n]) << '\n';
  }
  write_file(dir / "trials.csv", trials.str());
  write_file(dir / "summary.csv", summary.str());
  return {dir / "trials.csv", dir / "summary.csv"};
}

std::vector<std::filesystem::path> cmd_bounds(const RunConfig& cfg) {
  const GameParams p = validate(cfg);
  const CaptureModel model(p, engagement_grid(cfg));
  std::ostringstream os;
  os << "n,lower_pct,upper_pct\n";
  for (const BoundsRow& row : bounds_table(model, cfg.n_attackers)) {
    os << row.n << ',' << fmt6(row.lower_pct) << ',' << fmt6(row.upper_pct) << '\n';
  }
  const auto dir = prepare_dir(cfg);
  write_file(dir / "bounds.csv", os.str());
  return {dir / "bounds.csv"};
}

std::vector<std::filesystem::path> cmd_distribution(const RunConfig& cfg) {
  const GameParams p = validate(cfg);
  const CaptureModel model(p, engagement_grid(cfg));
  const CaptureProbabilityField f =
      capture_distribution(model, FieldGrid{cfg.field_radii, cfg.field_angles});
  std::ostringstream os;
  os << "r,theta,p\n";
  for (std::size_t i = 0; i < f.radii.size(); ++i) {
    for (std::size_t j = 0; j < f.angles.size(); ++j) {
      os << fmt6(f.radii[i]) << ',' << fmt6(f.angles[j]) << ',' << fmt6(f.at(i, j)) << '\n';
    }
  }
  const auto dir = prepare_dir(cfg);
  write_file(dir / "field.csv", os.str());
  return {dir / "field.csv"};
}

std::vector<std::filesystem::path> cmd_sweep(const RunConfig& cfg, const std::string& param,
                                             const std::vector<double>& values) {
  const GameParams p = validate(cfg);
  if (values.empty()) throw ConfigError("values", "sweep needs a non-empty --values list");
  if (param != "phi" && param != "nu" && param != "rho_a") {
    throw ConfigError("param", "invalid param: " + param + " (expected phi, nu or rho_a)");
  }
  const auto rows = parameter_sweep(param, values, p, monte_carlo_options(cfg), strategies(cfg),
                                    sim_options(cfg), engagement_grid(cfg));
  std::ostringstream os;
  os << "param,value,mean_pct\n";
  for (const SweepRow& r : rows) os << r.param << ',' << fmt6(r.value) << ',' << fmt6(r.mean_pct) << '\n';
  const auto dir = prepare_dir(cfg);
  write_file(dir / "sweep.csv", os.str());
  return {dir / "sweep.csv"};
}

std::vector<std::filesystem::path> cmd_matchup(const RunConfig& cfg) {
  const GameParams p = validate(cfg);
  const CaptureModel model(p, engagement_grid(cfg));
  const auto curves =
      strategy_matchup(standard_matchups(), monte_carlo_options(cfg), model, sim_options(cfg));
  std::ostringstream os;
  os << "defender,attacker,game,mean_pct\n";
  for (const MatchupCurve& c : curves) {
    for (std::size_t n = 0; n < c.mean_pct.size(); ++n) {
      os << to_string(c.strategies.defender) << ',' << to_string(c.strategies.attacker) << ','
         << n + 1 << ',' << fmt6(c.mean_pct[n]) << '\n';
    }
  }
  const auto dir = prepare_dir(cfg);
  write_file(dir / "matchup.csv", os.str());
  return {dir / "matchup.csv"};
}

}  // namespace conedef
