#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "conedef/strategies.hpp"

namespace conedef {

enum class Outcome { Capture, Breach, Evasion };

std::string to_string(Outcome o);

struct GameOutcome {
  Outcome kind = Outcome::Breach;
  double terminal_time = 0.0;
  std::optional<Vec2> capture_point;
  double attacker_entry_angle = 0.0;
  Vec2 defender_final;
  bool conceded = false;  // the defender gave the game up at the start
};

struct Strategies {
  DefenderKind defender = DefenderKind::Optimal;
  AttackerKind attacker = AttackerKind::Optimal;
};

struct SimOptions {
  double dt = 1e-3;
  double epsilon = 0.01;
  double capture_radius = 0.05;
  bool physical_restart = false;  // walk back to the centre instead of teleporting
  ChoiceOptions choice;
  std::uint64_t behaviour_seed = 0;  // drives the randomised attacker behaviours
};

class Timeout : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Defender state carried from one game to the next.
struct DefenderCarry {
  Vec2 position;
  bool restart_pending = false;  // physical restart still under way
};

/// Plays one attacker against the defender. Throws Timeout when the game
/// runs past 4 (r_t + rho_t) time units.
GameOutcome run_game(const DefenderCarry& start, double theta_a0, const Strategies& strategies,
                     const CaptureModel& model, const SimOptions& options);

GameOutcome run_game(Vec2 defender_start, double theta_a0, const Strategies& strategies,
                     const CaptureModel& model, const SimOptions& options = {});

/// Where the defender starts the next game after `outcome`.
DefenderCarry next_carry(const GameOutcome& outcome, const Strategies& strategies,
                         const SimOptions& options);

struct PursuitResult {
  bool captured = false;
  Vec2 capture_point;
  double time = 0.0;
  ApolloniusCircle initial_circle;
  bool fallback_used = false;
};

/// Pursuit from a fixed start in open space (no walls, no target), the
/// attacker following `kind` from the first step.
PursuitResult run_pursuit(Vec2 x_a, Vec2 x_d, AttackerKind kind, const CaptureModel& model,
                          const SimOptions& options, double max_time);

/// Deterministic per-trial generator: stream i of base_seed.
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index);

/// Uniform double in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng);

struct TrialRecord {
  std::uint64_t seed = 0;
  std::vector<GameOutcome> games;
  std::vector<int> captures;  // running capture count S(n)
  double capture_fraction = 0.0;
};

TrialRecord run_sequence(int n_attackers, std::uint64_t seed, const Strategies& strategies,
                         const CaptureModel& model, const SimOptions& options = {});

struct MonteCarloSummary {
  std::vector<TrialRecord> trials;
  std::vector<double> mean_pct;  // mean running capture percentage per game index

  double final_mean_pct() const { return mean_pct.empty() ? 0.0 : mean_pct.back(); }
};

struct MonteCarloOptions {
  int n_trials = 100;
  int n_attackers = 200;
  std::uint64_t base_seed = 1;
  int workers = 0;  // 0 uses every hardware thread
};

MonteCarloSummary monte_carlo(const MonteCarloOptions& mc, const Strategies& strategies,
                              const CaptureModel& model, const SimOptions& options = {});

struct SweepRow {
  std::string param;
  double value = 0.0;
  double mean_pct = 0.0;
};

/// Re-runs monte_carlo for each value of one of phi, nu, rho_a.
std::vector<SweepRow> parameter_sweep(const std::string& param, const std::vector<double>& values,
                                      const GameParams& base, const MonteCarloOptions& mc,
                                      const Strategies& strategies, const SimOptions& options = {},
                                      const EngagementGrid& grid = {});

struct MatchupCurve {
  Strategies strategies;
  std::vector<double> mean_pct;
};

/// The four defender/attacker pairings of the baseline comparison.
std::vector<Strategies> standard_matchups();

std::vector<MatchupCurve> strategy_matchup(const std::vector<Strategies>& matchups,
                                           const MonteCarloOptions& mc, const CaptureModel& model,
                                           const SimOptions& options = {});

}  // namespace conedef
