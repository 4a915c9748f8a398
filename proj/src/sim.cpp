#include "conedef/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace conedef {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedSlack = 1e-9;
constexpr double kSenseTol = 1e-9;
constexpr double kEventTol = 1e-12;

// Removes the velocity component that would push through a side edge (and,
// for the defender, through the outer arc).
Vec2 clamp_velocity(Vec2 x, Vec2 v, const GameParams& p, bool outer_wall) {
  const double r = x.norm();
  if (r > kBoundaryTol) {
    const double a = x.angle();
    for (const double side : {1.0, -1.0}) {
      if (side * a < p.phi - 1e-9) continue;
      const Vec2 n = unit(side * (p.phi + kPi / 2.0));
      const double push = dot(v, n);
      if (push > 0.0) v -= n * push;
    }
    if (outer_wall && r >= p.outer_radius() - 1e-9) {
      const Vec2 n = x / r;
      const double push = dot(v, n);
      if (push > 0.0) v -= n * push;
    }
  }
  return v;
}

Vec2 project_inside_edges(Vec2 x, const GameParams& p) {
  const double a = x.angle();
  if (std::abs(a) <= p.phi) return x;
  const Vec2 u = unit(a > 0.0 ? p.phi : -p.phi);
  return u * std::max(0.0, dot(x, u));
}

Vec2 toward(Vec2 from, Vec2 to, double h) {
  const Vec2 d = to - from;
  const double len = d.norm();
  if (len <= 0.0) return {};
  return d / len * std::min(1.0, len / h);
}

void check_speed(Vec2 v, double limit, const char* who) {
  if (v.norm() > limit + kSpeedSlack) {
    throw std::logic_error(std::string(who) + " exceeded its speed limit");
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Capture:
      return "capture";
    case Outcome::Breach:
      return "breach";
    case Outcome::Evasion:
      return "evasion";
  }
  return "unknown";
}

std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index) {
  std::uint64_t s = base_seed;
  const std::uint64_t a = splitmix64(s);
  std::uint64_t t = a ^ (index * 0xD1B54A32D192ED03ull);
  return splitmix64(t);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

GameOutcome run_game(Vec2 defender_start, double theta_a0, const Strategies& strategies,
                     const CaptureModel& model, const SimOptions& options) {
  return run_game(DefenderCarry{defender_start, false}, theta_a0, strategies, model, options);
}

GameOutcome run_game(const DefenderCarry& start, double theta_a0, const Strategies& strategies,
                     const CaptureModel& model, const SimOptions& options) {
  const GameParams& p = model.params();
  const ConeRegion env = environment_region(p);
  const ConeRegion target = target_region(p);
  const double t_max = 4.0 * p.outer_radius();
  const double dt = options.dt;

  Vec2 x_a = polar(p.outer_radius(), theta_a0);
  Vec2 x_d = start.position;
  double t = 0.0;

  GameOutcome out;
  out.attacker_entry_angle = theta_a0;

  DefenderPhase phase = Idle{};
  if (strategies.defender == DefenderKind::Optimal) {
    const bool via = start.restart_pending || needs_centre_route(x_d, theta_a0, p);
    DefenderPlan plan = plan_defender(x_d, theta_a0, model, options.choice, via);
    phase = plan.phase;
    out.conceded = plan.conceded;
  }

  AttackerMemory mem;
  mem.rng.seed(options.behaviour_seed);

  auto sensed = [&] { return distance(x_a, x_d) <= p.rho_a + kSenseTol; };
  auto update_contacts = [&] {
    if (!sensed()) return;
    if (!mem.detected) {
      attacker_detect(mem, strategies.attacker, x_a, x_d, model, options.choice.capture_samples);
    }
    if (std::holds_alternative<Traveling>(phase)) {
      phase = Pursuing{start_pursuit(x_a, x_d, p, options.epsilon)};
    }
  };
  update_contacts();

  for (;;) {
    double h = dt;
    if (auto* tr = std::get_if<Traveling>(&phase)) {
      if (tr->via_centre) {
        h = std::min(h, std::max(x_d.norm(), kEventTol));
      } else {
        for (const double e : {tr->depart_time, tr->arrive_time}) {
          if (e > t + kEventTol && e < t + h) h = e - t;
        }
      }
    }

    const Vec2 v_a_raw = attacker_velocity(mem, strategies.attacker, x_a, x_d, p, h);
    Vec2 v_d_raw;
    switch (strategies.defender) {
      case DefenderKind::Stationary:
        break;
      case DefenderKind::PurePursuit:
        v_d_raw = (x_a - x_d).normalized();
        break;
      case DefenderKind::Optimal:
        if (auto* tr = std::get_if<Traveling>(&phase)) {
          if (tr->via_centre) {
            v_d_raw = toward(x_d, Vec2{}, h);
          } else if (t >= tr->depart_time - kEventTol) {
            v_d_raw = toward(x_d, tr->target, h);
          }
        } else if (auto* pu = std::get_if<Pursuing>(&phase)) {
          v_d_raw = pursuit_heading(pu->pursuit, x_a, x_d, p).heading;
        } else if (std::holds_alternative<Restarting>(phase)) {
          v_d_raw = toward(x_d, Vec2{}, h);
        }
        break;
    }
    const Vec2 v_a = clamp_velocity(x_a, v_a_raw, p, false);
    const Vec2 v_d = clamp_velocity(x_d, v_d_raw, p, true);
    check_speed(v_a, p.nu, "attacker");
    check_speed(v_d, 1.0, "defender");

    x_a = project_inside_edges(x_a + v_a * h, p);
    x_d = project_inside_edges(x_d + v_d * h, p);
    if (x_d.norm() > p.outer_radius()) x_d = x_d.normalized() * p.outer_radius();
    t += h;

    if (auto* tr = std::get_if<Traveling>(&phase)) {
      if (tr->via_centre && x_d.norm() <= kBoundaryTol) {
        x_d = Vec2{};
        tr->via_centre = false;
      }
    }
    if (!env.contains(x_d)) throw std::logic_error("defender left the environment");

    const bool attacker_inside = env.contains(x_a);
    if (attacker_inside && distance(x_a, x_d) <= options.capture_radius) {
      out.kind = Outcome::Capture;
      out.capture_point = x_a;
      break;
    }
    if (target.contains(x_a)) {
      out.kind = Outcome::Breach;
      break;
    }
    if (!attacker_inside) {
      out.kind = Outcome::Evasion;
      break;
    }

    update_contacts();
    if (auto* tr = std::get_if<Traveling>(&phase)) {
      // Arrived on schedule; the attacker may be a hair outside its sensing
      // radius because the arrival lands between steps.
      if (!tr->via_centre && t >= tr->arrive_time - kEventTol &&
          distance(x_d, tr->target) <= kBoundaryTol) {
        phase = Pursuing{start_pursuit(x_a, x_d, p, options.epsilon)};
      }
    }
    if (t > t_max) throw Timeout("game exceeded its time budget");
  }
  out.terminal_time = t;
  out.defender_final = x_d;
  return out;
}

DefenderCarry next_carry(const GameOutcome& outcome, const Strategies& strategies,
                         const SimOptions& options) {
  if (strategies.defender != DefenderKind::Optimal || outcome.kind == Outcome::Capture) {
    return {outcome.defender_final, false};
  }
  if (options.physical_restart) return {outcome.defender_final, true};
  return {Vec2{}, false};
}

PursuitResult run_pursuit(Vec2 x_a, Vec2 x_d, AttackerKind kind, const CaptureModel& model,
                          const SimOptions& options, double max_time) {
  const GameParams& p = model.params();
  PursuitResult res;
  PursuitState ps = start_pursuit(x_a, x_d, p, options.epsilon);
  res.initial_circle = ps.initial_circle;
  AttackerMemory mem;
  mem.rng.seed(options.behaviour_seed);
  attacker_detect(mem, kind, x_a, x_d, model, options.choice.capture_samples);
  double t = 0.0;
  while (t <= max_time) {
    if (distance(x_a, x_d) <= options.capture_radius) {
      res.captured = true;
      res.capture_point = x_a;
      break;
    }
    const Vec2 v_a = attacker_velocity(mem, kind, x_a, x_d, p, options.dt);
    const PursuitCommand cmd = pursuit_heading(ps, x_a, x_d, p);
    res.fallback_used = res.fallback_used || cmd.fallback;
    check_speed(v_a, p.nu, "attacker");
    x_a += v_a * options.dt;
    x_d += cmd.heading * options.dt;
    t += options.dt;
  }
  res.time = t;
  return res;
}

TrialRecord run_sequence(int n_attackers, std::uint64_t seed, const Strategies& strategies,
                         const CaptureModel& model, const SimOptions& options) {
  if (n_attackers < 1) throw std::invalid_argument("n_attackers must be >= 1");
  const GameParams& p = model.params();
  TrialRecord rec;
  rec.seed = seed;
  std::mt19937_64 rng(seed);
  DefenderCarry carry;
  int captures = 0;
  SimOptions game_options = options;
  for (int n = 0; n < n_attackers; ++n) {
    const double theta = -p.phi + 2.0 * p.phi * uniform01(rng);
    game_options.behaviour_seed = derive_seed(seed, static_cast<std::uint64_t>(n));
    const GameOutcome g = run_game(carry, theta, strategies, model, game_options);
    if (g.kind == Outcome::Capture) ++captures;
    rec.captures.push_back(captures);
    carry = next_carry(g, strategies, options);
    rec.games.push_back(g);
  }
  rec.capture_fraction = static_cast<double>(captures) / n_attackers;
  return rec;
}

MonteCarloSummary monte_carlo(const MonteCarloOptions& mc, const Strategies& strategies,
                              const CaptureModel& model, const SimOptions& options) {
  if (mc.n_trials < 1) throw std::invalid_argument("n_trials must be >= 1");
  MonteCarloSummary summary;
  summary.trials.resize(static_cast<std::size_t>(mc.n_trials));

  int workers = mc.workers > 0 ? mc.workers : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, mc.n_trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (int i = next++; i < mc.n_trials; i = next++) {
      try {
        summary.trials[i] = run_sequence(mc.n_attackers,
                                         derive_seed(mc.base_seed, static_cast<std::uint64_t>(i)),
                                         strategies, model, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  summary.mean_pct.assign(static_cast<std::size_t>(mc.n_attackers), 0.0);
  for (const TrialRecord& tr : summary.trials) {
    for (int n = 0; n < mc.n_attackers; ++n) {
      summary.mean_pct[n] += 100.0 * tr.captures[n] / (n + 1);
    }
  }
  for (double& m : summary.mean_pct) m /= mc.n_trials;
  return summary;
}

std::vector<SweepRow> parameter_sweep(const std::string& param, const std::vector<double>& values,
                                      const GameParams& base, const MonteCarloOptions& mc,
                                      const Strategies& strategies, const SimOptions& options,
                                      const EngagementGrid& grid) {
  if (param != "phi" && param != "nu" && param != "rho_a") {
    throw std::invalid_argument("invalid param: " + param + " (expected phi, nu or rho_a)");
  }
  if (values.empty()) throw std::invalid_argument("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (const double v : values) {
    double phi = base.phi;
    double nu = base.nu;
    double rho_a = base.rho_a;
    if (param == "phi") phi = v;
    if (param == "nu") nu = v;
    if (param == "rho_a") rho_a = v;
    const GameParams p = make_params(base.r_t, base.rho_t, rho_a, nu, phi);
    const CaptureModel model(p, grid);
    rows.push_back({param, v, monte_carlo(mc, strategies, model, options).final_mean_pct()});
  }
  return rows;
}

std::vector<Strategies> standard_matchups() {
  return {{DefenderKind::Optimal, AttackerKind::Optimal},
          {DefenderKind::Optimal, AttackerKind::PureEvader},
          {DefenderKind::PurePursuit, AttackerKind::Optimal},
          {DefenderKind::PurePursuit, AttackerKind::PureEvader}};
}

std::vector<MatchupCurve> strategy_matchup(const std::vector<Strategies>& matchups,
                                           const MonteCarloOptions& mc, const CaptureModel& model,
                                           const SimOptions& options) {
  std::vector<MatchupCurve> curves;
  for (const Strategies& s : matchups) {
    curves.push_back({s, monte_carlo(mc, s, model, options).mean_pct});
  }
  return curves;
}

}  // namespace conedef
