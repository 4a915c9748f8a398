#include <doctest.h>

#include <cmath>

#include "conedef/sim.hpp"

using namespace conedef;

namespace {

const CaptureModel& model() {
  static const CaptureModel m(default_params());
  return m;
}

const Strategies kOurs{DefenderKind::Optimal, AttackerKind::Optimal};

}  // namespace

TEST_CASE("defender at the centre captures every arrival") {
  const GameParams p = default_params();
  for (int k = 0; k <= 10; ++k) {
    const double theta = -p.phi + 2.0 * p.phi * k / 10;
    const GameOutcome g = run_game({0.0, 0.0}, theta, kOurs, model());
    CHECK(g.kind == Outcome::Capture);
    REQUIRE(g.capture_point.has_value());
    CHECK(g.capture_point->norm() <= p.capture_cone_radius() + 0.05);
  }
}

TEST_CASE("an unobstructed attacker breaches after rho_t / nu") {
  const GameParams p = default_params();
  const Strategies idle{DefenderKind::Stationary, AttackerKind::Optimal};
  const GameOutcome g = run_game(polar(3.0, -p.phi), p.phi, idle, model());
  CHECK(g.kind == Outcome::Breach);
  CHECK(std::abs(g.terminal_time - p.rho_t / p.nu) <= 1e-3 + 1e-9);
}

TEST_CASE("every game ends in exactly one consistent outcome") {
  const GameParams p = default_params();
  std::mt19937_64 rng(71);
  for (const auto& st : standard_matchups()) {
    for (int i = 0; i < 30; ++i) {
      const Vec2 x_d = polar(13.0 * uniform01(rng), -p.phi + 2.0 * p.phi * uniform01(rng));
      const double theta = -p.phi + 2.0 * p.phi * uniform01(rng);
      const GameOutcome g = run_game(x_d, theta, st, model());
      CHECK(environment_region(p).contains(g.defender_final));
      CHECK(g.capture_point.has_value() == (g.kind == Outcome::Capture));
      if (g.kind == Outcome::Capture) {
        CHECK(environment_region(p).contains(*g.capture_point));
        CHECK(distance(*g.capture_point, g.defender_final) <= 0.05 + 1e-12);
      }
      if (g.conceded) CHECK(g.kind != Outcome::Capture);
    }
  }
}

TEST_CASE("one attacker from the centre gives 100 percent") {
  const TrialRecord r = run_sequence(1, 5, kOurs, model());
  REQUIRE(r.captures.size() == 1);
  CHECK(r.captures[0] == 1);
  CHECK(r.capture_fraction == 1.0);
}

TEST_CASE("sequence carries the defender and restarts after a loss") {
  const TrialRecord r = run_sequence(40, 9, kOurs, model());
  for (std::size_t n = 1; n < r.games.size(); ++n) {
    if (r.games[n - 1].kind != Outcome::Capture) {
      // The next game starts from the centre and is certain.
      CHECK(r.games[n].kind == Outcome::Capture);
    }
  }
  CHECK_THROWS_AS(run_sequence(0, 1, kOurs, model()), std::invalid_argument);
}

TEST_CASE("physical restart walks back through the centre") {
  SimOptions o;
  o.physical_restart = true;
  GameOutcome lost;
  lost.kind = Outcome::Breach;
  lost.defender_final = {8.0, 1.0};
  const DefenderCarry c = next_carry(lost, kOurs, o);
  CHECK(c.restart_pending);
  CHECK(c.position == Vec2{8.0, 1.0});
  CHECK(next_carry(lost, kOurs, {}).position == Vec2{});
  const TrialRecord r = run_sequence(20, 4, kOurs, model(), o);
  CHECK(r.captures.back() > 0);
}

TEST_CASE("captures stay inside the capture cone") {
  const GameParams p = default_params();
  const MonteCarloSummary s = monte_carlo({4, 60, 3, 1}, kOurs, model());
  int captures = 0;
  for (const auto& tr : s.trials) {
    for (const auto& g : tr.games) {
      CHECK(g.kind != Outcome::Evasion);
      if (!g.capture_point) continue;
      ++captures;
      CHECK(g.capture_point->norm() <= p.capture_cone_radius() + 0.05);
      CHECK(std::abs(g.capture_point->angle()) <= p.phi + 1e-9);
    }
  }
  CHECK(captures > 100);
}

TEST_CASE("worker count does not change results") {
  const MonteCarloSummary a = monte_carlo({6, 15, 21, 1}, kOurs, model());
  const MonteCarloSummary b = monte_carlo({6, 15, 21, 3}, kOurs, model());
  REQUIRE(a.mean_pct.size() == b.mean_pct.size());
  for (std::size_t i = 0; i < a.mean_pct.size(); ++i) CHECK(a.mean_pct[i] == b.mean_pct[i]);
  for (std::size_t t = 0; t < a.trials.size(); ++t) {
    CHECK(a.trials[t].seed == b.trials[t].seed);
    CHECK(a.trials[t].captures == b.trials[t].captures);
  }
}

TEST_CASE("derived seeds are distinct and stable") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = uniform01(rng);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("results converge as the step shrinks") {
  SimOptions fine;
  fine.dt = 5e-4;
  const MonteCarloSummary a = monte_carlo({100, 20, 77, 0}, kOurs, model());
  const MonteCarloSummary b = monte_carlo({100, 20, 77, 0}, kOurs, model(), fine);
  CHECK(std::abs(a.final_mean_pct() - b.final_mean_pct()) < 3.0);
}

TEST_CASE("baseline pairings run without breaking speed limits") {
  for (const auto& st : standard_matchups()) {
    CHECK_NOTHROW(monte_carlo({2, 20, 13, 1}, st, model()));
  }
}
