#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "conedef/engagement.hpp"
#include "oracles.hpp"

using namespace conedef;

namespace {

constexpr double kPi = std::numbers::pi;

// Circle built from positions through the geometry module, not the solver.
ApolloniusCircle circle_at(double tau, double theta_a0, double dev, const GameParams& p) {
  const Vec2 x_a = polar(p.outer_radius() - p.nu * tau, theta_a0);
  return apollonius_circle(x_a, x_a + polar(p.rho_a, theta_a0 + dev), p);
}

bool guarded_by_sampling(const ApolloniusCircle& c, const GameParams& p) {
  return oracle::distance_to_target(c.center, p, 3000) >= c.radius;
}

bool contained_by_sampling(const ApolloniusCircle& c, const GameParams& p) {
  return oracle::distance_to_escape(c.center, p, 3000) >= c.radius;
}

// Jumps above 0.05 must shrink away under repeated halving of the step. The
// value leaves pi with a square-root profile, so plain step bounds are too crude.
bool continuous_between(double r0, double v0, double r1, double v1, const GameParams& p,
                        int depth) {
  if (std::abs(v1 - v0) <= 0.05) return true;
  if (depth == 0) return false;
  const double rm = 0.5 * (r0 + r1);
  const double vm = max_theta_max(rm, p).value;
  return continuous_between(r0, v0, rm, vm, p, depth - 1) &&
         continuous_between(rm, vm, r1, v1, p, depth - 1);
}

}  // namespace

TEST_CASE("critical times") {
  const GameParams p = default_params();
  const CriticalTimes ct = critical_times(p);
  CHECK(ct.tau1 == doctest::Approx(2.7451).epsilon(1e-4));
  CHECK(ct.tau2 == doctest::Approx(8.8713).epsilon(1e-4));
  CHECK(ct.tau3 == doctest::Approx(0.5405).epsilon(1e-4));
  CHECK(ct.tau4 == doctest::Approx(6.6667).epsilon(1e-4));
  CHECK(ct.tau4 - ct.tau3 == doctest::Approx(2.0 * p.nu * p.rho_a / (1.0 - p.nu * p.nu)));
  CHECK(ct.tau2 - ct.tau4 == doctest::Approx(2.2047).epsilon(1e-4));
  CHECK(ct.tau3 < ct.tau4);
  CHECK(ct.tau1 < ct.tau2);
}

TEST_CASE("regimes flip at the critical times") {
  const GameParams p = default_params();
  const CriticalTimes ct = critical_times(p);
  const double d = 1e-3;
  CHECK(guard_threshold(ct.tau1 - d, 0.0, p) == 0.0);
  REQUIRE(guard_threshold(ct.tau1 + d, 0.0, p).has_value());
  CHECK(*guard_threshold(ct.tau1 + d, 0.0, p) > 0.0);
  CHECK(guard_threshold(ct.tau2 - d, 0.0, p).has_value());
  CHECK_FALSE(guard_threshold(ct.tau2 + d, 0.0, p).has_value());
  CHECK_FALSE(escape_threshold(ct.tau3 - d, 0.0, p).has_value());
  REQUIRE(escape_threshold(ct.tau3 + d, 0.0, p).has_value());
  CHECK(*escape_threshold(ct.tau4 - d, 0.0, p) < kPi);
  CHECK(escape_threshold(ct.tau4 + d, 0.0, p) == kPi);
}

TEST_CASE("guard threshold at tau = 5 matches the arc formula") {
  const GameParams p = default_params();
  ThresholdSolveTrace trace;
  const auto th = guard_threshold(5.0, 0.0, p, Side::Both, &trace);
  REQUIRE(th.has_value());
  const double a = 14.0 - 0.85 * 5.0;
  const double b = p.beta;
  const double rhs = (std::pow(6.0 + p.gamma, 2) - std::pow(a - b, 2)) / (4.0 * a * b);
  CHECK(trace.rhs_guard == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(*th == doctest::Approx(2.0 * std::asin(std::sqrt(rhs))).epsilon(1e-12));
  CHECK(circle_at(5.0, 0.0, *th, p).center.norm() ==
        doctest::Approx(p.r_t + p.engagement_radius()).epsilon(1e-9));
}

TEST_CASE("escape threshold at tau = 2 is internally tangent") {
  const GameParams p = default_params();
  const auto th = escape_threshold(2.0, 0.0, p);
  REQUIRE(th.has_value());
  const ApolloniusCircle c = circle_at(2.0, 0.0, *th, p);
  CHECK(c.center.norm() + c.radius == doctest::Approx(p.outer_radius()).epsilon(1e-9));
}

TEST_CASE("thresholds are tangencies on a 200-point grid") {
  const GameParams p = default_params();
  for (const double theta_a0 : {0.0, 0.5, 0.95, -0.8}) {
    for (const Side side : {Side::Positive, Side::Negative}) {
      const double s = side == Side::Positive ? 1.0 : -1.0;
      for (int i = 0; i < 200; ++i) {
        const double tau = 0.01 + 10.0 * i / 199.0;
        ThresholdSolveTrace tr;
        if (const auto g = guard_threshold(tau, theta_a0, p, side, &tr); g && *g > 0.0) {
          const ApolloniusCircle c = circle_at(tau, theta_a0, s * *g, p);
          const bool in_span = std::abs(c.center.angle()) <= p.phi;
          double gap;
          if (in_span) {
            gap = c.center.norm() - (p.r_t + c.radius);
          } else {
            const Vec2 u = unit(c.center.angle() > 0 ? p.phi : -p.phi);
            const double t = std::clamp(dot(c.center, u), 0.0, p.r_t);
            gap = distance(c.center, u * t) - c.radius;
          }
          CHECK(std::abs(gap) < 1e-6);
          CHECK(tr.solver_iterations <= kMaxBisectionIterations);
        }
        if (const auto e = escape_threshold(tau, theta_a0, p, side); e && *e < kPi) {
          const ApolloniusCircle c = circle_at(tau, theta_a0, s * *e, p);
          double gap;
          if (std::abs(c.center.angle()) <= p.phi) {
            gap = p.outer_radius() - (c.center.norm() + c.radius);
          } else {
            const Vec2 u = unit(c.center.angle() > 0 ? p.phi : -p.phi);
            const double t = std::max(dot(c.center, u), p.outer_radius());
            gap = distance(c.center, u * t) - c.radius;
          }
          CHECK(std::abs(gap) < 1e-6);
        }
      }
    }
  }
}

TEST_CASE("thresholds agree with a sampled guard/escape scan") {
  const GameParams p = default_params();
  const int n = 720;
  const double step = kPi / n;
  for (const double theta_a0 : {0.0, 0.7, -0.95}) {
    for (const Side side : {Side::Positive, Side::Negative}) {
      const double s = side == Side::Positive ? 1.0 : -1.0;
      for (int i = 0; i < 24; ++i) {
        const double tau = 0.2 + 9.5 * i / 23.0;
        // Smallest deviation from which every larger sampled deviation guards,
        // and largest below which every smaller one stays contained.
        int first_guard = n + 1;
        for (int k = n; k >= 0; --k) {
          if (!guarded_by_sampling(circle_at(tau, theta_a0, s * k * step, p), p)) break;
          first_guard = k;
        }
        int last_contained = -1;
        for (int k = 0; k <= n; ++k) {
          if (!contained_by_sampling(circle_at(tau, theta_a0, s * k * step, p), p)) break;
          last_contained = k;
        }
        const auto g = guard_threshold(tau, theta_a0, p, side);
        const auto e = escape_threshold(tau, theta_a0, p, side);
        CAPTURE(tau);
        CAPTURE(theta_a0);
        if (first_guard > n) {
          CHECK_FALSE(g.has_value());
        } else {
          REQUIRE(g.has_value());
          CHECK(*g <= first_guard * step + 5e-3);
          CHECK(*g >= (first_guard - 1) * step - 5e-3);
        }
        if (last_contained < 0) {
          CHECK_FALSE(e.has_value());
        } else {
          REQUIRE(e.has_value());
          CHECK(*e >= last_contained * step - 5e-3);
          CHECK(*e <= (last_contained + 1) * step + 5e-3);
        }
      }
    }
  }
}

TEST_CASE("engagement interval") {
  const GameParams p = default_params();
  const CriticalTimes ct = critical_times(p);
  const auto band = engagement_interval(0.5 * (ct.tau4 + ct.tau2), 0.0, p);
  REQUIRE(band.has_value());
  CHECK(band->theta_lo < band->theta_hi);
  CHECK(band->theta_hi == kPi);
  CHECK_FALSE(engagement_interval(ct.tau3 - 0.01, 0.0, p).has_value());
}

TEST_CASE("boundary parameters leave at most a degenerate interval") {
  // rho_t = 2 gamma rho_a breaks the first assumption, so fill the struct by hand.
  GameParams p = default_params();
  p.rho_t = 2.0 * p.gamma * p.rho_a;
  const CriticalTimes ct = critical_times(p);
  CHECK(ct.tau2 == doctest::Approx(ct.tau4).epsilon(1e-12));
  double widest = 0.0;
  for (int i = 0; i <= 20000; ++i) {
    const double tau = 0.01 + (p.outer_radius() / p.nu - 0.02) * i / 20000.0;
    if (const auto band = engagement_interval(tau, 0.0, p)) {
      widest = std::max(widest, band->theta_hi - band->theta_lo);
    }
  }
  CHECK(widest < 0.05);
}

TEST_CASE("theta_max special cases") {
  const GameParams p = default_params();
  const double tau = 3.0;
  const double r_eng = p.outer_radius() - tau * p.nu + p.rho_a;
  CHECK(*theta_max({tau, 0.0}, r_eng - 1.0, p) ==
        doctest::Approx(std::acos((r_eng * r_eng + std::pow(r_eng - 1.0, 2) - 9.0) /
                                  (2.0 * r_eng * (r_eng - 1.0)))));
  const EngagementConfig c0{0.0, 0.9};
  const Vec2 e = polar(p.outer_radius(), 0.0) + polar(p.rho_a, 0.9);
  CHECK(*theta_max(c0, e.norm(), p) == doctest::Approx(e.angle()).epsilon(1e-9));
  CHECK_FALSE(theta_max({1.0, 0.0}, 2.0, p).has_value());
  CHECK(*theta_max({20.0, 0.3}, 5.0, p) == kPi);
}

TEST_CASE("theta_max agrees with a reach scan over initial angles") {
  const GameParams p = default_params();
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(0.0, 12.0);
  std::uniform_real_distribution<double> uth(0.0, kPi);
  std::uniform_real_distribution<double> ur(0.1, 14.0);
  auto check_one = [&](double tau, double th, double r) {
    const double scan = oracle::theta_max_scan(tau, th, r, p, 200000);
    const auto v = theta_max({tau, th}, r, p);
    CAPTURE(tau);
    CAPTURE(th);
    CAPTURE(r);
    if (scan < 0.0) {
      CHECK_FALSE(v.has_value());
    } else {
      REQUIRE(v.has_value());
      CHECK(std::abs(*v - scan) < 1e-4);
    }
  };
  check_one(7.0, kPi / 2, 6.0);
  for (int i = 0; i < 300; ++i) check_one(ut(rng), uth(rng), ur(rng));
}

TEST_CASE("max_theta_max dominates the engagement set and varies continuously") {
  const GameParams p = default_params();
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ut(0.0, 1.0);
  const CriticalTimes ct = critical_times(p);
  double prev = -1.0;
  for (int i = 0; i <= 130; ++i) {
    const double r = 0.5 + 0.1 * i;
    const ThetaMaxResult m = max_theta_max(r, p);
    CHECK(std::isfinite(m.value));
    CHECK(in_engagement_set(m.config, 0.0, p));
    CHECK(theta_max(m.config, r, p).value() == doctest::Approx(m.value).epsilon(1e-9));
    for (int k = 0; k < 40; ++k) {
      const double tau = ct.tau3 + (ct.tau2 - ct.tau3) * ut(rng);
      const auto band = engagement_interval(tau, 0.0, p, Side::Positive);
      if (!band) continue;
      const double th = band->theta_lo + (band->theta_hi - band->theta_lo) * ut(rng);
      if (const auto v = theta_max({tau, th}, r, p)) CHECK(*v <= m.value + 1e-6);
    }
    if (prev >= 0.0) CHECK(continuous_between(r - 0.1, prev, r, m.value, p, 6));
    prev = m.value;
  }
  CHECK(std::isfinite(max_theta_max(0.0, p).value));
}

TEST_CASE("capturable") {
  const GameParams p = default_params();
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ua(-p.phi, p.phi);
  std::uniform_real_distribution<double> ur(0.0, 13.0);
  for (int i = 0; i < 20; ++i) {
    const double a = ua(rng);
    const double d = ua(rng);
    const double r = ur(rng);
    CHECK(capturable(a, a, r, p));
    CHECK(capturable(a, d, 0.0, p));
    CHECK(capturable(a, d, r, p) == capturable(-a, -d, r, p));
  }
  CHECK_FALSE(capturable(p.phi, 0.0, p.capture_cone_radius(), p));
}

TEST_CASE("reachable engagement set") {
  const GameParams p = default_params();
  for (const double theta_a0 : {-p.phi, -0.3, 0.0, 0.6, p.phi}) {
    const auto set = reachable_engagement_set({0.0, 0.0}, theta_a0, p);
    CHECK_FALSE(set.empty());
    for (const auto& c : set) {
      CHECK(in_engagement_set(c, theta_a0, p));
      CHECK(can_reach(c, theta_a0, {0.0, 0.0}, p));
    }
    for (std::size_t i = 1; i < set.size(); ++i) {
      const bool ordered = set[i - 1].tau_eng < set[i].tau_eng ||
                           (set[i - 1].tau_eng == set[i].tau_eng &&
                            set[i - 1].theta_eng < set[i].theta_eng);
      CHECK(ordered);
    }
  }
  const Vec2 corner = polar(p.capture_cone_radius(), p.phi);
  CHECK(reachable_engagement_set(corner, -p.phi, p).empty());
}

TEST_CASE("simplified set holds tangent, reachable configurations only") {
  const GameParams p = default_params();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ua(-p.phi, p.phi);
  std::uniform_real_distribution<double> ur(0.0, 12.0);
  for (int i = 0; i < 30; ++i) {
    const Vec2 x_d0 = polar(ur(rng), ua(rng));
    const double theta_a0 = ua(rng);
    for (const auto& c : simplified_engagement_set(x_d0, theta_a0, p)) {
      const ApolloniusCircle ac = circle_at(c.tau_eng, theta_a0, c.theta_eng, p);
      CHECK(std::abs(ac.center.norm() - (p.r_t + p.engagement_radius())) < 1e-6);
      CHECK(ac.center.norm() + ac.radius <= p.capture_cone_radius() + 1e-6);
      CHECK(in_engagement_set(c, theta_a0, p));
      CHECK(can_reach(c, theta_a0, x_d0, p));
    }
  }
  // An early configuration deep inside the guard band is not tangent and is left out.
  const EngagementConfig early{1.0, 0.0};
  REQUIRE(in_engagement_set(early, 0.0, p));
  CHECK(engagement_circle(early, 0.0, p).center.norm() > p.r_t + p.engagement_radius() + 1e-3);
  for (const auto& c : simplified_engagement_set({0.0, 0.0}, 0.0, p)) {
    CHECK_FALSE(c == early);
  }
}

TEST_CASE("hidden travel") {
  const GameParams p = default_params();
  // Engaging from directly in front means crossing the attacker's path.
  const EngagementConfig front{5.0, kPi};
  const Vec2 behind = polar(p.outer_radius() - 0.5, 0.0);
  CHECK_FALSE(travel_stays_hidden(front, 0.0, behind, p));
  // Out of reach from the centre: the point is about 9.9 away at tau = 5.
  CHECK_FALSE(travel_stays_hidden({5.0, 1.5}, 0.0, {0.0, 0.0}, p));

  // Replay the returned trip densely: leave, travel at unit speed, wait.
  for (const Vec2 start : {Vec2{0.0, 0.0}, polar(6.0, 0.9), polar(4.0, -0.8)}) {
    const EngagementConfig c{8.0, 2.0};
    const auto depart = hidden_departure(c, 0.0, start, p);
    CAPTURE(start.x);
    REQUIRE(depart.has_value());
    const Vec2 target = polar(p.outer_radius() - p.nu * c.tau_eng, 0.0) + polar(p.rho_a, c.theta_eng);
    const double len = distance(start, target);
    CHECK(*depart + len <= c.tau_eng + 1e-9);
    double closest = 1e9;
    for (int k = 0; k < 20000; ++k) {
      const double t = c.tau_eng * k / 20000.0;
      const double moved = std::clamp(t - *depart, 0.0, len);
      const Vec2 x_d = start + (target - start).normalized() * moved;
      closest = std::min(closest, distance(x_d, polar(p.outer_radius() - p.nu * t, 0.0)));
    }
    CHECK(closest >= p.rho_a - 1e-6);
  }
}
