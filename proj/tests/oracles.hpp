// Brute-force reference computations used by the tests. Everything here is
// deliberately simple: dense sampling, no closed forms shared with src/.
#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "conedef/geometry.hpp"

namespace oracle {

using conedef::GameParams;
using conedef::Vec2;

inline constexpr double kPi = std::numbers::pi;

inline bool in_sector(Vec2 q, double radius, double phi) {
  const double r = std::hypot(q.x, q.y);
  return r <= radius && (r == 0.0 || std::abs(std::atan2(q.y, q.x)) <= phi);
}

// Distance from q to the closed target sector by sampling its boundary.
inline double distance_to_target(Vec2 q, const GameParams& p, int n = 20000) {
  if (in_sector(q, p.r_t, p.phi)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    const double a = -p.phi + 2.0 * p.phi * k / n;
    best = std::min(best, std::hypot(q.x - p.r_t * std::cos(a), q.y - p.r_t * std::sin(a)));
    const double s = p.r_t * k / n;
    for (const double side : {1.0, -1.0}) {
      best = std::min(best, std::hypot(q.x - s * std::cos(side * p.phi),
                                       q.y - s * std::sin(side * p.phi)));
    }
  }
  return best;
}

// Distance from q to the escape region {r >= r_t + rho_t, |angle| <= phi}.
inline double distance_to_escape(Vec2 q, const GameParams& p, int n = 20000) {
  const double outer = p.r_t + p.rho_t;
  const double r = std::hypot(q.x, q.y);
  if (r >= outer && std::abs(std::atan2(q.y, q.x)) <= p.phi) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n; ++k) {
    const double a = -p.phi + 2.0 * p.phi * k / n;
    best = std::min(best, std::hypot(q.x - outer * std::cos(a), q.y - outer * std::sin(a)));
    const double s = outer + 60.0 * k / n;
    for (const double side : {1.0, -1.0}) {
      best = std::min(best, std::hypot(q.x - s * std::cos(side * p.phi),
                                       q.y - s * std::sin(side * p.phi)));
    }
  }
  return best;
}

// Largest |theta_D| (defender at radius r, attacker entering on the +x axis)
// from which the engagement point is reachable within tau, by angle scan.
inline double theta_max_scan(double tau, double theta_eng, double r, const GameParams& p,
                             int n = 400000) {
  const double a = p.r_t + p.rho_t - p.nu * tau;
  const double ex = a + p.rho_a * std::cos(theta_eng);
  const double ey = p.rho_a * std::sin(theta_eng);
  double best = -1.0;
  for (int k = 0; k <= n; ++k) {
    const double th = kPi * k / n;
    const double d = std::hypot(ex - r * std::cos(th), ey - r * std::sin(th));
    if (d <= tau) best = th;
  }
  return best;
}

// Capture probability of game i (0-based) for the two-state chain, from its
// eigen-decomposition.
inline double chain_capture_probability(int i, double s) {
  return (1.0 + (1.0 - s) * std::pow(s - 1.0, i)) / (2.0 - s);
}

inline double chain_percentage(int n, double s) {
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += chain_capture_probability(i, s);
  return 100.0 * sum / n;
}

}  // namespace oracle
