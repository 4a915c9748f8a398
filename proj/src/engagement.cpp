#include "conedef/engagement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "optimize.hpp"

namespace conedef {

namespace {

constexpr double kPi = std::numbers::pi;

// Engagement geometry for one side of the attacker's path.
struct SideGeometry {
  const GameParams& p;
  double theta_a0;
  double sign;
  Vec2 x_a;
  double a;  // attacker range |x_A(tau)|
  double b;  // beta * rho_a

  SideGeometry(const GameParams& params, double tau, double theta, double s)
      : p(params),
        theta_a0(theta),
        sign(s),
        x_a(attacker_position(tau, theta, params)),
        a(params.outer_radius() - params.nu * tau),
        b(params.beta * params.rho_a) {}

  Vec2 center(double deviation) const { return x_a - unit(theta_a0 + sign * deviation) * b; }

  // Sign of the corner the circle centre falls past (+1 for +phi).
  double corner_side(double deviation) const {
    return center(deviation).angle() >= 0.0 ? 1.0 : -1.0;
  }

  bool centre_in_span(double deviation) const {
    const Vec2 c = center(deviation);
    return c.norm() == 0.0 || std::abs(c.angle()) <= p.phi + kBoundaryTol;
  }
};

double interior_guard_rhs(const SideGeometry& g) {
  const double num = std::pow(g.p.r_t + g.p.engagement_radius(), 2) - std::pow(g.a - g.b, 2);
  return num / (4.0 * g.a * g.b);
}

double interior_escape_rhs(const SideGeometry& g) {
  const double num =
      std::pow(g.p.outer_radius() - g.p.engagement_radius(), 2) - std::pow(g.a - g.b, 2);
  return num / (4.0 * g.a * g.b);
}

double deviation_from_rhs(double rhs) { return 2.0 * std::asin(std::sqrt(std::clamp(rhs, 0.0, 1.0))); }

std::optional<double> guard_one_side(const SideGeometry& g, ThresholdSolveTrace* trace) {
  const double rhs = interior_guard_rhs(g);
  if (trace) trace->rhs_guard = rhs;

  std::optional<double> candidate;
  if (rhs <= 0.0) {
    candidate = 0.0;
  } else if (rhs <= 1.0) {
    candidate = deviation_from_rhs(rhs);
  }
  const double probe = candidate.value_or(kPi);
  if (g.centre_in_span(probe)) return candidate;

  // Corner form: the centre sits past a side edge, so the circle must stay
  // gamma*rho_a away from that edge and its corner r_t*u(+-phi).
  const double s = g.corner_side(probe);
  const double rc = g.p.engagement_radius();
  auto guarded = [&](double dev) { return !circle_meets_target({g.center(dev), rc}, g.p); };
  auto record = [&](double dev) {
    if (trace) {
      trace->m_corner = rc * rc - g.p.r_t * g.p.r_t +
                        2.0 * g.a * g.p.r_t * std::cos(g.theta_a0 - s * g.p.phi) -
                        2.0 * g.b * g.p.r_t * std::cos(g.theta_a0 + g.sign * dev - s * g.p.phi);
    }
  };
  if (!guarded(kPi)) {
    record(kPi);
    return std::nullopt;
  }
  if (guarded(0.0)) {
    record(0.0);
    return 0.0;
  }
  int iters = 0;
  const double dev =
      detail::bisect(guarded, 0.0, kPi, kBisectionTol, kMaxBisectionIterations, &iters);
  if (trace) trace->solver_iterations += iters;
  record(dev);
  return dev;
}

std::optional<double> escape_one_side(const SideGeometry& g, ThresholdSolveTrace* trace) {
  const double rhs = interior_escape_rhs(g);
  if (trace) trace->rhs_escape = rhs;

  std::optional<double> candidate;
  if (rhs >= 1.0) {
    candidate = kPi;
  } else if (rhs >= 0.0) {
    candidate = deviation_from_rhs(rhs);
  }
  const double probe = candidate.value_or(0.0);
  if (g.centre_in_span(probe)) return candidate;

  // Corner form: the circle must not reach the outer corner (r_t+rho_t)*u(+-phi)
  // or the edge beyond it.
  const double s = g.corner_side(probe);
  const double outer = g.p.outer_radius();
  const double rc = g.p.engagement_radius();
  auto escapes = [&](double dev) { return circle_meets_tsr_exterior({g.center(dev), rc}, g.p); };
  auto record = [&](double dev) {
    if (trace) {
      trace->m_hat_corner = rc * rc - outer * outer +
                            2.0 * g.a * outer * std::cos(g.theta_a0 - s * g.p.phi) -
                            2.0 * g.b * outer * std::cos(g.theta_a0 + g.sign * dev - s * g.p.phi);
    }
  };
  if (escapes(0.0)) {
    record(0.0);
    return std::nullopt;
  }
  if (!escapes(kPi)) {
    record(kPi);
    return kPi;
  }
  int iters = 0;
  const double dev =
      detail::bisect(escapes, 0.0, kPi, kBisectionTol, kMaxBisectionIterations, &iters);
  if (trace) trace->solver_iterations += iters;
  record(dev);
  return dev;
}

template <class SolveOne, class Combine>
std::optional<double> solve_sides(double tau, double theta_a0, const GameParams& p, Side side,
                                  ThresholdSolveTrace* trace, SolveOne solve, Combine combine) {
  if (side != Side::Both) {
    const double s = side == Side::Positive ? 1.0 : -1.0;
    return solve(SideGeometry(p, tau, theta_a0, s), trace);
  }
  const auto pos = solve(SideGeometry(p, tau, theta_a0, 1.0), trace);
  const auto neg = solve(SideGeometry(p, tau, theta_a0, -1.0), trace);
  if (!pos || !neg) return std::nullopt;
  return combine(*pos, *neg);
}

double max_of(double x, double y) { return std::max(x, y); }
double min_of(double x, double y) { return std::min(x, y); }

}  // namespace

Vec2 attacker_position(double tau, double theta_a0, const GameParams& p) {
  return polar(p.outer_radius() - p.nu * tau, theta_a0);
}

Vec2 engagement_point(const EngagementConfig& c, double theta_a0, const GameParams& p) {
  return attacker_position(c.tau_eng, theta_a0, p) + polar(p.rho_a, theta_a0 + c.theta_eng);
}

ApolloniusCircle engagement_circle(const EngagementConfig& c, double theta_a0,
                                   const GameParams& p) {
  const Vec2 x_a = attacker_position(c.tau_eng, theta_a0, p);
  return {x_a - polar(p.beta * p.rho_a, theta_a0 + c.theta_eng), p.engagement_radius()};
}

CriticalTimes critical_times(const GameParams& p) {
  return {p.rho_t / p.nu - p.rho_a / (1.0 - p.nu), p.rho_t / p.nu - p.rho_a / (1.0 + p.nu),
          p.rho_a / (1.0 + p.nu), p.rho_a / (1.0 - p.nu)};
}

std::optional<double> guard_threshold(double tau, double theta_a0, const GameParams& p, Side side,
                                      ThresholdSolveTrace* trace) {
  return solve_sides(tau, theta_a0, p, side, trace, guard_one_side, max_of);
}

std::optional<double> escape_threshold(double tau, double theta_a0, const GameParams& p,
                                       Side side, ThresholdSolveTrace* trace) {
  return solve_sides(tau, theta_a0, p, side, trace, escape_one_side, min_of);
}

std::optional<EngagementInterval> engagement_interval(double tau, double theta_a0,
                                                      const GameParams& p, Side side) {
  const auto lo = guard_threshold(tau, theta_a0, p, side);
  if (!lo) return std::nullopt;
  const auto hi = escape_threshold(tau, theta_a0, p, side);
  if (!hi || *lo > *hi) return std::nullopt;
  return EngagementInterval{tau, *lo, *hi};
}

bool in_engagement_set(const EngagementConfig& c, double theta_a0, const GameParams& p) {
  const Side side = c.theta_eng >= 0.0 ? Side::Positive : Side::Negative;
  const auto band = engagement_interval(c.tau_eng, theta_a0, p, side);
  if (!band) return false;
  const double dev = std::abs(c.theta_eng);
  return dev >= band->theta_lo - 1e-12 && dev <= band->theta_hi + 1e-12;
}

std::optional<double> theta_max(const EngagementConfig& c, double r, const GameParams& p) {
  const double a = p.outer_radius() - c.tau_eng * p.nu;
  const double rho = p.rho_a;
  const double r_eng =
      std::sqrt(std::max(a * a + rho * rho + 2.0 * a * rho * std::cos(c.theta_eng), 0.0));
  const double tau = c.tau_eng;
  if (r <= 1e-12 || r_eng <= 1e-12) {
    // Collocated with the apex: only the travel distance matters.
    if (std::abs(r_eng - r) <= tau + 1e-12) return kPi;
    return std::nullopt;
  }
  const double phi_eng = std::asin(std::clamp(rho * std::sin(c.theta_eng) / r_eng, -1.0, 1.0));
  const double arg = (r_eng * r_eng + r * r - tau * tau) / (2.0 * r_eng * r);
  if (arg > 1.0 + 1e-12) return std::nullopt;
  if (arg <= -1.0 + 1e-12) return kPi;
  return std::min(std::acos(std::min(arg, 1.0)) + phi_eng, kPi);
}

ThetaMaxResult max_theta_max(double r, const GameParams& p, const EngagementGrid& grid) {
  const CriticalTimes ct = critical_times(p);
  const double tau_lo = ct.tau3;
  const double tau_hi = ct.tau2;
  const int n_tau = std::max(grid.tau_points, 2);
  const int n_theta = std::max(grid.theta_points, 2);
  constexpr double kNone = -std::numeric_limits<double>::infinity();

  auto value = [&](double tau, double theta) {
    return theta_max({tau, theta}, r, p).value_or(kNone);
  };
  // Best theta_max over the admissible band at one engagement time.
  auto best_in_band = [&](double tau) -> std::pair<double, double> {
    const auto band = engagement_interval(tau, 0.0, p, Side::Positive);
    if (!band) return {0.0, kNone};
    const double lo = band->theta_lo;
    const double hi = band->theta_hi;
    double arg = lo;
    double best = kNone;
    int best_k = 0;
    for (int k = 0; k < n_theta; ++k) {
      const double th = lo + (hi - lo) * k / (n_theta - 1);
      const double v = value(tau, th);
      if (v > best) {
        best = v;
        arg = th;
        best_k = k;
      }
    }
    if (best == kNone || best >= kPi) return {arg, best};
    const double step = (hi - lo) / (n_theta - 1);
    const double a = std::max(lo, lo + (best_k - 1) * step);
    const double b = std::min(hi, lo + (best_k + 1) * step);
    auto [th, v] = detail::golden_max([&](double t) { return value(tau, t); }, a, b,
                                      grid.theta_tol);
    if (v > best) return {th, v};
    return {arg, best};
  };

  double best = kNone;
  EngagementConfig best_cfg{};
  int best_i = -1;
  for (int i = 0; i < n_tau; ++i) {
    const double tau = tau_lo + (tau_hi - tau_lo) * i / (n_tau - 1);
    const auto [th, v] = best_in_band(tau);
    if (v > best) {
      best = v;
      best_cfg = {tau, th};
      best_i = i;
    }
  }
  if (best_i < 0 || best == kNone) {
    throw NoCapturableConfiguration("no engagement configuration is reachable");
  }
  if (best < kPi) {
    const double step = (tau_hi - tau_lo) / (n_tau - 1);
    const double a = std::max(tau_lo, tau_lo + (best_i - 1) * step);
    const double b = std::min(tau_hi, tau_lo + (best_i + 1) * step);
    auto [tau, v] = detail::golden_max([&](double t) { return best_in_band(t).second; }, a, b,
                                       grid.theta_tol);
    if (v > best) {
      best = v;
      best_cfg = {tau, best_in_band(tau).first};
    }
  }
  return {best, best_cfg};
}

bool capturable(double theta_a0, double theta_d0, double r, const GameParams& p,
                const EngagementGrid& grid) {
  if (r <= 1e-12) return true;
  return std::abs(wrap_angle(theta_a0 - theta_d0)) <= max_theta_max(r, p, grid).value + 1e-12;
}

namespace {

// Smallest |a + b*s| for s in [0, len].
double min_norm_on(Vec2 a, Vec2 b, double len) {
  const double bb = b.squared_norm();
  double s = bb > 0.0 ? -dot(a, b) / bb : 0.0;
  s = std::clamp(s, 0.0, len);
  return (a + b * s).norm();
}

}  // namespace

namespace {

// Whether the straight trip that leaves x_d0 at `depart`, moves at unit speed
// and then waits at the engagement point stays outside the sensing radius
// until tau_eng. Relative motion is linear on each piece.
bool trip_hidden(Vec2 target, double tau, double depart, double theta_a0, Vec2 x_d0,
                 const GameParams& p, double time_offset) {
  const Vec2 inward = unit(theta_a0) * (-p.nu);
  const Vec2 a0 = polar(p.outer_radius(), theta_a0);
  const double len = distance(target, x_d0);
  const double arrive = std::min(depart + len, tau);
  const Vec2 u = (target - x_d0).normalized();
  const double limit = p.rho_a - 1e-9;
  if (depart > time_offset &&
      min_norm_on(a0 + inward * time_offset - x_d0, inward, depart - time_offset) < limit) {
    return false;
  }
  if (min_norm_on(a0 + inward * depart - x_d0, inward - u, arrive - depart) < limit) return false;
  return tau <= arrive || min_norm_on(a0 + inward * arrive - target, inward, tau - arrive) >= limit;
}

}  // namespace

std::optional<double> hidden_departure(const EngagementConfig& c, double theta_a0, Vec2 x_d0,
                                       const GameParams& p, double time_offset) {
  const Vec2 target = engagement_point(c, theta_a0, p);
  const double tau = c.tau_eng;
  const double latest = tau - distance(target, x_d0);
  if (latest < time_offset - 1e-12) return std::nullopt;
  const double delayed = std::max(latest, time_offset);
  if (trip_hidden(target, tau, delayed, theta_a0, x_d0, p, time_offset)) return delayed;
  // Leaving earlier and waiting at the point; try a few departure times.
  constexpr int kTries = 8;
  for (int k = kTries - 1; k >= 0; --k) {
    const double depart = time_offset + (delayed - time_offset) * k / kTries;
    if (trip_hidden(target, tau, depart, theta_a0, x_d0, p, time_offset)) return depart;
  }
  return std::nullopt;
}

bool travel_stays_hidden(const EngagementConfig& c, double theta_a0, Vec2 x_d0,
                         const GameParams& p, double time_offset) {
  return hidden_departure(c, theta_a0, x_d0, p, time_offset).has_value();
}

bool can_reach(const EngagementConfig& c, double theta_a0, Vec2 x_d0, const GameParams& p,
               double time_offset) {
  return hidden_departure(c, theta_a0, x_d0, p, time_offset).has_value();
}

std::vector<EngagementConfig> reachable_engagement_set(Vec2 x_d0, double theta_a0,
                                                       const GameParams& p,
                                                       const EngagementGrid& grid,
                                                       double time_offset) {
  const CriticalTimes ct = critical_times(p);
  const int n_tau = std::max(grid.tau_points, 2);
  const int n_theta = std::max(grid.set_theta_points, 2);
  const ConeRegion env = environment_region(p);
  std::vector<EngagementConfig> out;
  for (int i = 0; i < n_tau; ++i) {
    const double tau = ct.tau3 + (ct.tau2 - ct.tau3) * i / (n_tau - 1);
    if (tau < time_offset) continue;
    const auto pos = engagement_interval(tau, theta_a0, p, Side::Positive);
    const auto neg = engagement_interval(tau, theta_a0, p, Side::Negative);
    if (!pos && !neg) continue;
    for (int k = 0; k < n_theta; ++k) {
      const double th = -kPi + 2.0 * kPi * k / (n_theta - 1);
      const auto& band = th >= 0.0 ? pos : neg;
      if (!band) continue;
      const double dev = std::abs(th);
      if (dev < band->theta_lo || dev > band->theta_hi) continue;
      const EngagementConfig cfg{tau, th};
      if (!env.contains(engagement_point(cfg, theta_a0, p))) continue;
      if (!can_reach(cfg, theta_a0, x_d0, p, time_offset)) continue;
      out.push_back(cfg);
    }
  }
  return out;
}

namespace {

// Tangent configuration on one side, or nullopt when the arc tangency does not
// exist or the resulting circle is not capture-certain.
std::optional<EngagementConfig> tangent_config(double tau, double theta_a0, double sign,
                                               const GameParams& p) {
  const SideGeometry g(p, tau, theta_a0, sign);
  const double rhs = interior_guard_rhs(g);
  if (!(rhs > 0.0 && rhs <= 1.0)) return std::nullopt;
  const EngagementConfig cfg{tau, sign * deviation_from_rhs(rhs)};
  const ApolloniusCircle ac = engagement_circle(cfg, theta_a0, p);
  if (circle_meets_target(ac, p) || circle_meets_tsr_exterior(ac, p)) return std::nullopt;
  if (!in_engagement_set(cfg, theta_a0, p)) return std::nullopt;
  if (!environment_region(p).contains(engagement_point(cfg, theta_a0, p))) return std::nullopt;
  return cfg;
}

}  // namespace

std::vector<EngagementConfig> simplified_engagement_set(Vec2 x_d0, double theta_a0,
                                                        const GameParams& p,
                                                        const EngagementGrid& grid,
                                                        double time_offset) {
  const CriticalTimes ct = critical_times(p);
  const double tau_lo = std::max({ct.tau1, ct.tau3, time_offset});
  const double tau_hi = ct.tau2;
  std::vector<EngagementConfig> out;
  if (tau_hi <= tau_lo) return out;
  const int n_tau = std::max(grid.tau_points, 2);
  const double step = (tau_hi - tau_lo) / (n_tau - 1);

  for (const double sign : {-1.0, 1.0}) {
    // Reach slack of the tangent configuration; negative when out of reach.
    auto slack = [&](double tau) {
      const auto cfg = tangent_config(tau, theta_a0, sign, p);
      if (!cfg) return -std::numeric_limits<double>::infinity();
      return tau - time_offset - distance(engagement_point(*cfg, theta_a0, p), x_d0);
    };
    double best_slack = -std::numeric_limits<double>::infinity();
    int best_i = -1;
    for (int i = 0; i < n_tau; ++i) {
      const double tau = tau_lo + step * i;
      const double s = slack(tau);
      if (s >= -1e-12) {
        const EngagementConfig cfg = *tangent_config(tau, theta_a0, sign, p);
        if (travel_stays_hidden(cfg, theta_a0, x_d0, p, time_offset)) out.push_back(cfg);
      }
      if (s > best_slack) {
        best_slack = s;
        best_i = i;
      }
    }
    // The grid can miss a thin reachable window; add the slack-maximising
    // configuration so the set is empty only when nothing tangent is reachable.
    if (best_i >= 0 && std::isfinite(best_slack)) {
      const double a = std::max(tau_lo, tau_lo + (best_i - 1) * step);
      const double b = std::min(tau_hi, tau_lo + (best_i + 1) * step);
      const auto [tau, s] = detail::golden_max(slack, a, b, 1e-9);
      if (s >= -1e-12 && s > best_slack) {
        const EngagementConfig cfg = *tangent_config(tau, theta_a0, sign, p);
        if (travel_stays_hidden(cfg, theta_a0, x_d0, p, time_offset)) out.push_back(cfg);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const EngagementConfig& x, const EngagementConfig& y) {
    if (x.tau_eng != y.tau_eng) return x.tau_eng < y.tau_eng;
    return x.theta_eng < y.theta_eng;
  });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace conedef
