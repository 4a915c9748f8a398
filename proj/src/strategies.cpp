#include "conedef/strategies.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace conedef {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 rotate(Vec2 v, double a) {
  const double c = std::cos(a);
  const double s = std::sin(a);
  return {c * v.x - s * v.y, s * v.x + c * v.y};
}

Vec2 perp(Vec2 v) { return {-v.y, v.x}; }

double uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

PursuitState start_pursuit(Vec2 x_a, Vec2 x_d, const GameParams& p, double epsilon) {
  PursuitState s;
  s.initial_circle = apollonius_circle(x_a, x_d, p);
  s.current_circle = s.initial_circle;
  s.epsilon = epsilon;
  s.x_ad_hat = (x_a - x_d).normalized();
  return s;
}

PursuitCommand pursuit_heading(PursuitState& state, Vec2 x_a, Vec2 x_d, const GameParams& p) {
  state.current_circle = apollonius_circle(x_a, x_d, p);
  state.y_vec = state.current_circle.center - state.initial_circle.center;
  state.x_ad_hat = (x_a - x_d).normalized();
  const double gap = state.initial_circle.radius + state.epsilon - state.current_circle.radius;
  const Vec2 w = state.x_ad_hat * gap + state.y_vec * p.nu;
  PursuitCommand cmd;
  if (w.norm() < 1e-12) {
    cmd.heading = state.x_ad_hat;
    cmd.fallback = true;
  } else {
    cmd.heading = w.normalized();
  }
  return cmd;
}

DefenderKind parse_defender(const std::string& name) {
  if (name == "optimal") return DefenderKind::Optimal;
  if (name == "pure_pursuit" || name == "pp") return DefenderKind::PurePursuit;
  if (name == "stationary") return DefenderKind::Stationary;
  throw std::invalid_argument("invalid defender: " + name);
}

AttackerKind parse_attacker(const std::string& name) {
  if (name == "optimal") return AttackerKind::Optimal;
  if (name == "pure_evader" || name == "pe") return AttackerKind::PureEvader;
  if (name == "straight") return AttackerKind::Straight;
  if (name == "tangential") return AttackerKind::Tangential;
  if (name == "spiral") return AttackerKind::Spiral;
  if (name == "random_turn") return AttackerKind::RandomTurn;
  throw std::invalid_argument("invalid attacker: " + name);
}

std::string to_string(DefenderKind k) {
  switch (k) {
    case DefenderKind::Optimal:
      return "optimal";
    case DefenderKind::PurePursuit:
      return "pure_pursuit";
    case DefenderKind::Stationary:
      return "stationary";
  }
  return "unknown";
}

std::string to_string(AttackerKind k) {
  switch (k) {
    case AttackerKind::Optimal:
      return "optimal";
    case AttackerKind::PureEvader:
      return "pure_evader";
    case AttackerKind::Straight:
      return "straight";
    case AttackerKind::Tangential:
      return "tangential";
    case AttackerKind::Spiral:
      return "spiral";
    case AttackerKind::RandomTurn:
      return "random_turn";
  }
  return "unknown";
}

bool needs_centre_route(Vec2 x_d0, double theta_a0, const GameParams& p) {
  if (p.phi <= kPi / 2.0 || x_d0.norm() <= kBoundaryTol) return false;
  return std::abs(x_d0.angle() - theta_a0) > kPi;
}

DefenderPlan plan_defender(Vec2 x_d0, double theta_a0, const CaptureModel& model,
                           const ChoiceOptions& choice, bool via_centre) {
  DefenderPlan plan;
  ChoiceOptions opts = choice;
  Vec2 start = x_d0;
  if (via_centre) {
    opts.time_offset += x_d0.norm();
    start = Vec2{};
  }
  plan.solution = choose_engagement(start, theta_a0, model, opts);
  if (!plan.solution) {
    plan.phase = Restarting{};
    plan.conceded = true;
    return plan;
  }
  const GameParams& p = model.params();
  Traveling t;
  t.via_centre = via_centre && x_d0.norm() > kBoundaryTol;
  t.config = plan.solution->engagement;
  t.target = engagement_point(t.config, theta_a0, p);
  t.planned_capture = plan.solution->capture_point;
  t.arrive_time = t.config.tau_eng;
  t.depart_time = hidden_departure(t.config, theta_a0, start, model.params(), opts.time_offset)
                      .value_or(std::max(t.arrive_time - distance(start, t.target),
                                         opts.time_offset));
  plan.phase = t;
  return plan;
}

std::optional<Vec2> breach_point(const ApolloniusCircle& ac, Vec2 x_a, const GameParams& p) {
  const ConeRegion target = target_region(p);
  const double r2 = ac.radius * ac.radius;
  std::optional<Vec2> best;
  double best_d = std::numeric_limits<double>::infinity();
  auto consider = [&](Vec2 x) {
    if ((x - ac.center).squared_norm() > r2 + kBoundaryTol) return;
    const double d = distance(x, x_a);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  };
  constexpr int kArc = 720;
  constexpr int kEdge = 240;
  for (int k = 0; k <= kArc; ++k) consider(polar(p.r_t, -p.phi + 2.0 * p.phi * k / kArc));
  for (const double side : {1.0, -1.0}) {
    for (int k = 0; k <= kEdge; ++k) consider(polar(p.r_t * k / kEdge, side * p.phi));
  }
  for (int k = 0; k < kArc; ++k) {
    const Vec2 x = ac.point_at(-kPi + 2.0 * kPi * k / kArc);
    if (target.contains(x)) consider(x);
  }
  return best;
}

std::optional<Vec2> evasion_point(const ApolloniusCircle& ac, Vec2 x_a, const GameParams& p) {
  const double r2 = ac.radius * ac.radius;
  std::optional<Vec2> best;
  double best_d = std::numeric_limits<double>::infinity();
  constexpr int kArc = 1440;
  for (int k = 0; k <= kArc; ++k) {
    const Vec2 x = polar(p.outer_radius(), -p.phi + 2.0 * p.phi * k / kArc);
    if ((x - ac.center).squared_norm() > r2 + kBoundaryTol) continue;
    const double d = distance(x, x_a);
    if (d < best_d) {
      best_d = d;
      best = x;
    }
  }
  return best;
}

void attacker_detect(AttackerMemory& mem, AttackerKind kind, Vec2 x_a, Vec2 x_d,
                     const CaptureModel& model, int capture_samples) {
  const GameParams& p = model.params();
  mem.detected = true;
  mem.circle = apollonius_circle(x_a, x_d, p);
  const Vec2 away = (x_a - x_d).normalized();
  auto commit = [&](AttackerIntent intent, Vec2 aim) {
    mem.intent = intent;
    mem.aim = aim;
    const Vec2 dir = (aim - x_a).normalized();
    mem.heading = dir.squared_norm() > 0.0 ? dir : away;
  };
  switch (kind) {
    case AttackerKind::Optimal: {
      if (circle_meets_target(mem.circle, p)) {
        const auto b = breach_point(mem.circle, x_a, p);
        commit(AttackerIntent::Breach, b.value_or(polar(p.r_t, x_a.angle())));
        return;
      }
      if (circle_meets_tsr_exterior(mem.circle, p)) {
        if (const auto e = evasion_point(mem.circle, x_a, p)) {
          commit(AttackerIntent::Evade, *e);
          return;
        }
      }
      commit(AttackerIntent::Capture,
             optimal_capture_point(mem.circle, model, capture_samples).point);
      return;
    }
    case AttackerKind::PureEvader:
      mem.intent = AttackerIntent::Flee;
      mem.heading = away;
      return;
    case AttackerKind::Straight:
      mem.intent = AttackerIntent::Behaviour;
      mem.heading = rotate(away, (uniform(mem.rng) - 0.5) * kPi);
      return;
    case AttackerKind::Tangential:
    case AttackerKind::Spiral:
      mem.intent = AttackerIntent::Behaviour;
      mem.turn_sign = uniform(mem.rng) < 0.5 ? -1.0 : 1.0;
      mem.heading = away;
      return;
    case AttackerKind::RandomTurn:
      mem.intent = AttackerIntent::Behaviour;
      mem.heading = rotate(away, (uniform(mem.rng) - 0.5) * 2.0 * kPi);
      return;
  }
}

Vec2 attacker_velocity(AttackerMemory& mem, AttackerKind kind, Vec2 x_a, Vec2 x_d,
                       const GameParams& p, double dt) {
  if (!mem.detected) return -x_a.normalized() * p.nu;
  const Vec2 away = (x_a - x_d).normalized();
  switch (mem.intent) {
    case AttackerIntent::Radial:
      return -x_a.normalized() * p.nu;
    case AttackerIntent::Flee:
      return away * p.nu;
    case AttackerIntent::Breach:
    case AttackerIntent::Evade:
    case AttackerIntent::Capture:
      return mem.heading * p.nu;
    case AttackerIntent::Behaviour:
      break;
  }
  switch (kind) {
    case AttackerKind::Tangential:
      mem.heading = perp(away) * mem.turn_sign;
      break;
    case AttackerKind::Spiral:
      mem.heading = rotate(away, mem.turn_sign * kPi / 3.0);
      break;
    case AttackerKind::RandomTurn: {
      // Heading diffuses with unit angular variance per time unit.
      const double u1 = std::max(uniform(mem.rng), 1e-300);
      const double u2 = uniform(mem.rng);
      const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
      mem.heading = rotate(mem.heading, g * std::sqrt(dt));
      break;
    }
    default:
      break;
  }
  return mem.heading * p.nu;
}

}  // namespace conedef
