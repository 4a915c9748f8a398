#include "conedef/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace conedef {

Vec2 mirror_y(Vec2 v) { return {v.x, -v.y}; }

double wrap_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::remainder(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

std::string to_string(Violation v) {
  switch (v) {
    case Violation::Range:
      return "range";
    case Violation::Assumption1:
      return "assumption 1 (rho_t/rho_a >= 1 + 2 nu/(1-nu^2))";
    case Violation::Assumption2:
      return "assumption 2 (nu*r_t <= rho_t)";
    case Violation::Feasibility:
      return "engagement feasibility (2*gamma*rho_a <= rho_t)";
  }
  return "unknown";
}

namespace {

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) {
    std::ostringstream os;
    os << "invalid " << field << ": " << what;
    throw ParameterViolation(Violation::Range, field, os.str());
  }
}

}  // namespace

GameParams make_params(double r_t, double rho_t, double rho_a, double nu, double phi) {
  require(std::isfinite(r_t) && r_t > 0.0, "r_t", "must be > 0");
  require(std::isfinite(rho_t) && rho_t > 0.0, "rho_t", "must be > 0");
  require(std::isfinite(rho_a) && rho_a > 0.0, "rho_a", "must be > 0");
  require(std::isfinite(nu) && nu > 0.0 && nu < 1.0, "nu", "must lie in (0, 1)");
  require(std::isfinite(phi) && phi > 0.0 && phi < std::numbers::pi, "phi",
          "must lie in (0, pi)");

  GameParams p;
  p.r_t = r_t;
  p.rho_t = rho_t;
  p.rho_a = rho_a;
  p.nu = nu;
  p.phi = phi;
  p.alpha = 1.0 / (1.0 - nu * nu);
  p.gamma = nu * p.alpha;
  // nu*gamma, written as alpha - 1 so that alpha - beta is exactly one.
  p.beta = p.alpha - 1.0;

  if (rho_t / rho_a < 1.0 + 2.0 * nu / (1.0 - nu * nu)) {
    throw ParameterViolation(Violation::Assumption1, "assumption1",
                             "parameters violate " + to_string(Violation::Assumption1));
  }
  if (nu * r_t > rho_t) {
    throw ParameterViolation(Violation::Assumption2, "assumption2",
                             "parameters violate " + to_string(Violation::Assumption2));
  }
  if (2.0 * p.gamma * rho_a > rho_t) {
    throw ParameterViolation(Violation::Feasibility, "feasibility",
                             "parameters violate " + to_string(Violation::Feasibility));
  }
  return p;
}

GameParams default_params() { return make_params(6.0, 8.0, 1.0, 0.85, std::numbers::pi / 3.0); }

bool ConeRegion::contains(Vec2 p, double tol) const {
  const double r = p.norm();
  if (r < inner_radius - tol || r > outer_radius + tol) return false;
  if (r <= tol) return inner_radius <= tol;
  return std::abs(p.angle()) <= half_angle + tol / std::max(r, 1.0);
}

ConeRegion target_region(const GameParams& p) { return {0.0, p.r_t, p.phi}; }

ConeRegion environment_region(const GameParams& p) { return {0.0, p.outer_radius(), p.phi}; }

ApolloniusCircle apollonius_circle(Vec2 x_a, Vec2 x_d, const GameParams& p) {
  return {x_a * p.alpha - x_d * p.beta, p.gamma * distance(x_a, x_d)};
}

double point_segment_distance(Vec2 q, Vec2 a, Vec2 b) {
  const Vec2 d = b - a;
  const double len2 = d.squared_norm();
  if (len2 == 0.0) return distance(q, a);
  const double t = std::clamp(dot(q - a, d) / len2, 0.0, 1.0);
  return distance(q, a + d * t);
}

double target_clearance(Vec2 q, const GameParams& p) {
  const double r = q.norm();
  const bool in_span = r == 0.0 || std::abs(q.angle()) <= p.phi;
  if (in_span) return r - p.r_t;
  // Outside the angular span the nearest point lies on one of the edge segments.
  const Vec2 origin{};
  return std::min(point_segment_distance(q, origin, polar(p.r_t, p.phi)),
                  point_segment_distance(q, origin, polar(p.r_t, -p.phi)));
}

double escape_clearance(Vec2 q, const GameParams& p) {
  const double outer = p.outer_radius();
  const double r = q.norm();
  double best = std::numeric_limits<double>::infinity();
  if (r > 0.0 && std::abs(q.angle()) <= p.phi) {
    if (r >= outer) return outer - r;
    best = outer - r;
  }
  // Rays {s*u(+-phi) : s >= outer}.
  for (const double side : {1.0, -1.0}) {
    const Vec2 u = unit(side * p.phi);
    const double s = std::max(dot(q, u), outer);
    best = std::min(best, distance(q, u * s));
  }
  return best;
}

bool circle_meets_target(const ApolloniusCircle& c, const GameParams& p) {
  return target_clearance(c.center, p) < c.radius - kBoundaryTol;
}

bool circle_meets_tsr_exterior(const ApolloniusCircle& c, const GameParams& p) {
  return escape_clearance(c.center, p) < c.radius - kBoundaryTol;
}

}  // namespace conedef
