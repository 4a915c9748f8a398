#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace conedef {

// Absolute tolerance used at predicate boundaries (length units).
inline constexpr double kBoundaryTol = 1e-9;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2() = default;
  constexpr Vec2(double x_, double y_) : x(x_), y(y_) {}

  constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator/(double s) const { return {x / s, y / s}; }
  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  constexpr double squared_norm() const { return x * x + y * y; }
  /// Polar angle in (-pi, pi].
  double angle() const { return std::atan2(y, x); }
  bool is_finite() const { return std::isfinite(x) && std::isfinite(y); }
  /// Unit vector along this one; the zero vector maps to itself.
  Vec2 normalized() const {
    const double n = norm();
    return n > 0.0 ? Vec2{x / n, y / n} : Vec2{};
  }
};

constexpr Vec2 operator*(double s, Vec2 v) { return v * s; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }
inline Vec2 unit(double theta) { return {std::cos(theta), std::sin(theta)}; }
inline Vec2 polar(double r, double theta) { return unit(theta) * r; }
Vec2 mirror_y(Vec2 v);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

/// Which scenario constraint a parameter set violates.
enum class Violation { Range, Assumption1, Assumption2, Feasibility };

std::string to_string(Violation v);

class ParameterViolation : public std::invalid_argument {
 public:
  ParameterViolation(Violation which, std::string field, const std::string& msg)
      : std::invalid_argument(msg), which_(which), field_(std::move(field)) {}
  Violation which() const { return which_; }
  /// Name of the offending raw field ("nu", "phi", ...) or the assumption label.
  const std::string& field() const { return field_; }

 private:
  Violation which_;
  std::string field_;
};

/// Scenario constants plus the derived Apollonius coefficients.
struct GameParams {
  double r_t = 6.0;      // target radius
  double rho_t = 8.0;    // depth of the target sensing region
  double rho_a = 1.0;    // attacker sensing radius
  double nu = 0.85;      // attacker/defender speed ratio
  double phi = std::numbers::pi / 3.0;  // cone half-angle
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  double outer_radius() const { return r_t + rho_t; }
  /// Radius of the Apollonius circle at engagement, gamma * rho_a.
  double engagement_radius() const { return gamma * rho_a; }
  /// Radius of the region that holds every capture under tangent engagements.
  double capture_cone_radius() const { return r_t + 2.0 * gamma * rho_a; }
};

/// Validates the raw constants and fills in alpha, beta, gamma.
/// Throws ParameterViolation naming the field or assumption that failed.
GameParams make_params(double r_t, double rho_t, double rho_a, double nu, double phi);

/// The scenario used throughout the reported experiments.
GameParams default_params();

/// Annular sector centred on the +x axis.
struct ConeRegion {
  double inner_radius = 0.0;
  double outer_radius = 1.0;
  double half_angle = 0.0;

  bool contains(Vec2 p, double tol = kBoundaryTol) const;
};

ConeRegion target_region(const GameParams& p);
ConeRegion environment_region(const GameParams& p);

struct ApolloniusCircle {
  Vec2 center;
  double radius = 0.0;

  Vec2 point_at(double s) const { return center + polar(radius, s); }
};

ApolloniusCircle apollonius_circle(Vec2 x_a, Vec2 x_d, const GameParams& p);

double point_segment_distance(Vec2 q, Vec2 a, Vec2 b);

/// Distance from q to the target sector. Inside the angular span this is
/// |q| - r_t, which goes negative for points inside the target.
double target_clearance(Vec2 q, const GameParams& p);

/// Distance from q to the escape region, i.e. points beyond the outer arc
/// within the angular span. Negative beyond the arc.
double escape_clearance(Vec2 q, const GameParams& p);

/// True when the disk reaches into the target; tangency counts as guarded.
bool circle_meets_target(const ApolloniusCircle& c, const GameParams& p);

/// True when the disk reaches past the outer arc of the environment;
/// internal tangency counts as contained.
bool circle_meets_tsr_exterior(const ApolloniusCircle& c, const GameParams& p);

}  // namespace conedef
