#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "conedef/geometry.hpp"

namespace conedef {

/// When and where the full-information phase starts.
///
/// `tau_eng` is the time since the attacker appeared on the outer arc.
/// `theta_eng` is the direction of the defender as seen from the attacker,
/// measured from the attacker's outward radial direction: the defender sits
/// at x_A(tau) + rho_a * u(theta_a0 + theta_eng). theta_eng = 0 puts the
/// defender directly behind the attacker, +-pi directly in front of it.
struct EngagementConfig {
  double tau_eng = 0.0;
  double theta_eng = 0.0;

  bool operator==(const EngagementConfig&) const = default;
};

struct CriticalTimes {
  double tau1 = 0.0;  // before this every angle guards
  double tau2 = 0.0;  // after this no angle guards
  double tau3 = 0.0;  // before this no angle prevents escape
  double tau4 = 0.0;  // after this every angle prevents escape
};

/// Intermediate values recorded by the threshold solvers.
struct ThresholdSolveTrace {
  double rhs_guard = std::numeric_limits<double>::quiet_NaN();
  double rhs_escape = std::numeric_limits<double>::quiet_NaN();
  double m_corner = std::numeric_limits<double>::quiet_NaN();
  double m_hat_corner = std::numeric_limits<double>::quiet_NaN();
  int solver_iterations = 0;
};

/// Admissible band of |theta_eng| at a fixed engagement time.
struct EngagementInterval {
  double tau = 0.0;
  double theta_lo = 0.0;
  double theta_hi = 0.0;
};

/// Which side of the attacker's path the defender engages from.
/// `Both` asks for a band that is valid on either side.
enum class Side { Positive, Negative, Both };

inline constexpr int kMaxBisectionIterations = 100;
inline constexpr double kBisectionTol = 1e-10;

struct EngagementGrid {
  int tau_points = 200;       // engagement-time samples over the feasible interval
  int theta_points = 33;      // coarse samples per admissible band
  int set_theta_points = 72;  // angular samples for the discretised capture set
  double theta_tol = 1e-6;    // refinement tolerance (radians)
};

class NoCapturableConfiguration : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

Vec2 attacker_position(double tau, double theta_a0, const GameParams& p);
Vec2 engagement_point(const EngagementConfig& c, double theta_a0, const GameParams& p);
ApolloniusCircle engagement_circle(const EngagementConfig& c, double theta_a0,
                                   const GameParams& p);

CriticalTimes critical_times(const GameParams& p);

/// Smallest deviation |theta_eng| from which every larger deviation keeps the
/// Apollonius circle off the target. 0 when every angle guards, nullopt when
/// none does. The arc formula is solved in closed form; when its solution puts
/// the circle centre outside the angular span, the corner form is solved by
/// bisection instead.
std::optional<double> guard_threshold(double tau, double theta_a0, const GameParams& p,
                                      Side side = Side::Both,
                                      ThresholdSolveTrace* trace = nullptr);

/// Largest deviation |theta_eng| below which the circle stays inside the
/// environment. pi when every angle prevents escape, nullopt when none does.
std::optional<double> escape_threshold(double tau, double theta_a0, const GameParams& p,
                                       Side side = Side::Both,
                                       ThresholdSolveTrace* trace = nullptr);

std::optional<EngagementInterval> engagement_interval(double tau, double theta_a0,
                                                      const GameParams& p,
                                                      Side side = Side::Both);

/// True when (tau, theta_eng) lies in the engagement set for an attacker
/// entering at theta_a0.
bool in_engagement_set(const EngagementConfig& c, double theta_a0, const GameParams& p);

/// Largest initial angular separation from which a defender at radius r can
/// reach the configuration in time. nullopt when the configuration is out of
/// reach even with zero separation.
std::optional<double> theta_max(const EngagementConfig& c, double r, const GameParams& p);

struct ThetaMaxResult {
  double value = 0.0;
  EngagementConfig config;
};

/// Maximises theta_max over the engagement set of an attacker on the bisector.
ThetaMaxResult max_theta_max(double r, const GameParams& p, const EngagementGrid& grid = {});

bool capturable(double theta_a0, double theta_d0, double r, const GameParams& p,
                const EngagementGrid& grid = {});

/// Departure time of a straight trip from x_d0 to the engagement point that
/// keeps the defender outside the attacker's sensing radius until tau_eng.
/// The delay-timed trip (arrival exactly at tau_eng) is preferred; otherwise
/// the defender leaves earlier and waits at the point. nullopt when the point
/// is out of reach or every tried trip is seen.
std::optional<double> hidden_departure(const EngagementConfig& c, double theta_a0, Vec2 x_d0,
                                       const GameParams& p, double time_offset = 0.0);

/// Whether hidden_departure finds a trip.
bool travel_stays_hidden(const EngagementConfig& c, double theta_a0, Vec2 x_d0,
                         const GameParams& p, double time_offset = 0.0);

/// Whether a defender at x_d0 can be at the engagement point by tau_eng, unseen,
/// when it only starts moving `time_offset` after the attacker appeared.
bool can_reach(const EngagementConfig& c, double theta_a0, Vec2 x_d0, const GameParams& p,
               double time_offset = 0.0);

/// Discretised reachable engagement set, sorted by tau then theta.
std::vector<EngagementConfig> reachable_engagement_set(Vec2 x_d0, double theta_a0,
                                                       const GameParams& p,
                                                       const EngagementGrid& grid = {},
                                                       double time_offset = 0.0);

/// Reachable configurations whose circle is tangent to the target arc,
/// |x_C| = r_t + gamma*rho_a, sorted by tau then theta.
std::vector<EngagementConfig> simplified_engagement_set(Vec2 x_d0, double theta_a0,
                                                        const GameParams& p,
                                                        const EngagementGrid& grid = {},
                                                        double time_offset = 0.0);

}  // namespace conedef
