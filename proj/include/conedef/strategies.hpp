#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <variant>

#include "conedef/probability.hpp"

namespace conedef {

/// Planar position with the commanded speed and heading of one agent.
struct AgentState {
  Vec2 position;
  double speed_cmd = 0.0;
  double heading_cmd = 0.0;
};

/// Bookkeeping for the robust pursuit law. The circle is frozen when the
/// full-information phase starts.
struct PursuitState {
  ApolloniusCircle initial_circle;
  double epsilon = 0.01;
  ApolloniusCircle current_circle;
  Vec2 y_vec;     // drift of the circle centre since the start
  Vec2 x_ad_hat;  // unit vector from defender to attacker
};

PursuitState start_pursuit(Vec2 x_a, Vec2 x_d, const GameParams& p, double epsilon);

struct PursuitCommand {
  double speed = 1.0;
  Vec2 heading;
  bool fallback = false;  // the law degenerated and pure pursuit was used
};

/// Refreshes `state` from the current positions and returns the unit-speed
/// heading that keeps capture within epsilon of the initial circle.
PursuitCommand pursuit_heading(PursuitState& state, Vec2 x_a, Vec2 x_d, const GameParams& p);

enum class DefenderKind { Optimal, PurePursuit, Stationary };

/// Attacker behaviours. Optimal and PureEvader are the game strategies; the
/// remaining ones only differ after detection and exist to stress the
/// pursuit law.
enum class AttackerKind { Optimal, PureEvader, Straight, Tangential, Spiral, RandomTurn };

DefenderKind parse_defender(const std::string& name);
AttackerKind parse_attacker(const std::string& name);
std::string to_string(DefenderKind k);
std::string to_string(AttackerKind k);

struct Idle {};

/// Straight-line travel to an engagement point, optionally through the
/// centre first. Departure on the final leg is delayed so that arrival
/// happens exactly at the planned engagement time.
struct Traveling {
  bool via_centre = false;  // the centre leg is still pending
  Vec2 target;
  EngagementConfig config;
  Vec2 planned_capture;
  double depart_time = 0.0;
  double arrive_time = 0.0;
};

struct Pursuing {
  PursuitState pursuit;
};

struct Restarting {};

using DefenderPhase = std::variant<Idle, Traveling, Pursuing, Restarting>;

struct DefenderPlan {
  DefenderPhase phase;
  std::optional<StackelbergSolution> solution;
  bool conceded = false;
};

/// Opening move of the game-theoretic defender for an attacker entering at
/// theta_a0. `via_centre` routes the defender through the target centre
/// first, as after a physical restart or across a non-convex cone.
DefenderPlan plan_defender(Vec2 x_d0, double theta_a0, const CaptureModel& model,
                           const ChoiceOptions& choice, bool via_centre);

/// True when the defender must pass through the centre before engaging.
bool needs_centre_route(Vec2 x_d0, double theta_a0, const GameParams& p);

/// What the attacker committed to when it first sensed the defender.
enum class AttackerIntent { Radial, Breach, Evade, Capture, Flee, Behaviour };

struct AttackerMemory {
  bool detected = false;
  AttackerIntent intent = AttackerIntent::Radial;
  Vec2 aim;      // aim point for Breach / Evade / Capture
  Vec2 heading;  // committed unit heading
  ApolloniusCircle circle;
  double turn_sign = 1.0;
  std::mt19937_64 rng;
};

/// Nearest point of the circle's disk inside the target, or nullopt.
std::optional<Vec2> breach_point(const ApolloniusCircle& ac, Vec2 x_a, const GameParams& p);

/// Nearest point of the disk on the outer arc of the environment, or nullopt.
std::optional<Vec2> evasion_point(const ApolloniusCircle& ac, Vec2 x_a, const GameParams& p);

/// Called once, at first detection; fixes the attacker's intent.
void attacker_detect(AttackerMemory& mem, AttackerKind kind, Vec2 x_a, Vec2 x_d,
                     const CaptureModel& model, int capture_samples);

/// Velocity command of the attacker for the current step.
Vec2 attacker_velocity(AttackerMemory& mem, AttackerKind kind, Vec2 x_a, Vec2 x_d,
                       const GameParams& p, double dt);

}  // namespace conedef
