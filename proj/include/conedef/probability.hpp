#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "conedef/engagement.hpp"
#include "conedef/geometry.hpp"

namespace conedef {

class OutOfEnvironment : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Lemma-3 style probability from a capturability angle and a defender bearing.
double capture_probability_from(double theta_max_r, double theta_d0, double phi);

/// Exact capture probability for a defender at x; solves max_theta_max afresh.
double capture_probability(Vec2 x, const GameParams& p, const EngagementGrid& grid = {});

/// max_theta_max sampled on a uniform radius grid over [0, r_t + rho_t].
/// Radii where nothing is reachable store 0.
class ThetaMaxTable {
 public:
  ThetaMaxTable() = default;
  ThetaMaxTable(const GameParams& p, const EngagementGrid& grid, double step = 0.02);

  /// Linear interpolation; r = 0 maps to pi.
  double at(double r) const;
  double step() const { return step_; }
  const std::vector<double>& values() const { return values_; }

 private:
  double step_ = 0.02;
  std::vector<double> values_;
};

/// Capture probability field backed by a ThetaMaxTable. Immutable after
/// construction, so one instance can be shared by every worker.
class CaptureModel {
 public:
  explicit CaptureModel(const GameParams& p, const EngagementGrid& grid = {},
                        double table_step = 0.02);

  const GameParams& params() const { return params_; }
  const EngagementGrid& grid() const { return grid_; }
  const ThetaMaxTable& table() const { return table_; }

  /// Throws OutOfEnvironment when x is outside the game environment.
  double probability(Vec2 x) const;
  /// Same, without the membership check; the caller guarantees x is inside.
  double probability_unchecked(Vec2 x) const;
  /// Same, from polar coordinates.
  double probability_at(double r, double angle) const;

 private:
  GameParams params_;
  EngagementGrid grid_;
  ThetaMaxTable table_;
};

struct FieldGrid {
  int radii = 100;
  int angles = 100;
};

/// Polar grid of capture probabilities, values[i * angles.size() + j] at
/// (radii[i], angles[j]).
struct CaptureProbabilityField {
  std::vector<double> radii;
  std::vector<double> angles;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * angles.size() + j]; }
};

CaptureProbabilityField capture_distribution(const CaptureModel& model,
                                             const FieldGrid& grid = {});

struct CapturePoint {
  Vec2 point;
  double value = 0.0;
  bool degenerate = false;  // zero-radius circle; the point is the centre
};

inline constexpr int kDefaultCaptureSamples = 720;

/// Point of the circle boundary inside the environment with the lowest
/// capture probability. Ties go to the larger |angle|, then the positive one.
CapturePoint optimal_capture_point(const ApolloniusCircle& ac, const CaptureModel& model,
                                   int samples = kDefaultCaptureSamples);

struct StackelbergSolution {
  EngagementConfig engagement;
  Vec2 capture_point;
  double value = 0.0;
};

struct ChoiceOptions {
  int capture_samples = kDefaultCaptureSamples;
  bool full_set = false;     // search the discretised reachable set instead of tangencies
  double time_offset = 0.0;  // defender starts moving this long after the arrival
};

/// Max-min engagement for a defender at x_d0 against an attacker entering at
/// theta_a0. nullopt when no candidate configuration is reachable.
std::optional<StackelbergSolution> choose_engagement(Vec2 x_d0, double theta_a0,
                                                     const CaptureModel& model,
                                                     const ChoiceOptions& options = {});

}  // namespace conedef
