#include "conedef/probability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "optimize.hpp"

namespace conedef {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTie = 1e-12;
constexpr double kCentreRadius = 1e-9;

double theta_max_or_zero(double r, const GameParams& p, const EngagementGrid& grid) {
  if (r <= kCentreRadius) return kPi;
  try {
    return max_theta_max(r, p, grid).value;
  } catch (const NoCapturableConfiguration&) {
    return 0.0;
  }
}

// True when (v, s) should replace the incumbent (best_v, best_s) under the
// capture-point ordering: lower value, then larger |angle|, then positive angle.
bool better_capture(double v, double angle, double best_v, double best_angle) {
  if (v < best_v - kTie) return true;
  if (v > best_v + kTie) return false;
  const double a = std::abs(angle);
  const double b = std::abs(best_angle);
  if (a > b + kTie) return true;
  if (a < b - kTie) return false;
  return angle > best_angle;
}

}  // namespace

double capture_probability_from(double theta_max_r, double theta_d0, double phi) {
  const double d = std::abs(theta_d0);
  const double v = d <= phi - theta_max_r ? theta_max_r / phi
                                          : (theta_max_r + phi - d) / (2.0 * phi);
  return std::clamp(v, 0.0, 1.0);
}

double capture_probability(Vec2 x, const GameParams& p, const EngagementGrid& grid) {
  if (!environment_region(p).contains(x)) {
    throw OutOfEnvironment("point lies outside the game environment");
  }
  const double r = x.norm();
  if (r <= kCentreRadius) return 1.0;
  return capture_probability_from(theta_max_or_zero(r, p, grid), x.angle(), p.phi);
}

ThetaMaxTable::ThetaMaxTable(const GameParams& p, const EngagementGrid& grid, double step)
    : step_(step) {
  const double outer = p.outer_radius();
  const auto n = static_cast<std::size_t>(std::ceil(outer / step)) + 1;
  values_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    values_[i] = theta_max_or_zero(std::min(outer, static_cast<double>(i) * step), p, grid);
  }
}

double ThetaMaxTable::at(double r) const {
  if (r <= kCentreRadius) return kPi;
  const double s = r / step_;
  const auto i = static_cast<std::size_t>(s);
  if (i + 1 >= values_.size()) return values_.back();
  const double w = s - static_cast<double>(i);
  // The first cell interpolates from the r -> 0 limit rather than the centre's pi.
  const double v0 = i == 0 ? values_[1] : values_[i];
  return v0 + (values_[i + 1] - v0) * w;
}

CaptureModel::CaptureModel(const GameParams& p, const EngagementGrid& grid, double table_step)
    : params_(p), grid_(grid), table_(p, grid, table_step) {}

double CaptureModel::probability(Vec2 x) const {
  if (!environment_region(params_).contains(x)) {
    throw OutOfEnvironment("point lies outside the game environment");
  }
  return probability_unchecked(x);
}

double CaptureModel::probability_unchecked(Vec2 x) const {
  return probability_at(x.norm(), x.angle());
}

double CaptureModel::probability_at(double r, double angle) const {
  if (r <= kCentreRadius) return 1.0;
  return capture_probability_from(table_.at(r), angle, params_.phi);
}

CaptureProbabilityField capture_distribution(const CaptureModel& model, const FieldGrid& grid) {
  const GameParams& p = model.params();
  CaptureProbabilityField f;
  const int nr = std::max(grid.radii, 2);
  const int na = std::max(grid.angles, 2);
  for (int i = 0; i < nr; ++i) f.radii.push_back(p.outer_radius() * i / (nr - 1));
  for (int j = 0; j < na; ++j) f.angles.push_back(-p.phi + 2.0 * p.phi * j / (na - 1));
  f.values.reserve(f.radii.size() * f.angles.size());
  for (const double r : f.radii) {
    for (const double a : f.angles) f.values.push_back(model.probability_unchecked(polar(r, a)));
  }
  return f;
}

namespace {

struct BoundaryScan {
  double value = std::numeric_limits<double>::infinity();
  double s = 0.0;  // circle parameter of the best sample
  Vec2 point;
  bool found = false;
};

// Unit circle samples, cached per thread for the handful of sizes in use.
const std::vector<Vec2>& circle_samples(int samples) {
  thread_local std::vector<std::pair<int, std::vector<Vec2>>> cache;
  for (const auto& [n, pts] : cache) {
    if (n == samples) return pts;
  }
  std::vector<Vec2> pts(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) pts[k] = unit(-kPi + 2.0 * kPi * k / samples);
  cache.emplace_back(samples, std::move(pts));
  return cache.back().second;
}

BoundaryScan scan_boundary(const ApolloniusCircle& ac, const CaptureModel& model, int samples) {
  const GameParams& p = model.params();
  const double outer = p.outer_radius() + kBoundaryTol;
  const std::vector<Vec2>& dirs = circle_samples(samples);
  BoundaryScan best;
  double best_angle = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Vec2 x = ac.center + dirs[k] * ac.radius;
    const double r = x.norm();
    if (r > outer) continue;
    const double angle = x.angle();
    if (r > kBoundaryTol && std::abs(angle) > p.phi + kBoundaryTol / std::max(r, 1.0)) continue;
    const double v = model.probability_at(r, angle);
    if (!best.found || better_capture(v, angle, best.value, best_angle)) {
      best = {v, -kPi + 2.0 * kPi * k / samples, x, true};
      best_angle = angle;
    }
  }
  // Where the circle crosses a side edge the feasible arc ends, and the
  // minimum often sits exactly there.
  for (const double sign : {1.0, -1.0}) {
    const Vec2 u = unit(sign * p.phi);
    const double uc = dot(u, ac.center);
    const double disc = uc * uc - ac.center.squared_norm() + ac.radius * ac.radius;
    if (disc < 0.0) continue;
    for (const double t : {uc - std::sqrt(disc), uc + std::sqrt(disc)}) {
      if (t < 0.0 || t > outer) continue;
      const Vec2 x = u * t;
      const double angle = sign * p.phi;
      const double v = model.probability_at(t, angle);
      if (!best.found || better_capture(v, angle, best.value, best_angle)) {
        best = {v, (x - ac.center).angle(), x, true};
        best_angle = angle;
      }
    }
  }
  return best;
}

}  // namespace

CapturePoint optimal_capture_point(const ApolloniusCircle& ac, const CaptureModel& model,
                                   int samples) {
  if (ac.radius < kBoundaryTol) {
    return {ac.center, model.probability_unchecked(ac.center), true};
  }
  samples = std::max(samples, 8);
  const BoundaryScan best = scan_boundary(ac, model, samples);
  if (!best.found) return {ac.center, model.probability_unchecked(ac.center), false};

  const ConeRegion env = environment_region(model.params());
  const double h = 2.0 * kPi / samples;
  auto f = [&](double s) {
    const Vec2 x = ac.point_at(s);
    return env.contains(x) ? model.probability_unchecked(x)
                           : std::numeric_limits<double>::infinity();
  };
  const auto [s, v] = detail::golden_min(f, best.s - h, best.s + h, 1e-9);
  if (v < best.value - kTie) return {ac.point_at(s), v, false};
  return {best.point, best.value, false};
}

std::optional<StackelbergSolution> choose_engagement(Vec2 x_d0, double theta_a0,
                                                     const CaptureModel& model,
                                                     const ChoiceOptions& options) {
  const GameParams& p = model.params();
  const std::vector<EngagementConfig> set =
      options.full_set
          ? reachable_engagement_set(x_d0, theta_a0, p, model.grid(), options.time_offset)
          : simplified_engagement_set(x_d0, theta_a0, p, model.grid(), options.time_offset);
  if (set.empty()) return std::nullopt;

  // A coarse boundary scan bounds each inner minimum from above, so configs
  // whose coarse value cannot beat the incumbent are skipped.
  const int fine = std::max(options.capture_samples, 8);
  const int coarse = std::max(8, fine / 8);
  std::vector<double> upper(set.size());
  std::vector<std::size_t> order(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    upper[i] = scan_boundary(engagement_circle(set[i], theta_a0, p), model, coarse).value;
    order[i] = i;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return upper[a] > upper[b]; });

  std::optional<StackelbergSolution> best;
  std::size_t best_index = 0;
  for (const std::size_t i : order) {
    if (best && upper[i] < best->value - kTie) break;
    // Fine values never exceed the coarse bound, so a later config can only tie.
    if (best && i > best_index && upper[i] <= best->value + kTie) continue;
    const CapturePoint cp = optimal_capture_point(engagement_circle(set[i], theta_a0, p), model,
                                                  fine);
    // Equal values keep the earliest configuration in (tau, theta) order.
    const bool take = !best || cp.value > best->value + kTie ||
                      (cp.value >= best->value - kTie && i < best_index);
    if (take) {
      best = StackelbergSolution{set[i], cp.point, cp.value};
      best_index = i;
    }
  }
  return best;
}

}  // namespace conedef
