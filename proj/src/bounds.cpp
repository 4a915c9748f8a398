#include "conedef/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace conedef {

double p_star(const CaptureModel& model) {
  const GameParams& p = model.params();
  return model.probability(polar(p.capture_cone_radius(), p.phi));
}

double q_star(const CaptureModel& model) {
  const GameParams& p = model.params();
  const ApolloniusCircle ac{polar(p.r_t + p.engagement_radius(), 0.0), p.engagement_radius()};
  return optimal_capture_point(ac, model).value;
}

std::vector<double> markov_bound(int n, double star) {
  if (n < 1) throw std::invalid_argument("markov_bound needs n >= 1");
  if (!(star >= 0.0 && star <= 1.0)) throw std::invalid_argument("star must lie in [0, 1]");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n));
  double centre = 1.0;
  double away = 0.0;
  double captures = 0.0;
  for (int i = 1; i <= n; ++i) {
    captures += centre + star * away;
    const double next_centre = (1.0 - star) * away;
    away = centre + star * away;
    centre = next_centre;
    out.push_back(100.0 * captures / i);
  }
  return out;
}

double stationary_bound(double star) {
  if (!(star >= 0.0 && star <= 1.0)) throw std::invalid_argument("star must lie in [0, 1]");
  return 100.0 / (2.0 - star);
}

std::vector<BoundsRow> bounds_table(const CaptureModel& model, int n) {
  const auto lo = markov_bound(n, p_star(model));
  const auto hi = markov_bound(n, q_star(model));
  std::vector<BoundsRow> rows;
  rows.reserve(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) {
    rows.push_back({static_cast<int>(i + 1), lo[i], hi[i]});
  }
  return rows;
}

}  // namespace conedef
