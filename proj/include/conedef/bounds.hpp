#pragma once

#include <vector>

#include "conedef/probability.hpp"

namespace conedef {

/// Capture probability at the capture-cone corner (r_t + 2*gamma*rho_a) u(phi).
double p_star(const CaptureModel& model);

/// Capture probability at the least favourable point of the circle tangent to
/// the target on the bisector, centre (r_t + gamma*rho_a) u(0).
double q_star(const CaptureModel& model);

/// Running capture percentage of the two-state chain over games 1..n.
/// The first state is the centre (capture certain); after a capture the
/// defender is in the second state, where it captures with probability
/// `star` and otherwise returns to the centre.
std::vector<double> markov_bound(int n, double star);

/// Long-run percentage of the same chain.
double stationary_bound(double star);

struct BoundsRow {
  int n = 0;
  double lower_pct = 0.0;
  double upper_pct = 0.0;
};

std::vector<BoundsRow> bounds_table(const CaptureModel& model, int n);

}  // namespace conedef
