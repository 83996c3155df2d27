#pragma once

// Independent reference implementations used to cross-check the library:
// exhaustive minimum enclosing circle, grid search over the power simplex,
// and numerical integration of the Marcum Q integrand. Nothing here shares
// code with the implementation paths it verifies.

#include <optional>
#include <span>
#include <vector>

#include "hapsim/geometry.hpp"
#include "hapsim/noma.hpp"

namespace hapsim::oracle {

// Smallest enclosing circle by enumerating every 2-point diameter circle and
// every 3-point circumcircle (collinear triples skipped). Intended for point
// sets of at most ~15 points.
geom::Circle brute_force_mec(std::span<const geom::Vec2> points);

struct GridSearchResult {
  bool feasible = false;      // some grid point satisfied every QoS constraint
  double best_rate = 0.0;     // bits/s at the best feasible grid point
  std::vector<double> best_alphas;
};

// Exhaustive search of the full-budget power simplex at the given step,
// keeping the best sum rate among points where every user's own message and
// every SIC predecessor decodes at the group QoS target. Supports K in {1,2,3}.
GridSearchResult grid_search_allocation(const noma::OrderedGroup& group,
                                        double step);

// First-order Marcum Q via adaptive Simpson integration of the defining
// integral; complement() integrates the density from 0 to b instead, which
// keeps small outage probabilities accurate.
double marcum_q1_integral(double a, double b);
double marcum_q1_complement_integral(double a, double b);

}  // namespace hapsim::oracle
