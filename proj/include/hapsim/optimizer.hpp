#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hapsim/geometry.hpp"
#include "hapsim/noma.hpp"
#include "hapsim/scenario.hpp"

namespace hapsim::opt {

enum class MecMethod { none, welzl, heuristic };
enum class RadiusStrategy { sweep, bisection };

MecMethod mec_method_from_string(const std::string& name);
std::string to_string(MecMethod method);
RadiusStrategy strategy_from_string(const std::string& name);
std::string to_string(RadiusStrategy strategy);

struct OptimizerConfig {
  double r_min_km = 0.0;        // 0 -> scenario r_min
  double r_max_km = 0.0;        // 0 -> coverage radius
  RadiusStrategy strategy = RadiusStrategy::sweep;
  double radius_step_km = 1.0;  // sweep grid / bisection probe offset
  double tolerance = 1e-4;      // bisection stop, bits/s
  int max_iterations = 10000;
  MecMethod mec = MecMethod::welzl;
  double qos_rate = -1.0;       // <0 -> scenario QoS
  int ergodic_draws = 1;        // >1 averages the objective over fading draws
  double time_minutes = 720.0;  // where the power profile is sampled
  std::uint64_t seed = 1;
};

struct IterationRecord {
  int iteration = 0;
  double radius_km = 0.0;
  int beam_count = 0;
  double objective = 0.0;       // candidate TDM-average rate
  double best_objective = 0.0;  // kept best-so-far (non-decreasing)
};

struct Solution {
  int beam_count = 0;
  double grouping_radius_km = 0.0;  // shared GDC radius this came from
  std::vector<geom::SpotBeam> beams;
  geom::Association association;
  std::vector<noma::OrderedGroup> groups;
  std::vector<noma::PowerAllocation> allocations;
  std::vector<double> per_user_rates;  // scenario user order, bits/s
  double sum_rate = 0.0;               // sum of per-slot group rates
  double tdm_average_rate = 0.0;       // sum_rate / M
  double objective = 0.0;              // selection objective (ergodic mean)
  double transmit_power_w = 0.0;
  int protruding_beams = 0;  // refined footprints poking past the coverage rim
  noma::Metrics metrics;
  std::vector<IterationRecord> trace;
};

// One pass of the grouping -> association -> per-beam refinement -> power
// allocation pipeline at a fixed shared grouping radius. Fading is frozen by
// the config seed (one draw per user, radius-independent), so candidates at
// different radii see identical channels.
Solution evaluate_radius(const Scenario& scenario, double radius_km,
                         const OptimizerConfig& config);

// The no-grouping geometry: one beam at the origin covering the whole disk,
// all users in one group, optimal power allocation. Refinement still applies
// per config.mec. This is the M = 1 reference row of the rate-vs-M sweeps.
Solution evaluate_whole_disk(const Scenario& scenario,
                             const OptimizerConfig& config);

// Radius search over [r_min, r_max] (full-grid sweep or bisection), keeping
// the best TDM-average rate. The no-grouping baseline (single beam over the
// whole disk, uniform power split) is always a candidate, so the result never
// falls below it.
Solution optimize(const Scenario& scenario, const OptimizerConfig& config);

// Single beam at the origin covering the whole disk with a uniform power
// split across all users.
Solution baseline_single_beam(const Scenario& scenario,
                              const OptimizerConfig& config);

// Piecewise-constant transmit-power lookup.
double snapshot_power(const PowerProfile& profile, double minutes);

}  // namespace hapsim::opt
