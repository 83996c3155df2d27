#include "hapsim/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hapsim/rng.hpp"
#include "hapsim/units.hpp"

namespace hapsim::opt {

namespace {

constexpr std::uint64_t kChannelStreamBase = 0x6368616Eull;  // per-user fading

struct PipelineContext {
  double transmit_power_w = 1.0;
  double transmit_snr = 1.0;
  double qos_rate = 0.0;
  double bandwidth_hz = 1.0;
};

std::vector<double> draw_channel_powers(const Scenario& scenario,
                                        std::uint64_t seed, int draw_index) {
  std::vector<double> g2(scenario.users.size());
  for (std::size_t i = 0; i < scenario.users.size(); ++i) {
    RngStream stream(seed, kChannelStreamBase + i);
    double value = 0.0;
    for (int d = 0; d <= draw_index; ++d)
      value = link::sample_rician_power(scenario.link.rician_k,
                                        scenario.link.omega, stream);
    g2[i] = value;
  }
  return g2;
}

// A coefficients for one beam's members under a candidate beam geometry.
std::vector<std::pair<int, double>> member_a_coefficients(
    const Scenario& scenario, const std::vector<int>& member_indices,
    const geom::SpotBeam& beam, const std::vector<double>& g2,
    double transmit_snr) {
  std::vector<std::pair<int, double>> out;
  out.reserve(member_indices.size());
  for (int idx : member_indices) {
    const geom::GroundUser& user = scenario.users[idx];
    const auto elev = link::elevation_and_distance(
        user.position, scenario.link.altitude_km, scenario.link.psi_min_rad);
    const double loss_db = link::path_loss_db(
        scenario.link.altitude_km, elev.psi_rad, scenario.link.wavelength_m());
    const double gain = link::user_gain(user.position, beam,
                                        scenario.link.altitude_km,
                                        scenario.link.aperture_efficiency);
    const auto channel = link::make_channel(std::sqrt(g2[idx]), gain,
                                            db_to_linear(loss_db));
    out.emplace_back(user.id, link::a_coefficient(channel, transmit_snr));
  }
  return out;
}

Solution finish_pipeline(const Scenario& scenario, double radius_km,
                         const OptimizerConfig& config,
                         const PipelineContext& ctx,
                         const std::vector<double>& g2,
                         const std::vector<geom::Vec2>& centers) {
  Solution sol;
  sol.grouping_radius_km = radius_km;
  sol.transmit_power_w = ctx.transmit_power_w;

  std::vector<geom::SpotBeam> beams;
  beams.reserve(centers.size());
  for (const geom::Vec2& center : centers)
    beams.push_back(link::make_spot_beam(center, radius_km,
                                         scenario.link.altitude_km,
                                         scenario.link.aperture_efficiency));

  sol.association = geom::associate(scenario.users, beams);

  std::vector<std::vector<int>> members(beams.size());
  for (std::size_t i = 0; i < scenario.users.size(); ++i)
    members[sol.association.beam_of[i]].push_back(static_cast<int>(i));

  // Per-beam refinement: adopt the group's enclosing circle only if it does
  // not lower the group rate at the frozen channels.
  for (std::size_t m = 0; m < beams.size(); ++m) {
    if (members[m].empty()) continue;

    auto group_rate = [&](const geom::SpotBeam& beam) {
      auto ids_a = member_a_coefficients(scenario, members[m], beam, g2,
                                         ctx.transmit_snr);
      const auto group = noma::make_ordered_group(
          static_cast<int>(m), std::move(ids_a), ctx.bandwidth_hz,
          ctx.transmit_snr, ctx.qos_rate);
      return noma::allocate_power(group).sum_rate;
    };

    if (config.mec != MecMethod::none) {
      std::vector<geom::Vec2> pts;
      pts.reserve(members[m].size());
      for (int idx : members[m]) pts.push_back(scenario.users[idx].position);
      const geom::Circle refined = config.mec == MecMethod::welzl
                                       ? geom::welzl_mec(pts)
                                       : geom::heuristic_mec(pts);
      const double floor_km =
          std::min(config.r_min_km > 0.0 ? config.r_min_km : scenario.r_min_km,
                   radius_km);
      const double r_new = std::clamp(refined.radius, floor_km, radius_km);
      // The centroid circle of a lopsided group can exceed the grouping
      // radius; members stay covered only when the enclosing radius survived
      // the clamp.
      if (refined.radius <= r_new + 1e-12) {
        const geom::SpotBeam candidate = link::make_spot_beam(
            refined.center, r_new, scenario.link.altitude_km,
            scenario.link.aperture_efficiency);
        if (group_rate(candidate) >= group_rate(beams[m])) beams[m] = candidate;
      }
    }

    if (geom::norm(beams[m].footprint.center) + beams[m].footprint.radius >
        scenario.coverage_radius_km + 1e-9)
      ++sol.protruding_beams;
  }

  sol.beams = beams;
  sol.beam_count = static_cast<int>(beams.size());

  std::vector<std::vector<double>> alpha_lists;
  for (std::size_t m = 0; m < beams.size(); ++m) {
    auto ids_a =
        member_a_coefficients(scenario, members[m], beams[m], g2, ctx.transmit_snr);
    auto group = noma::make_ordered_group(static_cast<int>(m), std::move(ids_a),
                                          ctx.bandwidth_hz, ctx.transmit_snr,
                                          ctx.qos_rate);
    auto allocation = noma::allocate_power(group);
    alpha_lists.push_back(allocation.alphas);
    sol.groups.push_back(std::move(group));
    sol.allocations.push_back(std::move(allocation));
  }

  sol.per_user_rates.assign(scenario.users.size(), 0.0);
  for (std::size_t m = 0; m < sol.groups.size(); ++m) {
    const auto& group = sol.groups[m];
    for (int l = 0; l < group.size(); ++l) {
      // ids are contiguous from 1 in scenario order
      sol.per_user_rates[group.user_ids[l] - 1] =
          noma::user_rate(group, alpha_lists[m], l);
    }
  }

  const auto rates = noma::sum_rate(sol.groups, alpha_lists);
  sol.sum_rate = rates.sum_rate;
  sol.tdm_average_rate = rates.tdm_average;
  sol.objective = rates.tdm_average;

  std::vector<double> radii;
  radii.reserve(beams.size());
  for (const auto& beam : beams) radii.push_back(beam.footprint.radius);
  noma::EfficiencyContext ectx;
  ectx.transmit_power_w = ctx.transmit_power_w;
  ectx.circuit_power_w = scenario.circuit_power_w;
  ectx.bandwidth_hz = ctx.bandwidth_hz;
  ectx.psi_min_rad = scenario.link.psi_min_rad;
  ectx.altitude_km = scenario.link.altitude_km;
  sol.metrics = noma::efficiency_metrics(sol.groups, alpha_lists, radii, ectx);
  return sol;
}

Solution run_pipeline(const Scenario& scenario, double radius_km,
                      const OptimizerConfig& config,
                      const PipelineContext& ctx,
                      const std::vector<double>& g2) {
  const auto cover = geom::gdc_cover(scenario.users, radius_km);
  return finish_pipeline(scenario, radius_km, config, ctx, g2, cover.centers);
}

PipelineContext make_context(const Scenario& scenario,
                             const OptimizerConfig& config, double power_w) {
  PipelineContext ctx;
  ctx.transmit_power_w = power_w;
  ctx.bandwidth_hz = scenario.link.bandwidth_hz;
  ctx.transmit_snr = power_w / scenario.link.noise_power_w();
  ctx.qos_rate = config.qos_rate >= 0.0 ? config.qos_rate : scenario.qos_rate;
  return ctx;
}

}  // namespace

MecMethod mec_method_from_string(const std::string& name) {
  if (name == "welzl") return MecMethod::welzl;
  if (name == "heuristic") return MecMethod::heuristic;
  if (name == "none") return MecMethod::none;
  throw std::invalid_argument("unknown MEC method: " + name);
}

std::string to_string(MecMethod method) {
  switch (method) {
    case MecMethod::welzl: return "welzl";
    case MecMethod::heuristic: return "heuristic";
    default: return "none";
  }
}

RadiusStrategy strategy_from_string(const std::string& name) {
  if (name == "sweep") return RadiusStrategy::sweep;
  if (name == "bisection") return RadiusStrategy::bisection;
  throw std::invalid_argument("unknown radius strategy: " + name);
}

std::string to_string(RadiusStrategy strategy) {
  return strategy == RadiusStrategy::sweep ? "sweep" : "bisection";
}

double snapshot_power(const PowerProfile& profile, double minutes) {
  return profile.at(minutes);
}

Solution evaluate_radius(const Scenario& scenario, double radius_km,
                         const OptimizerConfig& config) {
  scenario.validate();
  if (!(radius_km > 0.0))
    throw std::invalid_argument("evaluate_radius: radius must be positive");

  const double power_w = snapshot_power(scenario.power_profile, config.time_minutes);
  const PipelineContext ctx = make_context(scenario, config, power_w);

  const auto g2 = draw_channel_powers(scenario, config.seed, 0);
  Solution sol = run_pipeline(scenario, radius_km, config, ctx, g2);

  if (config.ergodic_draws > 1) {
    double acc = sol.objective;
    for (int d = 1; d < config.ergodic_draws; ++d) {
      const auto g2d = draw_channel_powers(scenario, config.seed, d);
      acc += run_pipeline(scenario, radius_km, config, ctx, g2d).objective;
    }
    sol.objective = acc / config.ergodic_draws;
  }
  return sol;
}

Solution evaluate_whole_disk(const Scenario& scenario,
                             const OptimizerConfig& config) {
  scenario.validate();
  const double power_w = snapshot_power(scenario.power_profile, config.time_minutes);
  const PipelineContext ctx = make_context(scenario, config, power_w);
  const auto g2 = draw_channel_powers(scenario, config.seed, 0);
  return finish_pipeline(scenario, scenario.coverage_radius_km, config, ctx, g2,
                         {geom::Vec2{0.0, 0.0}});
}

Solution baseline_single_beam(const Scenario& scenario,
                              const OptimizerConfig& config) {
  scenario.validate();
  const double power_w = snapshot_power(scenario.power_profile, config.time_minutes);
  const PipelineContext ctx = make_context(scenario, config, power_w);
  const auto g2 = draw_channel_powers(scenario, config.seed, 0);

  Solution sol;
  sol.transmit_power_w = power_w;
  sol.grouping_radius_km = scenario.coverage_radius_km;
  sol.beam_count = 1;
  sol.beams.push_back(link::make_spot_beam({0.0, 0.0}, scenario.coverage_radius_km,
                                           scenario.link.altitude_km,
                                           scenario.link.aperture_efficiency));
  sol.association.beam_of.assign(scenario.users.size(), 0);

  std::vector<int> everyone(scenario.users.size());
  for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = static_cast<int>(i);
  auto ids_a = member_a_coefficients(scenario, everyone, sol.beams[0], g2,
                                     ctx.transmit_snr);
  auto group = noma::make_ordered_group(0, std::move(ids_a), ctx.bandwidth_hz,
                                        ctx.transmit_snr, ctx.qos_rate);

  noma::PowerAllocation uniform;
  const int k = group.size();
  uniform.alphas.assign(k, 1.0 / k);
  uniform.feasible = true;
  uniform.sum_rate = 0.0;
  sol.per_user_rates.assign(scenario.users.size(), 0.0);
  for (int l = 0; l < k; ++l) {
    const double rate = noma::user_rate(group, uniform.alphas, l);
    if (rate < ctx.qos_rate * (1.0 - 1e-12)) uniform.feasible = false;
    uniform.sum_rate += rate;
    sol.per_user_rates[group.user_ids[l] - 1] = rate;
  }

  sol.sum_rate = uniform.sum_rate;
  sol.tdm_average_rate = uniform.sum_rate;
  sol.objective = uniform.sum_rate;

  std::vector<std::vector<double>> alpha_lists{uniform.alphas};
  std::vector<double> radii{sol.beams[0].footprint.radius};
  noma::EfficiencyContext ectx;
  ectx.transmit_power_w = power_w;
  ectx.circuit_power_w = scenario.circuit_power_w;
  ectx.bandwidth_hz = ctx.bandwidth_hz;
  ectx.psi_min_rad = scenario.link.psi_min_rad;
  ectx.altitude_km = scenario.link.altitude_km;
  std::vector<noma::OrderedGroup> groups{group};
  sol.metrics = noma::efficiency_metrics(groups, alpha_lists, radii, ectx);

  sol.groups.push_back(std::move(group));
  sol.allocations.push_back(std::move(uniform));
  return sol;
}

Solution optimize(const Scenario& scenario, const OptimizerConfig& config) {
  scenario.validate();
  const double r_min = config.r_min_km > 0.0 ? config.r_min_km : scenario.r_min_km;
  const double r_max = config.r_max_km > 0.0
                           ? std::min(config.r_max_km, scenario.coverage_radius_km)
                           : scenario.coverage_radius_km;
  if (!(r_min > 0.0) || r_min > r_max)
    throw std::invalid_argument("optimize: need 0 < r_min <= r_max");
  if (!(config.radius_step_km > 0.0))
    throw std::invalid_argument("optimize: radius step must be positive");

  std::vector<IterationRecord> trace;
  Solution best = baseline_single_beam(scenario, config);
  trace.push_back({0, best.grouping_radius_km, 1, best.objective, best.objective});

  {
    Solution whole = evaluate_whole_disk(scenario, config);
    const double objective = whole.objective;
    if (objective > best.objective) best = std::move(whole);
    trace.push_back({1, scenario.coverage_radius_km, 1, objective, best.objective});
  }

  // Candidate evaluation with the printed keep/discard rule: the best-so-far
  // trace is non-decreasing, ties keep the earlier (smaller) radius.
  auto consider = [&](double radius) {
    Solution candidate = evaluate_radius(scenario, radius, config);
    const double cand_objective = candidate.objective;
    const int cand_beams = candidate.beam_count;
    if (cand_objective > best.objective) best = std::move(candidate);
    trace.push_back({static_cast<int>(trace.size()), radius, cand_beams,
                     cand_objective, best.objective});
  };

  if (config.strategy == RadiusStrategy::sweep) {
    int iterations = 0;
    for (double r = r_min; r <= r_max + 1e-9 && iterations < config.max_iterations;
         r += config.radius_step_km, ++iterations) {
      consider(std::min(r, r_max));
    }
  } else {
    double lb = r_min;
    double ub = r_max;
    consider(lb);
    consider(ub);
    int iterations = 2;
    while (ub - lb > config.radius_step_km && iterations < config.max_iterations) {
      const double mid = 0.5 * (lb + ub);
      const double probe = std::min(config.radius_step_km, 0.25 * (ub - lb));
      const double before = best.objective;
      consider(mid - probe);
      const double low_objective = trace.back().objective;
      consider(mid + probe);
      const double high_objective = trace.back().objective;
      if (high_objective >= low_objective)
        lb = mid;
      else
        ub = mid;
      iterations += 2;
      const double gain = std::max(0.0, best.objective - before);
      if (gain < config.tolerance && iterations > 6) break;
    }
  }

  best.trace = std::move(trace);
  return best;
}

}  // namespace hapsim::opt
