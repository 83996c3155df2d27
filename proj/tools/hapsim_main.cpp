// Command-line front end: scenario generation, the radius/grouping optimizer,
// the figure-data sweeps and the oracle validation gate. Every command prints
// the seed it ran with and writes a manifest next to its outputs so any table
// can be reproduced bit-exactly from (scenario, flags, seed).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hapsim/csv.hpp"
#include "hapsim/geometry.hpp"
#include "hapsim/link.hpp"
#include "hapsim/noma.hpp"
#include "hapsim/optimizer.hpp"
#include "hapsim/outage.hpp"
#include "hapsim/rng.hpp"
#include "hapsim/scenario.hpp"
#include "hapsim/units.hpp"
#include "hapsim/version.hpp"

#include "../tests/support/oracles.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace hapsim;

namespace {

std::uint64_t fnv1a64(const std::string& data, std::uint64_t h = 0xCBF29CE484222325ull) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

fs::path out_dir_default() {
  if (const char* env = std::getenv("HAPSIM_OUT_DIR")) return fs::path(env);
  return fs::path(".");
}

fs::path resolve_out(const fs::path& dir, const std::string& name) {
  fs::path p(name);
  if (p.is_absolute()) return p;
  fs::create_directories(dir);
  return dir / p;
}

Scenario resolve_scenario(const std::string& spec) {
  if (spec == "default") return default_scenario();
  return load_scenario(spec);
}

void write_manifest(const fs::path& out_file, const std::string& command,
                    const Scenario& scenario, const std::string& flags,
                    std::uint64_t seed) {
  const std::string canonical = scenario_to_json(scenario).dump();
  ordered_json manifest;
  manifest["command"] = command;
  manifest["config_hash"] = hex64(fnv1a64(flags, fnv1a64(canonical)));
  manifest["seed"] = seed;
  manifest["version"] = kVersion;
  manifest["flags"] = flags;
  fs::path path = out_file;
  path += ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  out << manifest.dump(2) << '\n';
}

ordered_json solution_to_json(const opt::Solution& sol) {
  ordered_json doc;
  doc["beam_count"] = sol.beam_count;
  doc["grouping_radius_km"] = sol.grouping_radius_km;
  doc["sum_rate_bps"] = sol.sum_rate;
  doc["tdm_average_bps"] = sol.tdm_average_rate;
  doc["objective_bps"] = sol.objective;
  doc["transmit_power_w"] = sol.transmit_power_w;
  doc["protruding_beams"] = sol.protruding_beams;

  ordered_json beams = ordered_json::array();
  for (const auto& beam : sol.beams)
    beams.push_back({{"center_x_km", beam.footprint.center.x},
                     {"center_y_km", beam.footprint.center.y},
                     {"radius_km", beam.footprint.radius},
                     {"hpbw_deg", beam.hpbw_deg},
                     {"peak_gain", beam.peak_gain}});
  doc["beams"] = std::move(beams);
  doc["association"] = sol.association.beam_of;

  ordered_json groups = ordered_json::array();
  for (std::size_t m = 0; m < sol.groups.size(); ++m) {
    const auto& g = sol.groups[m];
    const auto& al = sol.allocations[m];
    groups.push_back({{"beam", g.beam_index},
                      {"user_ids", g.user_ids},
                      {"a_coefficients", g.a},
                      {"alphas", al.alphas},
                      {"feasible", al.feasible},
                      {"critical_user", al.critical_user},
                      {"group_rate_bps", al.sum_rate}});
  }
  doc["groups"] = std::move(groups);
  doc["per_user_rates_bps"] = sol.per_user_rates;

  doc["metrics"] = {{"mean_ee_bits_per_joule", sol.metrics.mean_ee},
                    {"spectral_efficiency", sol.metrics.spectral_efficiency},
                    {"ase_system", sol.metrics.ase_system},
                    {"jain_fairness", sol.metrics.jain_fairness},
                    {"ase_per_beam", sol.metrics.ase_per_beam}};

  ordered_json trace = ordered_json::array();
  for (const auto& rec : sol.trace)
    trace.push_back({{"iteration", rec.iteration},
                     {"radius_km", rec.radius_km},
                     {"beam_count", rec.beam_count},
                     {"objective_bps", rec.objective},
                     {"best_objective_bps", rec.best_objective}});
  doc["trace"] = std::move(trace);
  return doc;
}

struct OmaSummary {
  double sum_rate = 0.0;
  double tdm_average = 0.0;
  std::vector<std::vector<double>> rates;  // per group, group order
};

OmaSummary oma_summary(const opt::Solution& sol) {
  OmaSummary out;
  for (const auto& group : sol.groups) {
    auto rates = noma::oma_baseline(group);
    for (double r : rates) out.sum_rate += r;
    out.rates.push_back(std::move(rates));
  }
  out.tdm_average = sol.beam_count > 0 ? out.sum_rate / sol.beam_count : 0.0;
  return out;
}

// Grouping-count schedule: finest radius grid first, then the largest radius
// seen for each M (M = 1 is the dedicated whole-disk geometry).
std::map<int, double> radius_schedule(const Scenario& scenario, double r_min,
                                      double step, int m_max) {
  std::map<int, double> schedule;
  for (double r = scenario.coverage_radius_km; r >= r_min - 1e-9; r -= step) {
    const double radius = std::max(r, r_min);
    const int m = geom::gdc_cover(scenario.users, radius).count();
    if (m > 1 && m <= m_max && !schedule.count(m)) schedule[m] = radius;
  }
  return schedule;
}

int cmd_generate(int users, double intensity, double radius, std::uint64_t seed,
                 const fs::path& out_file) {
  Scenario s = default_scenario();
  s.coverage_radius_km = radius;
  s.seed = seed;
  s.users = intensity > 0.0 ? generate_users_ppp_intensity(intensity, radius, seed)
                            : generate_users_ppp(users, radius, seed);
  s.validate();
  save_scenario(s, out_file.string());
  write_manifest(out_file, "generate", s, "", seed);
  std::cout << "seed: " << seed << "\n"
            << "wrote " << out_file.string() << " (" << s.users.size()
            << " users)\n";
  return 0;
}

int cmd_optimize(const Scenario& scenario, const opt::OptimizerConfig& config,
                 const fs::path& out_file, const std::string& flags) {
  const opt::Solution sol = opt::optimize(scenario, config);
  std::ofstream out(out_file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_file.string());
  out << solution_to_json(sol).dump(2) << '\n';
  write_manifest(out_file, "optimize", scenario, flags, config.seed);
  std::cout << "seed: " << config.seed << "\n"
            << "M=" << sol.beam_count << " radius=" << format_double(sol.grouping_radius_km)
            << " km sum_rate=" << format_double(sol.sum_rate)
            << " bps tdm_average=" << format_double(sol.tdm_average_rate) << " bps\n"
            << "wrote " << out_file.string() << "\n";
  return 0;
}

int cmd_sweep_m(const Scenario& scenario, opt::OptimizerConfig config,
                int m_max, double grid_step, const fs::path& out_file,
                const std::string& flags) {
  const double r_min = config.r_min_km > 0.0 ? config.r_min_km : scenario.r_min_km;
  const auto schedule = radius_schedule(scenario, r_min, grid_step, m_max);

  CsvWriter csv(out_file.string());
  std::vector<std::string> header{"m", "radius_km"};
  for (const char* scheme : {"welzl", "heuristic", "none"}) {
    header.push_back(std::string("noma_tdm_") + scheme);
    header.push_back(std::string("oma_tdm_") + scheme);
    header.push_back(std::string("noma_sum_") + scheme);
    header.push_back(std::string("oma_sum_") + scheme);
  }
  csv.row(header);

  auto emit_row = [&](int m, double radius, bool whole_disk) {
    std::vector<std::string> row{format_int(m), format_double(radius)};
    for (const opt::MecMethod scheme :
         {opt::MecMethod::welzl, opt::MecMethod::heuristic, opt::MecMethod::none}) {
      config.mec = scheme;
      const opt::Solution sol = whole_disk
                                    ? opt::evaluate_whole_disk(scenario, config)
                                    : opt::evaluate_radius(scenario, radius, config);
      const OmaSummary oma = oma_summary(sol);
      row.push_back(format_double(sol.tdm_average_rate));
      row.push_back(format_double(oma.tdm_average));
      row.push_back(format_double(sol.sum_rate));
      row.push_back(format_double(oma.sum_rate));
    }
    csv.row(row);
  };

  emit_row(1, scenario.coverage_radius_km, true);
  for (const auto& [m, radius] : schedule) emit_row(m, radius, false);

  write_manifest(out_file, "sweep-m", scenario, flags, config.seed);
  std::cout << "seed: " << config.seed << "\n"
            << "wrote " << out_file.string() << " (" << schedule.size() + 1
            << " rows)\n";
  return 0;
}

struct OutageRow {
  double mean_closed = 0.0, worst_closed = 0.0;
  double mean_mc = 0.0, worst_mc = 0.0;
};

OutageRow outage_over_users(const Scenario& scenario, const opt::Solution& sol,
                            bool oma, double target_rate, std::int64_t mc_samples,
                            std::uint64_t seed_base) {
  OutageRow out;
  int users = 0;
  for (std::size_t m = 0; m < sol.groups.size(); ++m) {
    const auto& group = sol.groups[m];
    const auto& alloc = sol.allocations[m];
    const int k = group.size();
    const std::vector<double> phis(
        k, outage::rate_threshold(target_rate, group.bandwidth_hz));
    for (int l = 0; l < k; ++l) {
      // deterministic per-user geometry (fading is what the OP averages over)
      const auto& user = scenario.users[group.user_ids[l] - 1];
      const auto elev = link::elevation_and_distance(
          user.position, scenario.link.altitude_km, scenario.link.psi_min_rad);
      const double loss = db_to_linear(link::path_loss_db(
          scenario.link.altitude_km, elev.psi_rad, scenario.link.wavelength_m()));
      const double gain = link::user_gain(user.position, sol.beams[m],
                                          scenario.link.altitude_km,
                                          scenario.link.aperture_efficiency);
      std::optional<double> psi;
      if (oma) {
        psi = outage::oma_psi(target_rate, group.bandwidth_hz, k,
                              group.transmit_snr);
      } else {
        psi = outage::psi_max(alloc.alphas, phis, group.transmit_snr, l);
      }
      const double closed = outage::noma_outage_closed(
          loss, gain, scenario.link.rician_k, scenario.link.omega, psi);
      const double mc = outage::monte_carlo_outage(
          loss, gain, scenario.link.rician_k, scenario.link.omega, psi,
          mc_samples, seed_base + group.user_ids[l] + (oma ? 500000 : 0), 4);
      out.mean_closed += closed;
      out.mean_mc += mc;
      out.worst_closed = std::max(out.worst_closed, closed);
      out.worst_mc = std::max(out.worst_mc, mc);
      ++users;
    }
  }
  if (users > 0) {
    out.mean_closed /= users;
    out.mean_mc /= users;
  }
  return out;
}

int cmd_sweep_snr(const Scenario& base, opt::OptimizerConfig config,
                  double snr_min_db, double snr_max_db, double snr_step_db,
                  const std::vector<double>& pc_values, double radius,
                  std::int64_t mc_samples, const fs::path& ee_file,
                  const fs::path& outage_file, const std::string& flags) {
  CsvWriter ee_csv(ee_file.string());
  std::vector<std::string> ee_header{"snr_db", "pt_w"};
  for (double pc : pc_values) {
    ee_header.push_back("noma_ee_pc" + format_double(pc));
    ee_header.push_back("oma_ee_pc" + format_double(pc));
  }
  ee_csv.row(ee_header);

  CsvWriter op_csv(outage_file.string());
  op_csv.row({"snr_db", "pt_w", "noma_op_mean_closed", "noma_op_mean_mc",
              "noma_op_worst_closed", "noma_op_worst_mc", "oma_op_mean_closed",
              "oma_op_mean_mc", "oma_op_worst_closed", "oma_op_worst_mc"});

  const double noise_w = base.link.noise_power_w();
  int snr_index = 0;
  for (double snr_db = snr_min_db; snr_db <= snr_max_db + 1e-9;
       snr_db += snr_step_db, ++snr_index) {
    Scenario scenario = base;
    const double pt_w = db_to_linear(snr_db) * noise_w;
    scenario.power_profile = PowerProfile::constant(pt_w);
    const opt::Solution sol = opt::evaluate_radius(scenario, radius, config);
    const OmaSummary oma = oma_summary(sol);

    std::vector<std::string> ee_row{format_double(snr_db), format_double(pt_w)};
    for (double pc : pc_values) {
      noma::EfficiencyContext ctx;
      ctx.transmit_power_w = pt_w;
      ctx.circuit_power_w = pc;
      ctx.bandwidth_hz = scenario.link.bandwidth_hz;
      ctx.psi_min_rad = scenario.link.psi_min_rad;
      ctx.altitude_km = scenario.link.altitude_km;

      std::vector<std::vector<double>> noma_alphas;
      std::vector<double> radii;
      for (std::size_t m = 0; m < sol.groups.size(); ++m) {
        noma_alphas.push_back(sol.allocations[m].alphas);
        radii.push_back(sol.beams[m].footprint.radius);
      }
      const auto noma_metrics =
          noma::efficiency_metrics(sol.groups, noma_alphas, radii, ctx);

      // OMA: uniform split of both power and band
      double oma_ee_sum = 0.0;
      int user_count = 0;
      for (std::size_t m = 0; m < sol.groups.size(); ++m) {
        const int k = sol.groups[m].size();
        for (int l = 0; l < k; ++l) {
          oma_ee_sum += oma.rates[m][l] / (pt_w / k + pc);
          ++user_count;
        }
      }
      const double oma_mean_ee =
          user_count > 0 ? oma_ee_sum / (user_count * sol.groups.size()) : 0.0;

      ee_row.push_back(format_double(noma_metrics.mean_ee));
      ee_row.push_back(format_double(oma_mean_ee));
    }
    ee_csv.row(ee_row);

    const std::uint64_t mc_seed = config.seed + 1000003ull * snr_index;
    const OutageRow noma_row = outage_over_users(scenario, sol, false,
                                                 scenario.qos_rate, mc_samples,
                                                 mc_seed);
    const OutageRow oma_row = outage_over_users(scenario, sol, true,
                                                scenario.qos_rate, mc_samples,
                                                mc_seed);
    op_csv.row({format_double(snr_db), format_double(pt_w),
                format_double(noma_row.mean_closed), format_double(noma_row.mean_mc),
                format_double(noma_row.worst_closed), format_double(noma_row.worst_mc),
                format_double(oma_row.mean_closed), format_double(oma_row.mean_mc),
                format_double(oma_row.worst_closed), format_double(oma_row.worst_mc)});
  }

  write_manifest(ee_file, "sweep-snr", base, flags, config.seed);
  write_manifest(outage_file, "sweep-snr", base, flags, config.seed);
  std::cout << "seed: " << config.seed << "\n"
            << "wrote " << ee_file.string() << " and " << outage_file.string()
            << "\n";
  return 0;
}

int cmd_day_profile(Scenario scenario, opt::OptimizerConfig config,
                    const std::string& profile_path, double step_minutes,
                    const fs::path& out_file, const std::string& flags) {
  if (!profile_path.empty())
    scenario.power_profile = load_power_profile(profile_path);

  CsvWriter csv(out_file.string());
  csv.row({"time_min", "pt_w", "m", "radius_km", "noma_tdm", "noma_sum",
           "oma_tdm", "oma_sum"});

  const double begin = scenario.power_profile.span_begin();
  const double end = scenario.power_profile.span_end();
  for (double t = begin; t < end - 1e-9; t += step_minutes) {
    config.time_minutes = t;
    const opt::Solution sol = opt::optimize(scenario, config);
    const OmaSummary oma = oma_summary(sol);
    csv.row({format_double(t), format_double(sol.transmit_power_w),
             format_int(sol.beam_count), format_double(sol.grouping_radius_km),
             format_double(sol.tdm_average_rate), format_double(sol.sum_rate),
             format_double(oma.tdm_average), format_double(oma.sum_rate)});
  }

  write_manifest(out_file, "day-profile", scenario, flags, config.seed);
  std::cout << "seed: " << config.seed << "\n"
            << "wrote " << out_file.string() << "\n";
  return 0;
}

int cmd_alloc_show(const Scenario& scenario, const opt::OptimizerConfig& config,
                   double radius, int group_index, const fs::path& out_file,
                   const std::string& flags) {
  const opt::Solution sol = opt::evaluate_radius(scenario, radius, config);
  if (group_index < 0 || group_index >= static_cast<int>(sol.groups.size()))
    throw std::invalid_argument("alloc-show: group index out of range (have " +
                                format_int(sol.groups.size()) + " groups)");
  const auto& group = sol.groups[group_index];
  const auto& alloc = sol.allocations[group_index];
  const auto oma_rates = noma::oma_baseline(group);
  const double qos = config.qos_rate >= 0.0 ? config.qos_rate : scenario.qos_rate;

  CsvWriter csv(out_file.string());
  csv.row({"user_id", "a_coefficient", "alpha_noma", "alpha_oma",
           "rate_noma_bps", "rate_oma_bps", "meets_qos"});
  for (int l = 0; l < group.size(); ++l) {
    const double rate = noma::user_rate(group, alloc.alphas, l);
    csv.row({format_int(group.user_ids[l]), format_double(group.a[l]),
             format_double(alloc.alphas[l]), format_double(1.0 / group.size()),
             format_double(rate), format_double(oma_rates[l]),
             rate >= qos * (1.0 - 1e-9) ? "1" : "0"});
  }

  write_manifest(out_file, "alloc-show", scenario, flags, config.seed);
  std::cout << "seed: " << config.seed << "\n"
            << "group " << group_index << ": " << group.size() << " users, "
            << (alloc.feasible ? "feasible" : "infeasible") << "\n"
            << "wrote " << out_file.string() << "\n";
  return 0;
}

int cmd_validate(std::uint64_t seed) {
  std::cout << "seed: " << seed << "\n";
  int failures = 0;
  auto report = [&](const char* name, bool ok, const std::string& detail) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  };

  {  // exact MEC against exhaustive enumeration
    RngStream rng(seed, 1);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const int n = 3 + static_cast<int>(rng.below(10));
      std::vector<geom::Vec2> pts(n);
      for (auto& p : pts) p = {rng.uniform() * 100.0 - 50.0, rng.uniform() * 100.0 - 50.0};
      const auto fast = geom::welzl_mec(pts);
      const auto brute = oracle::brute_force_mec(pts);
      worst = std::max(worst, std::abs(fast.radius - brute.radius));
    }
    report("mec_oracle", worst <= 1e-9, "max radius gap " + format_double(worst));
  }

  {  // closed-form power allocation against the grid search
    RngStream rng(seed, 2);
    double worst = 0.0;
    bool branch_ok = true;
    int feasible_count = 0;
    for (int i = 0; i < 60; ++i) {
      const int k = 2 + static_cast<int>(rng.below(2));
      std::vector<std::pair<int, double>> ids_a;
      for (int l = 0; l < k; ++l)
        ids_a.emplace_back(l + 1, 0.02 + 2.0 * rng.uniform());
      const double omega_prime = 0.2 + 1.3 * rng.uniform();
      auto group = noma::make_ordered_group(0, ids_a, 1.0, 1.0, omega_prime);
      const auto closed = noma::allocate_power(group);
      const auto grid = oracle::grid_search_allocation(group, 1e-3);
      if (closed.feasible != grid.feasible) branch_ok = false;
      if (grid.feasible) {
        ++feasible_count;
        if (closed.sum_rate < grid.best_rate - 1e-9) branch_ok = false;
        worst = std::max(worst, std::abs(closed.sum_rate - grid.best_rate));
      }
    }
    report("allocation_oracle", branch_ok && worst < 0.05,
           "feasible " + format_int(feasible_count) + "/60, max gap " +
               format_double(worst));
  }

  {  // Marcum Q against the integral oracle
    double worst = 0.0;
    for (double a : {0.0, 0.5, 1.0, 2.0, 3.5}) {
      for (double b : {0.0, 0.4, 1.0, 2.0, 5.0}) {
        worst = std::max(worst, std::abs(outage::marcum_q1(a, b) -
                                         oracle::marcum_q1_integral(a, b)));
      }
    }
    report("marcum_oracle", worst <= 1e-9, "max abs gap " + format_double(worst));
  }

  {  // Monte-Carlo outage against the closed form
    RngStream rng(seed, 3);
    bool ok = true;
    double worst_sigma = 0.0;
    const std::int64_t n = 200000;
    for (int i = 0; i < 8; ++i) {
      const double ks = 4.0 * rng.uniform();
      const double omega = 0.5 + 2.0 * rng.uniform();
      const double ratio = 0.2 + 2.5 * rng.uniform();  // psi L / G
      const double closed =
          outage::noma_outage_closed(ratio, 1.0, ks, omega, 1.0);
      if (closed < 0.01 || closed > 0.99) continue;
      const double mc = outage::monte_carlo_outage(ratio, 1.0, ks, omega, 1.0,
                                                   n, seed + i, 4);
      const double sigma = std::sqrt(closed * (1.0 - closed) / n);
      worst_sigma = std::max(worst_sigma, std::abs(mc - closed) / sigma);
      if (std::abs(mc - closed) > 3.0 * sigma) ok = false;
    }
    report("outage_monte_carlo", ok,
           "worst deviation " + format_double(worst_sigma) + " sigma");
  }

  std::cout << (failures == 0 ? "validate: all checks passed\n"
                              : "validate: FAILURES present\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spot-beam NOMA coverage simulator and optimizer"};
  app.require_subcommand(1);

  std::string out_dir = out_dir_default().string();
  app.add_option("--out-dir", out_dir, "output directory (env HAPSIM_OUT_DIR)");

  // generate
  auto* gen = app.add_subcommand("generate", "write a scenario file");
  int gen_users = 100;
  double gen_intensity = 0.0;
  double gen_radius = 60.0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "scenario.json";
  gen->add_option("--users", gen_users, "fixed user count");
  gen->add_option("--intensity", gen_intensity, "users per km^2 (Poisson count)");
  gen->add_option("--radius", gen_radius, "coverage radius, km");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output file");

  // shared options for the pipeline commands
  struct Common {
    std::string scenario = "default";
    std::string strategy = "sweep";
    std::string mec = "welzl";
    double qos = -1.0;
    double step = 1.0;
    double time = 720.0;
    std::int64_t seed = -1;
  };
  auto add_common = [](CLI::App* cmd, Common& c) {
    cmd->add_option("--scenario", c.scenario, "scenario file or 'default'");
    cmd->add_option("--mec", c.mec, "beam refinement: welzl|heuristic|none");
    cmd->add_option("--qos", c.qos, "QoS rate override, bits/s");
    cmd->add_option("--seed", c.seed, "optimizer seed (default: scenario seed)");
    cmd->add_option("--time", c.time, "profile sampling time, minutes");
  };

  auto* opt_cmd = app.add_subcommand("optimize", "run the radius/grouping optimizer");
  Common opt_common;
  add_common(opt_cmd, opt_common);
  opt_cmd->add_option("--strategy", opt_common.strategy, "sweep|bisection");
  opt_cmd->add_option("--step", opt_common.step, "radius step, km");
  std::string opt_out = "solution.json";
  opt_cmd->add_option("--out", opt_out, "solution file");

  auto* sweepm = app.add_subcommand("sweep-m", "rate vs group count table");
  Common sweepm_common;
  add_common(sweepm, sweepm_common);
  int sweepm_mmax = 15;
  double sweepm_grid = 0.05;
  std::string sweepm_out = "sweep_m.csv";
  sweepm->add_option("--mmax", sweepm_mmax, "largest group count");
  sweepm->add_option("--grid", sweepm_grid, "radius schedule grid, km");
  sweepm->add_option("--out", sweepm_out, "output CSV");

  auto* sweepsnr = app.add_subcommand("sweep-snr", "EE and outage vs transmit SNR");
  Common snr_common;
  add_common(sweepsnr, snr_common);
  double snr_min = 120.0, snr_max = 160.0, snr_step = 2.0, snr_radius = 20.0;
  std::vector<double> snr_pc{1.2, 1.5, 2.0};
  std::int64_t snr_mc = 200000;
  std::string snr_ee_out = "ee_vs_snr.csv";
  std::string snr_op_out = "outage_vs_snr.csv";
  sweepsnr->add_option("--snr-min", snr_min, "lowest transmit SNR, dB");
  sweepsnr->add_option("--snr-max", snr_max, "highest transmit SNR, dB");
  sweepsnr->add_option("--snr-step", snr_step, "grid step, dB");
  sweepsnr->add_option("--pc", snr_pc, "circuit power values, W");
  sweepsnr->add_option("--radius", snr_radius, "grouping radius, km");
  sweepsnr->add_option("--mc-samples", snr_mc, "Monte-Carlo draws per point");
  sweepsnr->add_option("--ee-out", snr_ee_out, "EE table file");
  sweepsnr->add_option("--outage-out", snr_op_out, "outage table file");

  auto* day = app.add_subcommand("day-profile", "rate vs time for a power profile");
  Common day_common;
  add_common(day, day_common);
  std::string day_profile;
  double day_step_min = 15.0;
  double day_radius_step = 2.5;
  std::string day_out = "day_profile.csv";
  day->add_option("--profile", day_profile, "two-column time,watts table");
  day->add_option("--step-minutes", day_step_min, "sampling step, minutes");
  day->add_option("--step", day_radius_step, "optimizer radius step, km");
  day->add_option("--out", day_out, "output CSV");

  auto* alloc = app.add_subcommand("alloc-show", "per-user power split of one group");
  Common alloc_common;
  add_common(alloc, alloc_common);
  double alloc_radius = 20.0;
  int alloc_group = 0;
  std::string alloc_out = "alloc.csv";
  alloc->add_option("--radius", alloc_radius, "grouping radius, km");
  alloc->add_option("--group", alloc_group, "group index (0-based)");
  alloc->add_option("--out", alloc_out, "output CSV");

  auto* validate = app.add_subcommand("validate", "run the oracle cross-checks");
  std::uint64_t validate_seed = 20250810;
  validate->add_option("--seed", validate_seed, "RNG seed");

  CLI11_PARSE(app, argc, argv);

  try {
    const fs::path dir(out_dir);

    if (*gen) return cmd_generate(gen_users, gen_intensity, gen_radius, gen_seed,
                                  resolve_out(dir, gen_out));
    if (*validate) return cmd_validate(validate_seed);

    auto build = [&](const Common& c, const Scenario& scenario) {
      opt::OptimizerConfig config;
      config.mec = opt::mec_method_from_string(c.mec);
      config.qos_rate = c.qos;
      config.time_minutes = c.time;
      config.seed = c.seed >= 0 ? static_cast<std::uint64_t>(c.seed) : scenario.seed;
      return config;
    };
    auto flags_of = [&](const CLI::App* cmd) {
      std::string flags = cmd->get_name();
      for (const auto* option : cmd->get_options()) {
        for (const auto& value : option->results())
          flags += " " + option->get_name() + "=" + value;
      }
      return flags;
    };

    if (*opt_cmd) {
      const Scenario scenario = resolve_scenario(opt_common.scenario);
      auto config = build(opt_common, scenario);
      config.strategy = opt::strategy_from_string(opt_common.strategy);
      config.radius_step_km = opt_common.step;
      return cmd_optimize(scenario, config, resolve_out(dir, opt_out),
                          flags_of(opt_cmd));
    }
    if (*sweepm) {
      const Scenario scenario = resolve_scenario(sweepm_common.scenario);
      const auto config = build(sweepm_common, scenario);
      return cmd_sweep_m(scenario, config, sweepm_mmax, sweepm_grid,
                         resolve_out(dir, sweepm_out), flags_of(sweepm));
    }
    if (*sweepsnr) {
      const Scenario scenario = resolve_scenario(snr_common.scenario);
      const auto config = build(snr_common, scenario);
      return cmd_sweep_snr(scenario, config, snr_min, snr_max, snr_step, snr_pc,
                           snr_radius, snr_mc, resolve_out(dir, snr_ee_out),
                           resolve_out(dir, snr_op_out), flags_of(sweepsnr));
    }
    if (*day) {
      const Scenario scenario = resolve_scenario(day_common.scenario);
      auto config = build(day_common, scenario);
      config.radius_step_km = day_radius_step;
      return cmd_day_profile(scenario, config, day_profile, day_step_min,
                             resolve_out(dir, day_out), flags_of(day));
    }
    if (*alloc) {
      const Scenario scenario = resolve_scenario(alloc_common.scenario);
      const auto config = build(alloc_common, scenario);
      return cmd_alloc_show(scenario, config, alloc_radius, alloc_group,
                            resolve_out(dir, alloc_out), flags_of(alloc));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
