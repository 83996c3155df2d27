#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hapsim/geometry.hpp"
#include "hapsim/link.hpp"

namespace hapsim {

// Piecewise-constant transmit-power timetable. A single entry means a
// constant profile valid at any time; otherwise entry i covers
// [minutes_i, minutes_{i+1}) and the last entry covers one step (15 min).
struct PowerProfile {
  struct Entry {
    double minutes = 0.0;
    double watts = 0.0;
  };
  std::vector<Entry> entries;

  static constexpr double kStepMinutes = 15.0;

  double at(double minutes) const;  // throws std::out_of_range outside the span
  double span_begin() const;
  double span_end() const;
  void validate() const;

  static PowerProfile constant(double watts) { return {{{0.0, watts}}}; }
};

struct Scenario {
  double coverage_radius_km = 60.0;
  link::LinkParams link;
  std::vector<geom::GroundUser> users;
  PowerProfile power_profile = PowerProfile::constant(150.0);
  double circuit_power_w = 1.5;
  double qos_rate = 2e6;  // per-user target, bits/s
  double r_min_km = 5.464;
  std::uint64_t seed = 1;
  nlohmann::ordered_json solar_metadata;  // opaque provenance block

  void validate() const;  // throws naming the offending field
};

// Exactly `count` users placed uniformly on the coverage disk (conditional
// point process). Ids run 1..count.
std::vector<geom::GroundUser> generate_users_ppp(int count, double radius_km,
                                                 std::uint64_t seed);

// Poisson-distributed count with the given intensity (users per km^2), then
// uniform placement.
std::vector<geom::GroundUser> generate_users_ppp_intensity(double intensity_per_km2,
                                                           double radius_km,
                                                           std::uint64_t seed);

// JSON scenario file. Unknown keys warn on stderr; schema violations throw
// with the offending field in the message. A "ppp" block is materialized
// into explicit users at load time using the scenario seed.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);
nlohmann::ordered_json scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const nlohmann::ordered_json& doc,
                            const std::string& origin_dir = ".");

// Built-in default: the shipped parameter set with 100 seeded users.
Scenario default_scenario();

// Two-column power-profile table: "minutes,watts" or "HH:MM,watts" rows.
PowerProfile load_power_profile(const std::string& path);

bool operator==(const PowerProfile::Entry&, const PowerProfile::Entry&);
bool operator==(const PowerProfile&, const PowerProfile&);
bool operator==(const Scenario&, const Scenario&);

}  // namespace hapsim
