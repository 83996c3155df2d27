#include "hapsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "hapsim/csv.hpp"
#include "hapsim/rng.hpp"
#include "hapsim/units.hpp"

namespace hapsim {

using nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kPppStream = 0x707070ull;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
  throw std::invalid_argument("scenario: field '" + field + "' " + why);
}

double require_number(const ordered_json& obj, const std::string& key,
                      const std::string& path) {
  if (!obj.contains(key)) fail(path + "." + key, "is missing");
  if (!obj[key].is_number()) fail(path + "." + key, "must be a number");
  return obj[key].get<double>();
}

double number_or(const ordered_json& obj, const std::string& key,
                 const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(path + "." + key, "must be a number");
  return obj[key].get<double>();
}

void warn_unknown_keys(const ordered_json& obj,
                       std::initializer_list<const char*> known,
                       const std::string& path) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(known.begin(), known.end(), [&](const char* k) {
          return key == k;
        }) == known.end()) {
      std::cerr << "warning: unknown scenario field '" << path << "." << key
                << "' ignored\n";
    }
  }
}

}  // namespace

double PowerProfile::at(double minutes) const {
  validate();
  if (entries.size() == 1) return entries.front().watts;
  if (minutes < span_begin() || minutes >= span_end())
    throw std::out_of_range("power profile: time " + format_double(minutes) +
                            " outside [" + format_double(span_begin()) + ", " +
                            format_double(span_end()) + ")");
  double watts = entries.front().watts;
  for (const Entry& e : entries) {
    if (e.minutes > minutes) break;
    watts = e.watts;
  }
  return watts;
}

double PowerProfile::span_begin() const { return entries.front().minutes; }

double PowerProfile::span_end() const {
  return entries.back().minutes + kStepMinutes;
}

void PowerProfile::validate() const {
  if (entries.empty())
    throw std::invalid_argument("power profile: no entries");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i].watts >= 0.0))
      throw std::invalid_argument("power profile: negative watts at entry " +
                                  format_int(static_cast<std::int64_t>(i)));
    if (i > 0 && !(entries[i].minutes > entries[i - 1].minutes))
      throw std::invalid_argument("power profile: times must be increasing");
  }
}

void Scenario::validate() const {
  if (!(coverage_radius_km > 0.0)) fail("coverage.radius_km", "must be positive");
  link.validate();
  const double los_limit = link.altitude_km / std::tan(link.psi_min_rad);
  if (coverage_radius_km > los_limit + 1e-9)
    fail("coverage.radius_km",
         "exceeds the line-of-sight limit H/tan(psi_min) = " +
             format_double(los_limit) + " km");
  if (users.empty()) fail("users", "is empty");
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (users[i].id != static_cast<int>(i) + 1)
      fail("users[" + format_int(static_cast<std::int64_t>(i)) + "].id",
           "must be contiguous starting at 1");
    if (geom::norm(users[i].position) > coverage_radius_km + 1e-9)
      fail("users[" + format_int(static_cast<std::int64_t>(i)) + "]",
           "lies outside the coverage radius");
  }
  power_profile.validate();
  if (!(circuit_power_w >= 0.0)) fail("circuit_power_w", "must be non-negative");
  if (!(qos_rate >= 0.0)) fail("qos.rate_bps", "must be non-negative");
  if (!(r_min_km > 0.0)) fail("beam.r_min_km", "must be positive");
}

std::vector<geom::GroundUser> generate_users_ppp(int count, double radius_km,
                                                 std::uint64_t seed) {
  if (!(radius_km > 0.0))
    throw std::invalid_argument("generate_users_ppp: radius must be positive");
  if (count == 0)
    std::cerr << "warning: generating an empty scenario (0 users)\n";

  RngStream rng(seed, kPppStream);
  std::vector<geom::GroundUser> users;
  users.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double r = radius_km * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    users.push_back({i + 1, {r * std::cos(theta), r * std::sin(theta)}});
  }
  return users;
}

std::vector<geom::GroundUser> generate_users_ppp_intensity(double intensity_per_km2,
                                                           double radius_km,
                                                           std::uint64_t seed) {
  if (!(intensity_per_km2 > 0.0))
    throw std::invalid_argument("generate_users_ppp_intensity: intensity must be positive");
  const double mean = intensity_per_km2 * std::numbers::pi * radius_km * radius_km;
  // Poisson count via the exponential-waiting-time construction (no underflow
  // for large means).
  RngStream rng(seed, kPppStream + 1);
  int count = 0;
  double acc = 0.0;
  while (true) {
    acc += -std::log(1.0 - rng.uniform());
    if (acc >= mean) break;
    ++count;
  }
  return generate_users_ppp(count, radius_km, seed);
}

Scenario scenario_from_json(const ordered_json& doc, const std::string& origin_dir) {
  warn_unknown_keys(doc,
                    {"coverage", "link", "beam", "users", "ppp", "power_profile",
                     "qos", "circuit_power_w", "seed", "solar_metadata"},
                    "scenario");

  Scenario s;
  if (!doc.contains("coverage")) fail("coverage", "is missing");
  s.coverage_radius_km = require_number(doc["coverage"], "radius_km", "coverage");

  if (!doc.contains("link")) fail("link", "is missing");
  const ordered_json& lk = doc["link"];
  warn_unknown_keys(lk,
                    {"carrier_freq_hz", "altitude_km", "aperture_efficiency",
                     "antenna_diameter_m", "bandwidth_hz", "noise_figure_db",
                     "rician_k", "sigma_f_sq", "omega", "shadow_sigma_db",
                     "psi_min_rad"},
                    "link");
  s.link.carrier_freq_hz = require_number(lk, "carrier_freq_hz", "link");
  s.link.altitude_km = require_number(lk, "altitude_km", "link");
  s.link.aperture_efficiency = require_number(lk, "aperture_efficiency", "link");
  s.link.antenna_diameter_m = number_or(lk, "antenna_diameter_m", "link", 1.5);
  s.link.bandwidth_hz = require_number(lk, "bandwidth_hz", "link");
  s.link.noise_figure_db = require_number(lk, "noise_figure_db", "link");
  s.link.rician_k = require_number(lk, "rician_k", "link");
  if (lk.contains("omega")) {
    s.link.omega = require_number(lk, "omega", "link");
  } else if (lk.contains("sigma_f_sq")) {
    const double sigma_sq = require_number(lk, "sigma_f_sq", "link");
    if (!(sigma_sq > 0.0)) fail("link.sigma_f_sq", "must be positive");
    s.link.omega = 2.0 * sigma_sq * (1.0 + s.link.rician_k);
  } else {
    fail("link.omega", "is missing (give omega or sigma_f_sq)");
  }
  s.link.shadow_sigma_db = number_or(lk, "shadow_sigma_db", "link", 0.0);
  s.link.psi_min_rad = number_or(lk, "psi_min_rad", "link", deg_to_rad(12.0));

  if (doc.contains("beam"))
    s.r_min_km = number_or(doc["beam"], "r_min_km", "beam", s.r_min_km);

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      fail("seed", "must be an integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }

  if (doc.contains("users")) {
    const ordered_json& arr = doc["users"];
    if (!arr.is_array()) fail("users", "must be an array");
    int next_id = 1;
    for (const auto& item : arr) {
      geom::GroundUser user;
      user.id = item.contains("id") ? item["id"].get<int>() : next_id;
      user.position.x = require_number(item, "x_km", "users[]");
      user.position.y = require_number(item, "y_km", "users[]");
      s.users.push_back(user);
      ++next_id;
    }
  } else if (doc.contains("ppp")) {
    const ordered_json& ppp = doc["ppp"];
    warn_unknown_keys(ppp, {"count", "intensity_per_km2", "mode"}, "ppp");
    if (ppp.contains("count")) {
      s.users = generate_users_ppp(ppp["count"].get<int>(), s.coverage_radius_km,
                                   s.seed);
    } else if (ppp.contains("intensity_per_km2")) {
      s.users = generate_users_ppp_intensity(
          ppp["intensity_per_km2"].get<double>(), s.coverage_radius_km, s.seed);
    } else {
      fail("ppp", "needs 'count' or 'intensity_per_km2'");
    }
  } else {
    fail("users", "is missing (give users or ppp)");
  }

  if (doc.contains("power_profile")) {
    const ordered_json& pp = doc["power_profile"];
    warn_unknown_keys(pp, {"constant_watts", "entries", "file"}, "power_profile");
    if (pp.contains("constant_watts")) {
      s.power_profile =
          PowerProfile::constant(require_number(pp, "constant_watts", "power_profile"));
    } else if (pp.contains("entries")) {
      s.power_profile.entries.clear();
      for (const auto& e : pp["entries"]) {
        if (!e.is_array() || e.size() != 2)
          fail("power_profile.entries", "rows must be [minutes, watts]");
        s.power_profile.entries.push_back(
            {e[0].get<double>(), e[1].get<double>()});
      }
    } else if (pp.contains("file")) {
      const auto path =
          std::filesystem::path(origin_dir) / pp["file"].get<std::string>();
      s.power_profile = load_power_profile(path.string());
    } else {
      fail("power_profile", "needs constant_watts, entries or file");
    }
  }

  if (doc.contains("qos"))
    s.qos_rate = require_number(doc["qos"], "rate_bps", "qos");
  s.circuit_power_w = number_or(doc, "circuit_power_w", "scenario", s.circuit_power_w);
  if (doc.contains("solar_metadata")) s.solar_metadata = doc["solar_metadata"];

  s.validate();
  return s;
}

ordered_json scenario_to_json(const Scenario& s) {
  ordered_json doc;
  doc["coverage"] = {{"radius_km", s.coverage_radius_km}};
  doc["link"] = {{"carrier_freq_hz", s.link.carrier_freq_hz},
                 {"altitude_km", s.link.altitude_km},
                 {"aperture_efficiency", s.link.aperture_efficiency},
                 {"antenna_diameter_m", s.link.antenna_diameter_m},
                 {"bandwidth_hz", s.link.bandwidth_hz},
                 {"noise_figure_db", s.link.noise_figure_db},
                 {"rician_k", s.link.rician_k},
                 {"omega", s.link.omega},
                 {"shadow_sigma_db", s.link.shadow_sigma_db},
                 {"psi_min_rad", s.link.psi_min_rad}};
  doc["beam"] = {{"r_min_km", s.r_min_km}};
  ordered_json users = ordered_json::array();
  for (const auto& user : s.users)
    users.push_back({{"id", user.id},
                     {"x_km", user.position.x},
                     {"y_km", user.position.y}});
  doc["users"] = std::move(users);
  ordered_json entries = ordered_json::array();
  for (const auto& e : s.power_profile.entries)
    entries.push_back({e.minutes, e.watts});
  doc["power_profile"] = {{"entries", std::move(entries)}};
  doc["qos"] = {{"rate_bps", s.qos_rate}};
  doc["circuit_power_w"] = s.circuit_power_w;
  doc["seed"] = s.seed;
  if (!s.solar_metadata.is_null()) doc["solar_metadata"] = s.solar_metadata;
  return doc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file " + path);
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("scenario file " + path + ": " + e.what());
  }
  return scenario_from_json(doc,
                            std::filesystem::path(path).parent_path().string());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << scenario_to_json(scenario).dump(2) << '\n';
}

PowerProfile load_power_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open power profile " + path);
  PowerProfile profile;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("power profile " + path + ":" +
                                  format_int(line_no) + ": expected 'time,watts'");
    std::string time_str = line.substr(0, comma);
    const std::string watts_str = line.substr(comma + 1);
    if (time_str == "time" || time_str == "minutes") continue;  // header row
    double minutes;
    const auto colon = time_str.find(':');
    if (colon != std::string::npos) {
      minutes = 60.0 * std::stod(time_str.substr(0, colon)) +
                std::stod(time_str.substr(colon + 1));
    } else {
      minutes = std::stod(time_str);
    }
    profile.entries.push_back({minutes, std::stod(watts_str)});
  }
  profile.validate();
  return profile;
}

Scenario default_scenario() {
  Scenario s;
  s.coverage_radius_km = 60.0;
  s.link.carrier_freq_hz = 27.5e9;
  s.link.altitude_km = 21.0;
  s.link.aperture_efficiency = 0.9;
  s.link.antenna_diameter_m = 1.5;
  s.link.bandwidth_hz = 200e6;
  s.link.noise_figure_db = 5.0;
  s.link.rician_k = 10.0;
  s.link.omega = 2.0 * (1.0 + s.link.rician_k);  // sigma_f^2 = 1
  s.link.shadow_sigma_db = 0.0;
  s.link.psi_min_rad = deg_to_rad(12.0);
  s.r_min_km = 5.464;
  s.qos_rate = 2e6;
  s.circuit_power_w = 1.5;
  s.power_profile = PowerProfile::constant(150.0);
  s.seed = 7;
  s.users = generate_users_ppp(100, s.coverage_radius_km, s.seed);
  s.solar_metadata = {{"site", "Manchester"},
                      {"longitude", "2d14m2.04sE"},
                      {"latitude", "53d28m0.48sN"},
                      {"summer_solstice_jd", 2460848},
                      {"winter_solstice_jd", 2461031},
                      {"extinction_ss", 0.465},
                      {"extinction_ws", 0.29},
                      {"wingspan_m", 35},
                      {"wing_aspect_ratio", 30},
                      {"wing_area_m2", 143},
                      {"weight_kg", 165},
                      {"T_n", 870},
                      {"k_B", 1.38e-23},
                      {"upsilon", 0.1}};
  return s;
}

bool operator==(const PowerProfile::Entry& a, const PowerProfile::Entry& b) {
  return a.minutes == b.minutes && a.watts == b.watts;
}

bool operator==(const PowerProfile& a, const PowerProfile& b) {
  return a.entries == b.entries;
}

bool operator==(const Scenario& a, const Scenario& b) {
  auto users_equal = [&]() {
    if (a.users.size() != b.users.size()) return false;
    for (std::size_t i = 0; i < a.users.size(); ++i) {
      if (a.users[i].id != b.users[i].id ||
          !(a.users[i].position == b.users[i].position))
        return false;
    }
    return true;
  };
  return a.coverage_radius_km == b.coverage_radius_km &&
         a.link.carrier_freq_hz == b.link.carrier_freq_hz &&
         a.link.altitude_km == b.link.altitude_km &&
         a.link.aperture_efficiency == b.link.aperture_efficiency &&
         a.link.antenna_diameter_m == b.link.antenna_diameter_m &&
         a.link.bandwidth_hz == b.link.bandwidth_hz &&
         a.link.noise_figure_db == b.link.noise_figure_db &&
         a.link.rician_k == b.link.rician_k && a.link.omega == b.link.omega &&
         a.link.shadow_sigma_db == b.link.shadow_sigma_db &&
         a.link.psi_min_rad == b.link.psi_min_rad && users_equal() &&
         a.power_profile == b.power_profile &&
         a.circuit_power_w == b.circuit_power_w && a.qos_rate == b.qos_rate &&
         a.r_min_km == b.r_min_km && a.seed == b.seed;
}

}  // namespace hapsim
