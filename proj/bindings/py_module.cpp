#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "hapsim/geometry.hpp"
#include "hapsim/link.hpp"
#include "hapsim/noma.hpp"
#include "hapsim/optimizer.hpp"
#include "hapsim/outage.hpp"
#include "hapsim/rng.hpp"
#include "hapsim/scenario.hpp"
#include "hapsim/version.hpp"

namespace py = pybind11;
using namespace hapsim;

namespace {

using Point = std::pair<double, double>;

std::vector<geom::Vec2> to_vec2(const std::vector<Point>& pts) {
  std::vector<geom::Vec2> out;
  out.reserve(pts.size());
  for (const auto& [x, y] : pts) out.push_back({x, y});
  return out;
}

py::dict circle_dict(const geom::Circle& c) {
  py::dict d;
  d["center"] = Point{c.center.x, c.center.y};
  d["radius"] = c.radius;
  return d;
}

py::dict allocation_dict(const noma::PowerAllocation& a) {
  py::dict d;
  d["alphas"] = a.alphas;
  d["feasible"] = a.feasible;
  d["critical_user"] = a.critical_user;
  d["sum_rate"] = a.sum_rate;
  return d;
}

py::dict solution_dict(const opt::Solution& sol) {
  py::dict d;
  d["beam_count"] = sol.beam_count;
  d["grouping_radius_km"] = sol.grouping_radius_km;
  d["sum_rate_bps"] = sol.sum_rate;
  d["tdm_average_bps"] = sol.tdm_average_rate;
  d["transmit_power_w"] = sol.transmit_power_w;
  d["per_user_rates_bps"] = sol.per_user_rates;
  py::list beams;
  for (const auto& beam : sol.beams) {
    py::dict b;
    b["center"] = Point{beam.footprint.center.x, beam.footprint.center.y};
    b["radius_km"] = beam.footprint.radius;
    b["hpbw_deg"] = beam.hpbw_deg;
    b["peak_gain"] = beam.peak_gain;
    beams.append(b);
  }
  d["beams"] = beams;
  d["association"] = sol.association.beam_of;
  py::list allocations;
  for (const auto& a : sol.allocations) allocations.append(allocation_dict(a));
  d["allocations"] = allocations;
  d["jain_fairness"] = sol.metrics.jain_fairness;
  d["mean_ee"] = sol.metrics.mean_ee;
  return d;
}

opt::OptimizerConfig config_from_kwargs(const Scenario& scenario,
                                        const std::string& mec, double qos,
                                        double step, std::int64_t seed) {
  opt::OptimizerConfig config;
  config.mec = opt::mec_method_from_string(mec);
  config.qos_rate = qos;
  config.radius_step_km = step;
  config.seed = seed >= 0 ? static_cast<std::uint64_t>(seed) : scenario.seed;
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spot-beam NOMA coverage planning: geometry, link budget, power "
            "allocation, outage and the end-to-end optimizer";
  m.attr("__version__") = kVersion;

  m.def("welzl_mec",
        [](const std::vector<Point>& pts) {
          return circle_dict(geom::welzl_mec(to_vec2(pts)));
        },
        py::arg("points"), "Exact minimum enclosing circle");

  m.def("heuristic_mec",
        [](const std::vector<Point>& pts) {
          return circle_dict(geom::heuristic_mec(to_vec2(pts)));
        },
        py::arg("points"), "Centroid/farthest-point enclosing circle");

  m.def("gdc_cover",
        [](const std::vector<Point>& pts, double radius) {
          std::vector<geom::GroundUser> users;
          users.reserve(pts.size());
          for (std::size_t i = 0; i < pts.size(); ++i)
            users.push_back({static_cast<int>(i) + 1,
                             {pts[i].first, pts[i].second}});
          const auto cover = geom::gdc_cover(users, radius);
          std::vector<Point> centers;
          for (const auto& c : cover.centers) centers.emplace_back(c.x, c.y);
          return py::make_tuple(cover.count(), centers);
        },
        py::arg("points"), py::arg("radius_km"),
        "Greedy fixed-radius disk cover; returns (M, centers)");

  m.def("hpbw_from_radius", &geom::hpbw_from_radius, py::arg("radius_km"),
        py::arg("altitude_km"));
  m.def("radius_from_hpbw", &geom::radius_from_hpbw, py::arg("hpbw_deg"),
        py::arg("altitude_km"));

  m.def("peak_gain", &link::peak_gain, py::arg("hpbw_deg"), py::arg("eta"));
  m.def("path_loss_db", &link::path_loss_db, py::arg("altitude_km"),
        py::arg("psi_rad"), py::arg("wavelength_m"), py::arg("shadow_db") = 0.0);
  m.def("noise_power_dbm", &link::noise_power_dbm, py::arg("bandwidth_hz"),
        py::arg("noise_figure_db"));

  m.def("rician_power_samples",
        [](double rician_k, double omega, int n, std::uint64_t seed) {
          RngStream rng(seed);
          std::vector<double> out(n);
          for (auto& v : out) v = link::sample_rician_power(rician_k, omega, rng);
          return out;
        },
        py::arg("rician_k"), py::arg("omega"), py::arg("n"), py::arg("seed") = 1);

  m.def("marcum_q1", &outage::marcum_q1, py::arg("a"), py::arg("b"));
  m.def("noma_outage_closed",
        [](double pathloss, double gain, double rician_k, double omega,
           std::optional<double> psi) {
          return outage::noma_outage_closed(pathloss, gain, rician_k, omega, psi);
        },
        py::arg("pathloss"), py::arg("gain"), py::arg("rician_k"),
        py::arg("omega"), py::arg("psi"));
  m.def("monte_carlo_outage",
        [](double pathloss, double gain, double rician_k, double omega,
           std::optional<double> psi, std::int64_t n, std::uint64_t seed,
           int partitions) {
          return outage::monte_carlo_outage(pathloss, gain, rician_k, omega,
                                            psi, n, seed, partitions);
        },
        py::arg("pathloss"), py::arg("gain"), py::arg("rician_k"),
        py::arg("omega"), py::arg("psi"), py::arg("n"), py::arg("seed") = 1,
        py::arg("partitions") = 1);

  m.def("allocate_power",
        [](const std::vector<double>& a, double bandwidth_hz, double transmit_snr,
           double qos_rate) {
          std::vector<std::pair<int, double>> ids_a;
          for (std::size_t l = 0; l < a.size(); ++l)
            ids_a.emplace_back(static_cast<int>(l) + 1, a[l]);
          const auto group = noma::make_ordered_group(0, std::move(ids_a),
                                                      bandwidth_hz, transmit_snr,
                                                      qos_rate);
          return allocation_dict(noma::allocate_power(group));
        },
        py::arg("a_coefficients"), py::arg("bandwidth_hz") = 1.0,
        py::arg("transmit_snr") = 1.0, py::arg("qos_rate") = 0.0,
        "Closed-form NOMA power split for one ordered group");

  m.def("oma_baseline",
        [](const std::vector<double>& a, double bandwidth_hz, double transmit_snr) {
          std::vector<std::pair<int, double>> ids_a;
          for (std::size_t l = 0; l < a.size(); ++l)
            ids_a.emplace_back(static_cast<int>(l) + 1, a[l]);
          const auto group = noma::make_ordered_group(0, std::move(ids_a),
                                                      bandwidth_hz, transmit_snr,
                                                      0.0);
          return noma::oma_baseline(group);
        },
        py::arg("a_coefficients"), py::arg("bandwidth_hz") = 1.0,
        py::arg("transmit_snr") = 1.0);

  m.def("generate_users_ppp",
        [](int count, double radius_km, std::uint64_t seed) {
          std::vector<Point> out;
          for (const auto& user : generate_users_ppp(count, radius_km, seed))
            out.emplace_back(user.position.x, user.position.y);
          return out;
        },
        py::arg("count"), py::arg("radius_km"), py::arg("seed") = 1);

  m.def("optimize",
        [](const std::string& scenario_path, const std::string& mec, double qos,
           double step, std::int64_t seed) {
          const Scenario scenario = scenario_path == "default"
                                        ? default_scenario()
                                        : load_scenario(scenario_path);
          const auto config = config_from_kwargs(scenario, mec, qos, step, seed);
          return solution_dict(opt::optimize(scenario, config));
        },
        py::arg("scenario") = "default", py::arg("mec") = "welzl",
        py::arg("qos") = -1.0, py::arg("step") = 1.0, py::arg("seed") = -1,
        "Run the full grouping/association/beam/power pipeline");

  m.def("evaluate_radius",
        [](const std::string& scenario_path, double radius_km,
           const std::string& mec, double qos, std::int64_t seed) {
          const Scenario scenario = scenario_path == "default"
                                        ? default_scenario()
                                        : load_scenario(scenario_path);
          const auto config = config_from_kwargs(scenario, mec, qos, 1.0, seed);
          return solution_dict(opt::evaluate_radius(scenario, radius_km, config));
        },
        py::arg("scenario") = "default", py::arg("radius_km") = 20.0,
        py::arg("mec") = "welzl", py::arg("qos") = -1.0, py::arg("seed") = -1);
}
