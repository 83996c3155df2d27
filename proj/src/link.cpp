#include "hapsim/link.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hapsim::link {

namespace {
void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}
}  // namespace

void LinkParams::validate() const {
  require(carrier_freq_hz > 0.0, "link.carrier_freq_hz must be positive");
  require(altitude_km > 0.0, "link.altitude_km must be positive");
  require(aperture_efficiency > 0.0 && aperture_efficiency <= 1.0,
          "link.aperture_efficiency must be in (0, 1]");
  require(antenna_diameter_m > 0.0, "link.antenna_diameter_m must be positive");
  require(bandwidth_hz > 0.0, "link.bandwidth_hz must be positive");
  require(rician_k >= 0.0, "link.rician_k must be non-negative");
  require(omega > 0.0, "link.omega must be positive");
  require(shadow_sigma_db >= 0.0, "link.shadow_sigma_db must be non-negative");
  require(psi_min_rad > 0.0 && psi_min_rad <= std::numbers::pi / 2.0,
          "link.psi_min_rad must be in (0, pi/2]");
}

double LinkParams::noise_power_w() const {
  return dbm_to_watts(noise_power_dbm(bandwidth_hz, noise_figure_db));
}

ChannelRealization make_channel(double g_mag, double gain, double pathloss) {
  if (!(g_mag > 0.0) || !(gain > 0.0) || !(pathloss > 0.0))
    throw std::invalid_argument("make_channel: all components must be positive");
  return {g_mag, gain, pathloss, g_mag * g_mag * gain / pathloss};
}

double peak_gain(double hpbw_deg, double eta) {
  if (!(hpbw_deg > 0.0)) throw std::invalid_argument("peak_gain: beamwidth must be positive");
  const double ratio = 70.0 * std::numbers::pi / hpbw_deg;
  return eta * ratio * ratio;
}

geom::SpotBeam make_spot_beam(geom::Vec2 center, double radius_km,
                              double altitude_km, double eta) {
  geom::SpotBeam beam;
  beam.footprint = {center, radius_km};
  beam.hpbw_deg = geom::hpbw_from_radius(radius_km, altitude_km);
  beam.peak_gain = peak_gain(beam.hpbw_deg, eta);
  return beam;
}

double user_gain(geom::Vec2 user_pos, const geom::SpotBeam& beam,
                 double altitude_km, double eta) {
  if (!(altitude_km > 0.0)) throw std::invalid_argument("user_gain: altitude must be positive");
  const double offset_km = geom::distance(user_pos, beam.footprint.center);
  const double theta_u_deg = rad_to_deg(std::atan(offset_km / altitude_km));
  // [G]dB = [G0]dB - 12 (G0/eta) (theta_u / 70pi)^2; with G0 = eta (70pi/theta3dB)^2
  // the penalty collapses to -12 (theta_u / theta3dB)^2 dB.
  const double penalty_db = 12.0 * (beam.peak_gain / eta) *
                            std::pow(theta_u_deg / (70.0 * std::numbers::pi), 2);
  return db_to_linear(linear_to_db(beam.peak_gain) - penalty_db);
}

Elevation elevation_and_distance(geom::Vec2 user_pos, double altitude_km,
                                 double psi_min_rad) {
  if (!(altitude_km > 0.0))
    throw std::invalid_argument("elevation_and_distance: altitude must be positive");
  const double ground_km = geom::norm(user_pos);
  const double psi = ground_km == 0.0 ? std::numbers::pi / 2.0
                                      : std::atan(altitude_km / ground_km);
  Elevation out;
  out.psi_rad = psi;
  out.distance_km = std::hypot(altitude_km, ground_km);  // = H / sin(psi)
  out.line_of_sight = psi >= psi_min_rad;
  return out;
}

double path_loss_db(double altitude_km, double psi_rad, double wavelength_m,
                    double shadow_db) {
  if (!(psi_rad > 0.0) || psi_rad > std::numbers::pi / 2.0)
    throw std::invalid_argument("path_loss_db: elevation must be in (0, pi/2]");
  if (!(wavelength_m > 0.0))
    throw std::invalid_argument("path_loss_db: wavelength must be positive");
  const double h_m = altitude_km * 1e3;
  const double s = std::sin(psi_rad);
  const double ratio = 4.0 * std::numbers::pi * h_m / (wavelength_m * s);
  return 20.0 * std::log10(ratio) + shadow_db;
}

double sample_rician_power(double rician_k, double omega, RngStream& rng) {
  if (!(rician_k >= 0.0)) throw std::invalid_argument("sample_rician_power: K must be >= 0");
  if (!(omega > 0.0)) throw std::invalid_argument("sample_rician_power: omega must be positive");
  // nu^2 = K omega / (1+K), per-component variance sigma_f^2 = omega / (2(1+K)).
  const double nu = std::sqrt(rician_k * omega / (1.0 + rician_k));
  const double sigma = std::sqrt(omega / (2.0 * (1.0 + rician_k)));
  const double mean_component = nu / std::numbers::sqrt2;
  const double re = mean_component + sigma * rng.normal();
  const double im = mean_component + sigma * rng.normal();
  return re * re + im * im;
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("noise_power_dbm: bandwidth must be positive");
  return -174.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double a_coefficient(const ChannelRealization& ch, double transmit_snr) {
  if (!(transmit_snr > 0.0))
    throw std::invalid_argument("a_coefficient: transmit SNR must be positive");
  return 1.0 / (transmit_snr * ch.h_mag_sq);
}

}  // namespace hapsim::link
