#pragma once

#include "hapsim/geometry.hpp"
#include "hapsim/rng.hpp"
#include "hapsim/units.hpp"

namespace hapsim::link {

// Physical-layer parameters. Geometry stays in km; wavelengths and antenna
// dimensions in meters; dB/dBm only at the conversion helpers.
struct LinkParams {
  double carrier_freq_hz = 27.5e9;
  double altitude_km = 21.0;
  double aperture_efficiency = 0.9;  // eta, in (0, 1]
  double antenna_diameter_m = 1.5;
  double bandwidth_hz = 200e6;
  double noise_figure_db = 5.0;
  double rician_k = 10.0;       // LoS-to-diffuse power ratio, >= 0
  double omega = 22.0;          // E[|g|^2] = nu^2 + 2 sigma_f^2, > 0
  double shadow_sigma_db = 0.0;
  double psi_min_rad = deg_to_rad(12.0);

  double wavelength_m() const { return kSpeedOfLight / carrier_freq_hz; }
  double noise_power_w() const;
  void validate() const;  // throws std::invalid_argument naming the field
};

// One realization of the composite channel; all quantities linear.
struct ChannelRealization {
  double g_mag = 1.0;     // |g|
  double gain = 1.0;      // G
  double pathloss = 1.0;  // L
  double h_mag_sq = 1.0;  // |h|^2 = |g|^2 G / L
};

ChannelRealization make_channel(double g_mag, double gain, double pathloss);

// Peak boresight gain of a beam with the given half-power width (degrees).
double peak_gain(double hpbw_deg, double eta);

geom::SpotBeam make_spot_beam(geom::Vec2 center, double radius_km,
                              double altitude_km, double eta);

// Directivity toward a ground position: quadratic dB rolloff with the
// departure angle, -3 dB at half the beamwidth.
double user_gain(geom::Vec2 user_pos, const geom::SpotBeam& beam,
                 double altitude_km, double eta);

struct Elevation {
  double psi_rad = 0.0;
  double distance_km = 0.0;
  bool line_of_sight = true;  // false below the minimum elevation angle
};

Elevation elevation_and_distance(geom::Vec2 user_pos, double altitude_km,
                                 double psi_min_rad);

// Close-in free-space path loss in dB; shadow_db is the caller-supplied
// shadowing sample (0 in deterministic mode).
double path_loss_db(double altitude_km, double psi_rad, double wavelength_m,
                    double shadow_db = 0.0);

// One draw of the Rician fading power |g|^2 with E[|g|^2] = omega.
double sample_rician_power(double rician_k, double omega, RngStream& rng);

double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

// Inverse effective receive SNR: A = L / (rho |g|^2 G) = 1 / (rho |h|^2).
double a_coefficient(const ChannelRealization& ch, double transmit_snr);

}  // namespace hapsim::link
