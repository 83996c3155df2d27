#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace hapsim::outage {

// First-order Marcum Q function Q1(a, b), absolute error <= 1e-10 in the
// supported range. Implemented as the noncentral-chi-square Poisson mixture
// with a certified tail bound; no external special-function dependency.
double marcum_q1(double a, double b);

// P(|g|^2 <= y) for Rician fading with shape k and mean power omega.
double rician_power_cdf(double y, double rician_k, double omega);

// SINR threshold for decoding a message sent at target_rate over bandwidth.
double rate_threshold(double target_rate, double bandwidth_hz);

// Largest detection threshold over the SIC chain 0..l. nullopt means certain
// outage: some message in the chain is undecodable at any channel gain
// (threshold denominator <= 0, e.g. a zero-power user with a positive target).
std::optional<double> psi_max(std::span<const double> alphas,
                              std::span<const double> phis, double transmit_snr,
                              int l);

// Closed-form outage probability of one user given its deterministic link
// geometry (linear pathloss and gain) and the fading parameters.
double noma_outage_closed(double pathloss, double gain, double rician_k,
                          double omega, std::optional<double> psi);

// Detection threshold for the orthogonal baseline (band B/K per user, noise
// over the subband) and its outage probability.
double oma_psi(double target_rate, double bandwidth_hz, int group_size,
               double transmit_snr);
double oma_outage_closed(double pathloss, double gain, double rician_k,
                         double omega, double psi_oma);

// Empirical outage frequency over n_samples independent fading draws.
// Deterministic for a fixed (seed, n_samples, partitions) triple; partitions
// split the sample budget across independent seed-derived streams, so the
// same triple gives the same answer no matter how the work is scheduled.
double monte_carlo_outage(double pathloss, double gain, double rician_k,
                          double omega, std::optional<double> psi,
                          std::int64_t n_samples, std::uint64_t seed,
                          int partitions = 1);

}  // namespace hapsim::outage
