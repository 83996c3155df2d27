#include "hapsim/outage.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "hapsim/link.hpp"
#include "hapsim/rng.hpp"

namespace hapsim::outage {

namespace {

// 1 - Q1(a, b) as the CDF of a noncentral chi-square with 2 degrees of
// freedom: sum_j Poisson(j; a^2/2) * P(Gamma(j+1) <= b^2/2). All terms are
// positive, so small outage probabilities come out with full absolute
// accuracy. The Poisson tail mass times the current (decreasing) gamma factor
// bounds the truncation error; we stop below 1e-17.
double marcum_q1_complement(double a, double b) {
  const double lambda = 0.5 * a * a;
  const double y = 0.5 * b * b;

  if (b == 0.0) return 0.0;

  // Far LoS-dominant regime: the mixture needs ~lambda terms and the leading
  // weight underflows; switch to the large-a normal limit of the Rician.
  if (lambda > 600.0) {
    return 0.5 * std::erfc((a - b) / std::sqrt(2.0));
  }

  double gamma_cdf = -std::expm1(-y);        // P(Gamma(1) <= y)
  double gamma_term = std::exp(-y);          // e^-y y^j / j!
  double weight = std::exp(-lambda);         // Poisson(j; lambda)
  double used_mass = weight;
  double sum = weight * gamma_cdf;

  for (int j = 1; j < 100000; ++j) {
    weight *= lambda / j;
    gamma_term *= y / j;
    gamma_cdf -= gamma_term;
    if (gamma_cdf < 0.0) gamma_cdf = 0.0;  // guard the last ulp
    sum += weight * gamma_cdf;
    used_mass += weight;
    const double tail_bound = (1.0 - used_mass) * gamma_cdf;
    if (tail_bound < 1e-17 && j > lambda) break;
  }
  return sum < 1.0 ? sum : 1.0;
}

}  // namespace

double marcum_q1(double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0))
    throw std::invalid_argument("marcum_q1: arguments must be non-negative");
  return 1.0 - marcum_q1_complement(a, b);
}

double rician_power_cdf(double y, double rician_k, double omega) {
  if (!(rician_k >= 0.0) || !(omega > 0.0))
    throw std::invalid_argument("rician_power_cdf: invalid fading parameters");
  if (y <= 0.0) return 0.0;
  const double xi = (rician_k + 1.0) / omega;
  return marcum_q1_complement(std::sqrt(2.0 * rician_k), std::sqrt(2.0 * xi * y));
}

double rate_threshold(double target_rate, double bandwidth_hz) {
  if (!(bandwidth_hz > 0.0))
    throw std::invalid_argument("rate_threshold: bandwidth must be positive");
  if (!(target_rate >= 0.0))
    throw std::invalid_argument("rate_threshold: target rate must be non-negative");
  return std::exp2(target_rate / bandwidth_hz) - 1.0;
}

std::optional<double> psi_max(std::span<const double> alphas,
                              std::span<const double> phis, double transmit_snr,
                              int l) {
  if (l < 0 || l >= static_cast<int>(alphas.size()) || phis.size() != alphas.size())
    throw std::invalid_argument("psi_max: index out of range");
  if (!(transmit_snr > 0.0))
    throw std::invalid_argument("psi_max: transmit SNR must be positive");

  double worst = 0.0;
  for (int j = 0; j <= l; ++j) {
    if (phis[j] == 0.0) continue;  // zero target decodes at any gain
    double interference = 0.0;
    for (int k = j + 1; k < static_cast<int>(alphas.size()); ++k)
      interference += alphas[k];
    const double denom = alphas[j] - phis[j] * interference;
    if (denom <= 0.0) return std::nullopt;
    worst = std::max(worst, phis[j] / (transmit_snr * denom));
  }
  return worst;
}

double noma_outage_closed(double pathloss, double gain, double rician_k,
                          double omega, std::optional<double> psi) {
  if (!psi) return 1.0;
  if (!(pathloss > 0.0) || !(gain > 0.0))
    throw std::invalid_argument("noma_outage_closed: pathloss/gain must be positive");
  return rician_power_cdf(*psi * pathloss / gain, rician_k, omega);
}

double oma_psi(double target_rate, double bandwidth_hz, int group_size,
               double transmit_snr) {
  if (group_size < 1) throw std::invalid_argument("oma_psi: group size must be >= 1");
  const double phi = rate_threshold(target_rate * group_size, bandwidth_hz);
  // rho_oma = K rho (subband noise), psi = phi K / rho_oma = phi / rho.
  return phi / transmit_snr;
}

double oma_outage_closed(double pathloss, double gain, double rician_k,
                         double omega, double psi_oma) {
  return noma_outage_closed(pathloss, gain, rician_k, omega, psi_oma);
}

double monte_carlo_outage(double pathloss, double gain, double rician_k,
                          double omega, std::optional<double> psi,
                          std::int64_t n_samples, std::uint64_t seed,
                          int partitions) {
  if (n_samples < 1) throw std::invalid_argument("monte_carlo_outage: need n_samples >= 1");
  if (partitions < 1) throw std::invalid_argument("monte_carlo_outage: need partitions >= 1");
  if (!psi) return 1.0;

  const double power_threshold = *psi * pathloss / gain;  // event on |g|^2
  const std::int64_t base = n_samples / partitions;
  const std::int64_t extra = n_samples % partitions;

  std::int64_t hits = 0;
  for (int p = 0; p < partitions; ++p) {
    RngStream stream(seed, 0x4D43u + static_cast<std::uint64_t>(p));
    const std::int64_t quota = base + (p < extra ? 1 : 0);
    for (std::int64_t i = 0; i < quota; ++i) {
      if (link::sample_rician_power(rician_k, omega, stream) <= power_threshold)
        ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(n_samples);
}

}  // namespace hapsim::outage
