#pragma once

#include <span>
#include <utility>
#include <vector>

namespace hapsim::noma {

// One user group served by one spot beam. Users are ordered weakest first,
// i.e. by decreasing inverse effective SNR A_l = L/(rho |g|^2 G); ties break
// on the lower user id. All users share the group's QoS rate target.
struct OrderedGroup {
  int beam_index = 0;
  std::vector<int> user_ids;  // weakest -> strongest
  std::vector<double> a;      // A_l, non-increasing
  double bandwidth_hz = 1.0;
  double transmit_snr = 1.0;  // rho = P_t / sigma^2
  double qos_rate = 0.0;      // Omega_m, bits/s

  int size() const { return static_cast<int>(a.size()); }
  double omega_prime() const { return qos_rate / bandwidth_hz; }
  void validate() const;
};

// Builds an OrderedGroup from unordered (user id, A) pairs.
OrderedGroup make_ordered_group(int beam_index,
                                std::vector<std::pair<int, double>> id_and_a,
                                double bandwidth_hz, double transmit_snr,
                                double qos_rate);

// Result of the closed-form power split. `alphas` follows the group order.
// In the feasible branch every user meets the QoS target, the weakest K-1
// exactly, and the strongest user absorbs the remaining budget. Otherwise
// `critical_user` is the position u of the first servable user: users above
// it hold their exact QoS minima, u holds the leftover (below target), and
// weaker users get zero. The full budget is spent in both branches.
struct PowerAllocation {
  std::vector<double> alphas;
  bool feasible = true;
  int critical_user = -1;  // position in group order; -1 when feasible
  double sum_rate = 0.0;   // bits/s, closed form
};

// SINR of user l (0-based position) under the SIC order: interference from
// stronger users only.
double sinr(const OrderedGroup& group, std::span<const double> alphas, int l);

// Rate at which user l decodes user j's message (j <= l), bits/s.
double cross_rate(const OrderedGroup& group, std::span<const double> alphas,
                  int j, int l);

double user_rate(const OrderedGroup& group, std::span<const double> alphas, int l);

PowerAllocation allocate_power(const OrderedGroup& group);

// Orthogonal baseline: every user gets bandwidth B/K and power P_t/K, with
// the noise floor taken over its own subband. Returns per-user rates in
// group order.
std::vector<double> oma_baseline(const OrderedGroup& group);

struct RateSummary {
  double sum_rate = 0.0;     // sum over groups of the per-slot group rate
  double tdm_average = 0.0;  // sum_rate / M, the per-slot rotation average
};

RateSummary sum_rate(std::span<const OrderedGroup> groups,
                     std::span<const std::vector<double>> alphas_per_group);

struct EfficiencyContext {
  double transmit_power_w = 1.0;
  double circuit_power_w = 1.0;
  double bandwidth_hz = 1.0;
  double psi_min_rad = 0.2;
  double altitude_km = 21.0;
};

struct Metrics {
  std::vector<int> user_ids;         // flattened group order
  std::vector<double> ee_per_user;   // bits/J; NaN where undefined
  double mean_ee = 0.0;              // (KM)^-1 sum over defined entries
  double spectral_efficiency = 0.0;  // R / B
  std::vector<double> ase_per_beam;  // R_m / (B pi r_m^2)
  double ase_system = 0.0;           // R tan^2(psi_min) / (B pi H^2)
  double jain_fairness = 0.0;        // (sum r)^2 / (K sum r^2)
};

Metrics efficiency_metrics(std::span<const OrderedGroup> groups,
                           std::span<const std::vector<double>> alphas_per_group,
                           std::span<const double> beam_radius_km,
                           const EfficiencyContext& ctx);

}  // namespace hapsim::noma
