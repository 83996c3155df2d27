#include "hapsim/noma.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hapsim::noma {

namespace {

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

double interference_after(std::span<const double> alphas, int j) {
  double sum = 0.0;
  for (int k = j + 1; k < static_cast<int>(alphas.size()); ++k) sum += alphas[k];
  return sum;
}

}  // namespace

void OrderedGroup::validate() const {
  if (a.empty()) throw std::invalid_argument("group: no users");
  if (user_ids.size() != a.size())
    throw std::invalid_argument("group: ids/coefficients size mismatch");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("group: bandwidth must be positive");
  if (!(transmit_snr > 0.0)) throw std::invalid_argument("group: transmit SNR must be positive");
  if (!(qos_rate >= 0.0)) throw std::invalid_argument("group: QoS rate must be non-negative");
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (!(a[l] > 0.0)) throw std::invalid_argument("group: A coefficients must be positive");
    if (l > 0 && a[l] > a[l - 1])
      throw std::invalid_argument("group: A coefficients must be non-increasing");
  }
}

OrderedGroup make_ordered_group(int beam_index,
                                std::vector<std::pair<int, double>> id_and_a,
                                double bandwidth_hz, double transmit_snr,
                                double qos_rate) {
  std::sort(id_and_a.begin(), id_and_a.end(), [](const auto& x, const auto& y) {
    if (x.second != y.second) return x.second > y.second;
    return x.first < y.first;
  });
  OrderedGroup group;
  group.beam_index = beam_index;
  group.bandwidth_hz = bandwidth_hz;
  group.transmit_snr = transmit_snr;
  group.qos_rate = qos_rate;
  group.user_ids.reserve(id_and_a.size());
  group.a.reserve(id_and_a.size());
  for (const auto& [id, coeff] : id_and_a) {
    group.user_ids.push_back(id);
    group.a.push_back(coeff);
  }
  group.validate();
  return group;
}

double sinr(const OrderedGroup& group, std::span<const double> alphas, int l) {
  if (l < 0 || l >= group.size()) throw std::invalid_argument("sinr: user index out of range");
  return alphas[l] / (interference_after(alphas, l) + group.a[l]);
}

double cross_rate(const OrderedGroup& group, std::span<const double> alphas,
                  int j, int l) {
  if (j < 0 || l >= group.size() || j > l)
    throw std::invalid_argument("cross_rate: requires 0 <= j <= l < K");
  const double gamma = alphas[j] / (interference_after(alphas, j) + group.a[l]);
  return group.bandwidth_hz * log2_1p(gamma);
}

double user_rate(const OrderedGroup& group, std::span<const double> alphas, int l) {
  return group.bandwidth_hz * log2_1p(sinr(group, alphas, l));
}

PowerAllocation allocate_power(const OrderedGroup& group) {
  group.validate();
  const int k = group.size();
  const double omega_prime = group.omega_prime();
  const double pow2 = std::exp2(omega_prime);
  const double phi = pow2 - 1.0;  // per-user SINR floor

  // Minimum coefficients meeting the target, from the strongest user up.
  // tail[l] is the total power the users l..K-1 need at their minima.
  std::vector<double> min_alpha(k, 0.0);
  std::vector<double> tail(k + 1, 0.0);
  for (int l = k - 1; l >= 0; --l) {
    min_alpha[l] = phi * (tail[l + 1] + group.a[l]);
    tail[l] = tail[l + 1] + min_alpha[l];
  }

  PowerAllocation out;
  out.alphas.assign(k, 0.0);

  if (tail[0] <= 1.0) {
    // Everyone is servable. Spend the whole budget: the weakest K-1 users sit
    // exactly at the target, the strongest absorbs whatever survives the
    // interference bookkeeping.
    out.feasible = true;
    double budget = 1.0;
    for (int l = 0; l + 1 < k; ++l) {
      const double next = (budget - phi * group.a[l]) / pow2;
      out.alphas[l] = budget - next;
      budget = next;
    }
    out.alphas[k - 1] = std::max(budget, 0.0);
    out.sum_rate = (k - 1) * group.qos_rate +
                   group.bandwidth_hz * log2_1p(out.alphas[k - 1] / group.a[k - 1]);
  } else {
    // Not everyone fits. Serve the longest affordable strong tail at its
    // exact minima and hand the leftover to the first user that cannot reach
    // the target.
    out.feasible = false;
    int u = k - 1;
    while (u > 0 && tail[u] <= 1.0) --u;
    assert(tail[u] > 1.0 && tail[u + 1] <= 1.0);
    const double delta = 1.0 - tail[u + 1];
    assert(delta >= 0.0);
    out.critical_user = u;
    for (int l = u + 1; l < k; ++l) out.alphas[l] = min_alpha[l];
    out.alphas[u] = delta;
    out.sum_rate = (k - 1 - u) * group.qos_rate +
                   group.bandwidth_hz * log2_1p(delta / (tail[u + 1] + group.a[u]));
  }
  return out;
}

std::vector<double> oma_baseline(const OrderedGroup& group) {
  group.validate();
  const int k = group.size();
  // Per-user band B/K with the noise floor over B/K: the per-user transmit
  // SNR becomes K*rho, power P_t/K, so the received SINR is rho |h|^2 = 1/A.
  std::vector<double> rates(k);
  for (int l = 0; l < k; ++l)
    rates[l] = group.bandwidth_hz / k * log2_1p(1.0 / group.a[l]);
  return rates;
}

RateSummary sum_rate(std::span<const OrderedGroup> groups,
                     std::span<const std::vector<double>> alphas_per_group) {
  if (groups.size() != alphas_per_group.size())
    throw std::invalid_argument("sum_rate: group/allocation size mismatch");
  RateSummary out;
  for (std::size_t m = 0; m < groups.size(); ++m)
    for (int l = 0; l < groups[m].size(); ++l)
      out.sum_rate += user_rate(groups[m], alphas_per_group[m], l);
  out.tdm_average = groups.empty() ? 0.0 : out.sum_rate / static_cast<double>(groups.size());
  return out;
}

Metrics efficiency_metrics(std::span<const OrderedGroup> groups,
                           std::span<const std::vector<double>> alphas_per_group,
                           std::span<const double> beam_radius_km,
                           const EfficiencyContext& ctx) {
  if (groups.size() != alphas_per_group.size() || groups.size() != beam_radius_km.size())
    throw std::invalid_argument("efficiency_metrics: input span size mismatch");

  Metrics metrics;
  const double m_count = static_cast<double>(groups.size());
  double total_rate = 0.0;
  double rate_sum = 0.0, rate_sq_sum = 0.0;
  double ee_sum = 0.0;
  int user_count = 0;

  for (std::size_t m = 0; m < groups.size(); ++m) {
    const OrderedGroup& group = groups[m];
    double group_rate = 0.0;
    for (int l = 0; l < group.size(); ++l) {
      const double rate = user_rate(group, alphas_per_group[m], l);
      const double drain = alphas_per_group[m][l] * ctx.transmit_power_w + ctx.circuit_power_w;
      const double ee = drain > 0.0 ? rate / drain
                                    : std::numeric_limits<double>::quiet_NaN();
      metrics.user_ids.push_back(group.user_ids[l]);
      metrics.ee_per_user.push_back(ee);
      if (!std::isnan(ee)) ee_sum += ee;
      group_rate += rate;
      rate_sum += rate;
      rate_sq_sum += rate * rate;
      ++user_count;
    }
    total_rate += group_rate;
    const double r_km = beam_radius_km[m];
    metrics.ase_per_beam.push_back(
        group_rate / (ctx.bandwidth_hz * std::numbers::pi * r_km * r_km));
  }

  metrics.mean_ee = user_count > 0 ? ee_sum / (user_count * m_count) : 0.0;
  metrics.spectral_efficiency = total_rate / ctx.bandwidth_hz;
  const double t = std::tan(ctx.psi_min_rad);
  metrics.ase_system = total_rate * t * t /
                       (ctx.bandwidth_hz * std::numbers::pi *
                        ctx.altitude_km * ctx.altitude_km);
  metrics.jain_fairness =
      rate_sq_sum > 0.0 ? rate_sum * rate_sum / (user_count * rate_sq_sum) : 0.0;
  return metrics;
}

}  // namespace hapsim::noma
