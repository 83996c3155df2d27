#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hapsim::oracle {

namespace {

bool encloses(const geom::Circle& c, std::span<const geom::Vec2> pts) {
  for (geom::Vec2 p : pts)
    if (geom::distance(c.center, p) > c.radius + 1e-9) return false;
  return true;
}

std::optional<geom::Circle> circumcircle(geom::Vec2 a, geom::Vec2 b, geom::Vec2 c) {
  const double d =
      2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  const double scale = std::max({std::abs(a.x) + std::abs(a.y),
                                 std::abs(b.x) + std::abs(b.y),
                                 std::abs(c.x) + std::abs(c.y), 1.0});
  if (std::abs(d) <= 1e-12 * scale * scale) return std::nullopt;  // collinear
  const double a2 = a.x * a.x + a.y * a.y;
  const double b2 = b.x * b.x + b.y * b.y;
  const double c2 = c.x * c.x + c.y * c.y;
  geom::Vec2 center{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                    (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  const double r = std::max(
      {geom::distance(center, a), geom::distance(center, b), geom::distance(center, c)});
  return geom::Circle{center, r};
}

}  // namespace

geom::Circle brute_force_mec(std::span<const geom::Vec2> points) {
  if (points.empty())
    throw std::invalid_argument("brute_force_mec: empty point set");
  if (points.size() > 15)
    throw std::invalid_argument("brute_force_mec: too many points");
  if (points.size() == 1) return {points[0], 0.0};

  geom::Circle best{{0, 0}, std::numeric_limits<double>::infinity()};
  const int n = static_cast<int>(points.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const geom::Circle c{{0.5 * (points[i].x + points[j].x),
                            0.5 * (points[i].y + points[j].y)},
                           0.5 * geom::distance(points[i], points[j])};
      if (c.radius < best.radius && encloses(c, points)) best = c;
      for (int k = j + 1; k < n; ++k) {
        const auto cc = circumcircle(points[i], points[j], points[k]);
        if (cc && cc->radius < best.radius && encloses(*cc, points)) best = *cc;
      }
    }
  }
  return best;
}

namespace {

// Sum rate and QoS feasibility for a candidate split; constraints checked by
// direct evaluation of every decoding rate R_{j->l}, j <= l.
struct PointEval {
  double rate = 0.0;
  bool feasible = false;
};

PointEval evaluate_point(const noma::OrderedGroup& group,
                         std::span<const double> alphas) {
  PointEval out;
  const int k = group.size();
  out.feasible = true;
  for (int l = 0; l < k; ++l) {
    out.rate += noma::user_rate(group, alphas, l);
    for (int j = 0; j <= l && out.feasible; ++j) {
      if (noma::cross_rate(group, alphas, j, l) < group.qos_rate)
        out.feasible = false;
    }
  }
  return out;
}

}  // namespace

GridSearchResult grid_search_allocation(const noma::OrderedGroup& group,
                                        double step) {
  const int k = group.size();
  if (k < 1 || k > 3)
    throw std::invalid_argument("grid_search_allocation: supports K in {1,2,3}");
  if (!(step > 0.0) || step > 1.0)
    throw std::invalid_argument("grid_search_allocation: bad step");

  GridSearchResult result;
  result.best_rate = -std::numeric_limits<double>::infinity();
  const int n = static_cast<int>(std::llround(1.0 / step));

  std::vector<double> alphas(k, 0.0);
  auto try_point = [&]() {
    const PointEval eval = evaluate_point(group, alphas);
    if (!eval.feasible) return;
    result.feasible = true;
    if (eval.rate > result.best_rate) {
      result.best_rate = eval.rate;
      result.best_alphas = alphas;
    }
  };

  // Full budget: any slack can be routed to the weakest user without hurting
  // anyone else's SINR or feasibility, so the optimum lies on the simplex face.
  if (k == 1) {
    alphas[0] = 1.0;
    try_point();
  } else if (k == 2) {
    for (int i = 0; i <= n; ++i) {
      alphas[0] = static_cast<double>(i) * step;
      alphas[1] = 1.0 - alphas[0];
      try_point();
    }
  } else {
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; i + j <= n; ++j) {
        alphas[0] = static_cast<double>(i) * step;
        alphas[1] = static_cast<double>(j) * step;
        alphas[2] = 1.0 - alphas[0] - alphas[1];
        try_point();
      }
    }
  }
  if (!result.feasible) result.best_rate = 0.0;
  return result;
}

namespace {

// Exponentially scaled modified Bessel I0: series up to moderate argument,
// asymptotic expansion beyond.
double i0e(double z) {
  if (z < 0.0) z = -z;
  if (z <= 600.0) {
    double term = 1.0;
    double sum = 1.0;
    const double q = 0.25 * z * z;
    for (int k = 1; k < 1000; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return sum * std::exp(-z);
  }
  const double inv = 1.0 / (8.0 * z);
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k <= 6; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd * inv / k;
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

double marcum_integrand(double x, double a) {
  const double diff = x - a;
  return x * std::exp(-0.5 * diff * diff) * i0e(a * x);
}

double simpson(double (*f)(double, double), double a_param, double lo,
               double hi) {
  const double mid = 0.5 * (lo + hi);
  return (hi - lo) / 6.0 *
         (f(lo, a_param) + 4.0 * f(mid, a_param) + f(hi, a_param));
}

double adaptive(double (*f)(double, double), double a_param, double lo,
                double hi, double whole, double tol, int depth) {
  const double mid = 0.5 * (lo + hi);
  const double left = simpson(f, a_param, lo, mid);
  const double right = simpson(f, a_param, mid, hi);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive(f, a_param, lo, mid, left, 0.5 * tol, depth - 1) +
         adaptive(f, a_param, mid, hi, right, 0.5 * tol, depth - 1);
}

double integrate(double a_param, double lo, double hi, double tol) {
  if (hi <= lo) return 0.0;
  // split at the density peak so the adaptive pass starts well-conditioned
  const double peak = std::clamp(a_param, lo, hi);
  double total = 0.0;
  for (const auto& [s, e] : {std::pair{lo, peak}, std::pair{peak, hi}}) {
    if (e <= s) continue;
    total += adaptive(marcum_integrand, a_param, s, e,
                      simpson(marcum_integrand, a_param, s, e), tol, 48);
  }
  return total;
}

}  // namespace

double marcum_q1_integral(double a, double b) {
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("marcum_q1_integral: negative argument");
  const double hi = std::max(a, b) + 13.0;
  if (b >= hi) return 0.0;
  return integrate(a, b, hi, 1e-13);
}

double marcum_q1_complement_integral(double a, double b) {
  if (a < 0.0 || b < 0.0)
    throw std::invalid_argument("marcum_q1_complement_integral: negative argument");
  return integrate(a, 0.0, b, 1e-13);
}

}  // namespace hapsim::oracle
