#include "hapsim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hapsim/rng.hpp"
#include "hapsim/units.hpp"

namespace hapsim::geom {

double norm(Vec2 v) { return std::hypot(v.x, v.y); }
double distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Circle::contains(Vec2 p, double tol) const {
  return distance(center, p) <= radius + tol;
}

CoverResult gdc_cover(std::span<const GroundUser> users, double radius_km) {
  if (users.empty()) throw std::invalid_argument("gdc_cover: empty user list");
  if (!(radius_km > 0.0)) throw std::invalid_argument("gdc_cover: radius must be positive");

  const int k = static_cast<int>(users.size());
  // Neighbor matrix: reach[i][j] = 1 iff |u_i - u_j| <= r. The diagonal is 1
  // (distance zero), so an isolated user is its own best center.
  std::vector<std::uint8_t> reach(static_cast<std::size_t>(k) * k, 0);
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      const bool in = distance(users[i].position, users[j].position) <= radius_km;
      reach[static_cast<std::size_t>(i) * k + j] = in;
      reach[static_cast<std::size_t>(j) * k + i] = in;
    }
  }

  std::vector<std::uint8_t> active(k, 1);
  std::vector<int> cover_count(k, 0);  // active users inside user j's disk
  for (int j = 0; j < k; ++j) {
    int c = 0;
    for (int i = 0; i < k; ++i) c += reach[static_cast<std::size_t>(i) * k + j];
    cover_count[j] = c;
  }

  CoverResult result;
  int remaining = k;
  while (remaining > 0) {
    int row = 0;
    while (!active[row]) ++row;

    // Among row's neighbors pick the one covering the most remaining users.
    int best = -1;
    for (int j = 0; j < k; ++j) {
      if (!active[j] || !reach[static_cast<std::size_t>(row) * k + j]) continue;
      if (best < 0 || cover_count[j] > cover_count[best]) best = j;
    }
    result.centers.push_back(users[best].position);
    result.center_user_ids.push_back(users[best].id);

    // Retire everyone covered by the new beam and update the counts.
    for (int j = 0; j < k; ++j) {
      if (!active[j] || !reach[static_cast<std::size_t>(best) * k + j]) continue;
      active[j] = 0;
      --remaining;
      for (int i = 0; i < k; ++i)
        if (reach[static_cast<std::size_t>(j) * k + i]) --cover_count[i];
    }
  }
  return result;
}

Association associate(std::span<const GroundUser> users,
                      std::span<const SpotBeam> beams) {
  if (beams.empty()) throw std::invalid_argument("associate: no beams");

  Association assoc;
  assoc.beam_of.reserve(users.size());
  for (const GroundUser& user : users) {
    int best = 0;
    double best_dist = distance(user.position, beams[0].footprint.center);
    for (int m = 1; m < static_cast<int>(beams.size()); ++m) {
      const double d = distance(user.position, beams[m].footprint.center);
      if (d < best_dist) {
        best = m;
        best_dist = d;
      }
    }
    if (best_dist > beams[best].footprint.radius) {
      throw association_error(user.id, "user " + std::to_string(user.id) +
                                           " lies outside every beam footprint");
    }
    assoc.beam_of.push_back(best);
  }
  return assoc;
}

namespace {

// Containment test used while building the MEC; the slack absorbs the
// rounding of circumcenter arithmetic.
bool inside(const Circle& c, Vec2 p) {
  return distance(c.center, p) <= c.radius * (1.0 + 1e-12) + 1e-12;
}

Circle circle_two(Vec2 a, Vec2 b) {
  const Vec2 center{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  return {center, 0.5 * distance(a, b)};
}

// Circumcircle of three points; collinear triples fall back to the diameter
// circle of the farthest pair.
Circle circle_three(Vec2 a, Vec2 b, Vec2 c) {
  const double d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  const double scale = std::max({std::abs(a.x) + std::abs(a.y),
                                 std::abs(b.x) + std::abs(b.y),
                                 std::abs(c.x) + std::abs(c.y), 1.0});
  if (std::abs(d) <= 1e-12 * scale * scale) {
    Circle best = circle_two(a, b);
    for (const Circle& cand : {circle_two(a, c), circle_two(b, c)})
      if (cand.radius > best.radius) best = cand;
    return best;
  }
  const double a2 = a.x * a.x + a.y * a.y;
  const double b2 = b.x * b.x + b.y * b.y;
  const double c2 = c.x * c.x + c.y * c.y;
  const Vec2 center{(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d,
                    (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d};
  const double radius =
      std::max({distance(center, a), distance(center, b), distance(center, c)});
  return {center, radius};
}

}  // namespace

Circle welzl_mec(std::span<const Vec2> points, std::uint64_t shuffle_seed) {
  if (points.empty()) throw std::invalid_argument("welzl_mec: empty point set");

  std::vector<Vec2> pts(points.begin(), points.end());
  RngStream rng(shuffle_seed);
  for (std::size_t i = pts.size() - 1; i > 0; --i)
    std::swap(pts[i], pts[rng.below(i + 1)]);

  // Incremental Welzl: rebuild with each violating point forced on the rim.
  Circle c{pts[0], 0.0};
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (inside(c, pts[i])) continue;
    c = Circle{pts[i], 0.0};
    for (std::size_t j = 0; j < i; ++j) {
      if (inside(c, pts[j])) continue;
      c = circle_two(pts[i], pts[j]);
      for (std::size_t l = 0; l < j; ++l) {
        if (inside(c, pts[l])) continue;
        c = circle_three(pts[i], pts[j], pts[l]);
      }
    }
  }
  return c;
}

Circle heuristic_mec(std::span<const Vec2> points) {
  if (points.empty()) throw std::invalid_argument("heuristic_mec: empty point set");

  Vec2 mean{0.0, 0.0};
  for (Vec2 p : points) mean = mean + p;
  mean = (1.0 / static_cast<double>(points.size())) * mean;

  double radius = 0.0;
  for (Vec2 p : points) radius = std::max(radius, distance(mean, p));
  return {mean, radius};
}

double hpbw_from_radius(double radius_km, double altitude_km) {
  if (!(radius_km > 0.0) || !(altitude_km > 0.0))
    throw std::invalid_argument("hpbw_from_radius: inputs must be positive");
  return rad_to_deg(2.0 * std::atan(radius_km / altitude_km));
}

double radius_from_hpbw(double hpbw_deg, double altitude_km) {
  if (!(hpbw_deg > 0.0) || !(altitude_km > 0.0))
    throw std::invalid_argument("radius_from_hpbw: inputs must be positive");
  return altitude_km * std::tan(deg_to_rad(hpbw_deg) / 2.0);
}

}  // namespace hapsim::geom
