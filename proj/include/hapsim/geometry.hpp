#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hapsim::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }

double norm(Vec2 v);
double distance(Vec2 a, Vec2 b);

// Ground user on the horizontal plane, coordinates in km.
struct GroundUser {
  int id = 0;
  Vec2 position;
};

struct Circle {
  Vec2 center;
  double radius = 0.0;

  bool contains(Vec2 p, double tol = 1e-9) const;
};

// Spot beam: circular footprint on the ground plus the antenna quantities
// derived from it. peak_gain is linear.
struct SpotBeam {
  Circle footprint;
  double hpbw_deg = 0.0;
  double peak_gain = 1.0;
};

// assignment[i] is the beam index serving users[i] (positional, not by id).
struct Association {
  std::vector<int> beam_of;
};

struct CoverResult {
  std::vector<Vec2> centers;
  std::vector<int> center_user_ids;

  int count() const { return static_cast<int>(centers.size()); }
};

// Thrown when a user cannot be placed inside any beam footprint.
class association_error : public std::runtime_error {
 public:
  association_error(int user_id, const std::string& what)
      : std::runtime_error(what), user_id(user_id) {}
  int user_id;
};

// Greedy disk cover with a shared radius: repeatedly pick, among the lowest
// still-uncovered user's neighbors, the user whose disk covers the most
// remaining users (ties -> lowest index) and open a beam there. Centers are
// always user positions. Every user ends up within `radius_km` of a center.
CoverResult gdc_cover(std::span<const GroundUser> users, double radius_km);

// Nearest-center assignment (ties -> lowest beam index). A user whose nearest
// center does not cover it raises association_error carrying the user id;
// with the equal radii produced by gdc_cover this is exactly "outside all
// footprints".
Association associate(std::span<const GroundUser> users,
                      std::span<const SpotBeam> beams);

inline constexpr std::uint64_t kWelzlDefaultSeed = 0x5D3C0D9F2B614E37ull;

// Exact minimum enclosing circle (expected linear time, seeded shuffle).
// Result is unique and therefore independent of the shuffle seed.
Circle welzl_mec(std::span<const Vec2> points,
                 std::uint64_t shuffle_seed = kWelzlDefaultSeed);

// Centroid center, radius to the farthest point. Never smaller than the MEC.
Circle heuristic_mec(std::span<const Vec2> points);

// Half-power beamwidth (degrees) of a beam whose footprint radius is
// radius_km seen from altitude_km, and its inverse.
double hpbw_from_radius(double radius_km, double altitude_km);
double radius_from_hpbw(double hpbw_deg, double altitude_km);

}  // namespace hapsim::geom
