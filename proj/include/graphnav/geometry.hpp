#ifndef GRAPHNAV_GEOMETRY_HPP_
#define GRAPHNAV_GEOMETRY_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace graphnav {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Point in 2D or 3D; 2D maps keep z == 0 so distance math is shared.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3() = default;
  Vec3(double px, double py, double pz = 0.0) : x(px), y(py), z(pz) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  bool operator==(const Vec3& o) const { return x == o.x && y == o.y && z == o.z; }

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline double dot(const Vec3& a, const Vec3& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline double distance(const Vec3& a, const Vec3& b) { return norm(a - b); }

// Axis-aligned box. 2D boxes use a degenerate z interval [0, 0].
struct Box {
  Vec3 lo;
  Vec3 hi;

  Box() = default;
  Box(const Vec3& l, const Vec3& h) : lo(l), hi(h) {}

  Vec3 center() const { return (lo + hi) * 0.5; }

  bool contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
           p.z >= lo.z && p.z <= hi.z;
  }

  // Positive-volume overlap (shared faces do not count).
  bool overlaps_open(const Box& o) const {
    for (int i = 0; i < 3; ++i) {
      const double l = std::max(lo[i], o.lo[i]);
      const double h = std::min(hi[i], o.hi[i]);
      // A degenerate axis (2D z) always "overlaps" itself.
      if (lo[i] == hi[i] && o.lo[i] == o.hi[i]) continue;
      if (l >= h) return false;
    }
    return true;
  }

  // Closed overlap (touching counts).
  bool overlaps_closed(const Box& o) const {
    for (int i = 0; i < 3; ++i) {
      if (std::max(lo[i], o.lo[i]) > std::min(hi[i], o.hi[i])) return false;
    }
    return true;
  }

  Box inflated(double r) const {
    return Box({lo.x - r, lo.y - r, lo.z - r}, {hi.x + r, hi.y + r, hi.z + r});
  }

  double distance_to(const Vec3& p) const {
    double d2 = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double d = std::max({lo[i] - p[i], 0.0, p[i] - hi[i]});
      d2 += d * d;
    }
    return std::sqrt(d2);
  }
};

// Exact segment-box intersection via parametric slab clipping, closed bounds.
inline bool segment_intersects_box(const Vec3& p, const Vec3& q, const Box& b) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Vec3 d = q - p;
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (p[i] < b.lo[i] || p[i] > b.hi[i]) return false;
    } else {
      double ta = (b.lo[i] - p[i]) / d[i];
      double tb = (b.hi[i] - p[i]) / d[i];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return false;
    }
  }
  return true;
}

// First entry parameter of segment pq into box, or +inf when disjoint.
inline double segment_box_entry(const Vec3& p, const Vec3& q, const Box& b) {
  double t0 = 0.0;
  double t1 = 1.0;
  const Vec3 d = q - p;
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (p[i] < b.lo[i] || p[i] > b.hi[i]) return kInf;
    } else {
      double ta = (b.lo[i] - p[i]) / d[i];
      double tb = (b.hi[i] - p[i]) / d[i];
      if (ta > tb) std::swap(ta, tb);
      t0 = std::max(t0, ta);
      t1 = std::min(t1, tb);
      if (t0 > t1) return kInf;
    }
  }
  return t0;
}

// Seeded RNG wrapper; one per rollout keeps parallel runs independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }
  int uniform_int(int lo, int hi) {  // inclusive bounds
    return std::uniform_int_distribution<int>(lo, hi)(gen_);
  }
  double gaussian(double stddev) {
    return stddev > 0.0 ? std::normal_distribution<double>(0.0, stddev)(gen_) : 0.0;
  }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Stable stream derivation so study cells match independent runs.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t h = base ^ (salt + 0x9e3779b97f4a7c15ULL + (base << 6) + (base >> 2));
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  return h;
}

}  // namespace graphnav

#endif  // GRAPHNAV_GEOMETRY_HPP_
