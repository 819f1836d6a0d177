#pragma once

#include <Eigen/Core>

#include <limits>
#include <vector>

namespace trussforge {

using Vec3 = Eigen::Vector3d;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Axis-aligned box with per-axis bounds; +-inf allowed. Axes beyond the
// working dimension are ignored by callers (2D trusses keep z = 0).
struct AlignedBox {
  Vec3 lo{-kInf, -kInf, -kInf};
  Vec3 hi{kInf, kInf, kInf};

  bool contains(const Vec3& p, int dim) const {
    for (int a = 0; a < dim; ++a) {
      if (p[a] < lo[a] || p[a] > hi[a]) return false;
    }
    return true;
  }

  // Strict interior; points on a face do not count.
  bool strictly_inside(const Vec3& p, int dim) const {
    for (int a = 0; a < dim; ++a) {
      if (p[a] <= lo[a] || p[a] >= hi[a]) return false;
    }
    return true;
  }

  bool is_finite(int dim) const {
    for (int a = 0; a < dim; ++a) {
      if (!std::isfinite(lo[a]) || !std::isfinite(hi[a])) return false;
    }
    return true;
  }
};

// Parameter of the point on segment [a,b] closest to p, clamped to [0,1].
double closest_point_param(const Vec3& a, const Vec3& b, const Vec3& p);

double point_segment_distance(const Vec3& a, const Vec3& b, const Vec3& p);

// True when q lies on the open segment (a,b), strictly away from both
// endpoints, within `tol` of the line (absolute distance).
bool point_on_open_segment(const Vec3& a, const Vec3& b, const Vec3& q,
                           double tol);

// Proper interior-interior crossing of two 2D segments (z ignored). Shared
// or touching endpoints and collinear overlaps do not count. On success the
// intersection parameters s, t in (0,1) are written.
bool segments_cross_2d(const Vec3& p1, const Vec3& p2, const Vec3& q1,
                       const Vec3& q2, double* s = nullptr, double* t = nullptr);

// True when segment [a,b] passes through the open interior of the box.
// Touching a face or sliding along it does not count.
bool segment_crosses_box(const Vec3& a, const Vec3& b, const AlignedBox& box,
                         int dim);

}  // namespace trussforge
