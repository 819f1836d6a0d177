#include "trussforge/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace trussforge {

double closest_point_param(const Vec3& a, const Vec3& b, const Vec3& p) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return 0.0;
  return std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
}

double point_segment_distance(const Vec3& a, const Vec3& b, const Vec3& p) {
  const double t = closest_point_param(a, b, p);
  return (a + t * (b - a) - p).norm();
}

bool point_on_open_segment(const Vec3& a, const Vec3& b, const Vec3& q,
                           double tol) {
  const Vec3 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 == 0.0) return false;
  const double t = (q - a).dot(ab) / len2;
  // Strictly interior with a parametric margin so endpoint coincidence
  // never registers as "through".
  const double margin = std::max(1e-9, tol / std::sqrt(len2));
  if (t <= margin || t >= 1.0 - margin) return false;
  return (a + t * ab - q).norm() <= tol;
}

bool segments_cross_2d(const Vec3& p1, const Vec3& p2, const Vec3& q1,
                       const Vec3& q2, double* s_out, double* t_out) {
  const double rx = p2.x() - p1.x(), ry = p2.y() - p1.y();
  const double sx = q2.x() - q1.x(), sy = q2.y() - q1.y();
  const double denom = rx * sy - ry * sx;
  const double scale = std::max({std::abs(rx), std::abs(ry), std::abs(sx),
                                 std::abs(sy), 1e-300});
  if (std::abs(denom) <= 1e-12 * scale * scale) return false;  // parallel
  const double qpx = q1.x() - p1.x(), qpy = q1.y() - p1.y();
  const double s = (qpx * sy - qpy * sx) / denom;
  const double t = (qpx * ry - qpy * rx) / denom;
  const double eps = 1e-9;
  if (s <= eps || s >= 1.0 - eps || t <= eps || t >= 1.0 - eps) return false;
  if (s_out) *s_out = s;
  if (t_out) *t_out = t;
  return true;
}

bool segment_crosses_box(const Vec3& a, const Vec3& b, const AlignedBox& box,
                         int dim) {
  // Liang-Barsky clip of the segment against the closed box, then check that
  // the clipped midpoint lies strictly inside (rules out face grazing).
  double t0 = 0.0, t1 = 1.0;
  const Vec3 d = b - a;
  for (int ax = 0; ax < dim; ++ax) {
    if (std::abs(d[ax]) < 1e-300) {
      if (a[ax] < box.lo[ax] || a[ax] > box.hi[ax]) return false;
      continue;
    }
    double ta = (box.lo[ax] - a[ax]) / d[ax];
    double tb = (box.hi[ax] - a[ax]) / d[ax];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return false;
  }
  if (t1 - t0 <= 1e-9) return false;
  const Vec3 mid = a + (0.5 * (t0 + t1)) * d;
  return box.strictly_inside(mid, dim);
}

}  // namespace trussforge
