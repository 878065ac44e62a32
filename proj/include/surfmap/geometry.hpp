#pragma once

#include <span>

#include <Eigen/Core>

namespace surfmap {

/// A point in millimetres. The frame is implied by context ({0} unless noted).
using Point3 = Eigen::Vector3d;

/// Minimum |n_z| for a plane to be evaluated as a height field.
inline constexpr double kVerticalEpsilon = 1e-6;

/// Collinearity threshold on the ratio of the middle to the largest
/// eigenvalue of the point covariance matrix.
inline constexpr double kCollinearRatio = 1e-10;

/// Plane n . x = offset through centroid, with unit normal oriented upward
/// (n_z > 0 when |n_z| > kVerticalEpsilon, else n_x > 0, else n_y > 0).
struct Plane {
  Eigen::Vector3d normal{0.0, 0.0, 1.0};
  double offset{0.0};
  Point3 centroid{Point3::Zero()};
};

/// Frame {A}: origin at the plane centroid, columns of `rotation` are
/// e_x, n x e_x and n, all expressed in {0}.
struct LocalFrame {
  Point3 origin{Point3::Zero()};
  Eigen::Matrix3d rotation{Eigen::Matrix3d::Identity()};
};

/// Fits a plane through L >= 3 points by PCA of their covariance matrix.
/// For L == 3 the normal is taken from the cross product of two edges.
/// Throws Error(kDuplicatePoints) when fewer than three distinct points are
/// given and Error(kCollinearPoints) when the normal is undefined.
Plane fit_plane_pca(std::span<const Point3> points);

/// Height of the plane above (x, y): (p - n_x x - n_y y) / n_z.
/// Throws Error(kVerticalPlane) when |n_z| <= kVerticalEpsilon.
double plane_height_at(const Plane& plane, double x, double y);

/// Orthogonal projection of q onto the plane.
Point3 project_to_plane(const Plane& plane, const Point3& q);

/// Builds {A} with e_x along the in-plane direction from the centroid to p1.
/// Throws Error(kDegenerateFrame) if p1 projects onto the centroid.
LocalFrame build_local_frame(const Plane& plane, const Point3& p1);

inline Point3 to_local(const LocalFrame& frame, const Point3& q) {
  return frame.rotation.transpose() * (q - frame.origin);
}

inline Point3 from_local(const LocalFrame& frame, const Point3& q) {
  return frame.rotation * q + frame.origin;
}

/// Applies the upward sign convention to a (not necessarily unit) normal.
Eigen::Vector3d orient_normal(const Eigen::Vector3d& n);

}  // namespace surfmap
