#include "surfmap/geometry.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include "surfmap/error.hpp"

namespace surfmap {

namespace {

std::size_t count_distinct(std::span<const Point3> points) {
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool seen = false;
    for (std::size_t k = 0; k < i && !seen; ++k) seen = points[k] == points[i];
    if (!seen) ++distinct;
  }
  return distinct;
}

}  // namespace

Eigen::Vector3d orient_normal(const Eigen::Vector3d& n) {
  if (std::abs(n.z()) > kVerticalEpsilon) return n.z() > 0.0 ? n : Eigen::Vector3d(-n);
  if (n.x() != 0.0) return n.x() > 0.0 ? n : Eigen::Vector3d(-n);
  return n.y() >= 0.0 ? n : Eigen::Vector3d(-n);
}

Plane fit_plane_pca(std::span<const Point3> points) {
  if (points.size() < 3 || count_distinct(points) < 3) {
    throw Error(Errc::kDuplicatePoints, "plane fit needs at least 3 distinct points");
  }

  const double inv_l = 1.0 / static_cast<double>(points.size());
  Point3 centroid = Point3::Zero();
  for (const auto& p : points) centroid += p;
  centroid *= inv_l;

  Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
  for (const auto& p : points) {
    const Eigen::Vector3d d = p - centroid;
    cov.noalias() += d * d.transpose();
  }
  cov *= inv_l;

  // Eigenvalues come back in increasing order.
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> solver(cov);
  const Eigen::Vector3d& ev = solver.eigenvalues();
  if (!(ev(2) > 0.0) || ev(1) < kCollinearRatio * ev(2)) {
    throw Error(Errc::kCollinearPoints, "measurement points are collinear");
  }

  Eigen::Vector3d normal;
  if (points.size() == 3) {
    normal = (points[1] - points[0]).cross(points[2] - points[0]).normalized();
  } else {
    normal = solver.eigenvectors().col(0).normalized();
  }
  normal = orient_normal(normal);

  return Plane{normal, normal.dot(centroid), centroid};
}

double plane_height_at(const Plane& plane, double x, double y) {
  const Eigen::Vector3d& n = plane.normal;
  if (std::abs(n.z()) <= kVerticalEpsilon) {
    throw Error(Errc::kVerticalPlane, "plane is (near) vertical, not a height field");
  }
  return (plane.offset - n.x() * x - n.y() * y) / n.z();
}

Point3 project_to_plane(const Plane& plane, const Point3& q) {
  return q - (q - plane.centroid).dot(plane.normal) * plane.normal;
}

LocalFrame build_local_frame(const Plane& plane, const Point3& p1) {
  const Eigen::Vector3d& n = plane.normal;
  const Eigen::Vector3d v = p1 - plane.centroid;
  const Eigen::Vector3d in_plane = v - v.dot(n) * n;
  const double len = in_plane.norm();
  if (len <= 1e-9 * std::max(1.0, v.norm())) {
    throw Error(Errc::kDegenerateFrame, "reference point projects onto the centroid");
  }
  const Eigen::Vector3d ex = in_plane / len;

  LocalFrame frame;
  frame.origin = plane.centroid;
  frame.rotation.col(0) = ex;
  frame.rotation.col(1) = n.cross(ex);
  frame.rotation.col(2) = n;
  return frame;
}

}  // namespace surfmap
