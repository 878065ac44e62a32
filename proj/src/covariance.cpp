#include "surfmap/covariance.hpp"

#include <algorithm>
#include <cmath>

#include "surfmap/error.hpp"
#include "surfmap/masks.hpp"

namespace surfmap {

void CovarianceParams::validate() const {
  if (!(r_min > 0.0) || !(r_max > r_min)) {
    throw Error(Errc::kConfig, "covariance bounds must satisfy r_max > r_min > 0");
  }
  if (!(alpha > 0.0)) throw Error(Errc::kConfig, "covariance alpha must be positive");
}

double rbf_covariance_raw(double x, double y, const Plane& plane,
                          std::span<const Point3> points, const CovarianceParams& params) {
  const double count = static_cast<double>(points.size());
  double kernel_sum = 0.0;
  if (params.distance_mode == DistanceMode::kPlaneProjected) {
    const Point3 on_plane(x, y, plane_height_at(plane, x, y));
    const Eigen::Vector3d& n = plane.normal;
    for (const auto& p : points) {
      const Eigen::Vector3d rel = p - on_plane;
      const Eigen::Vector3d d = rel - rel.dot(n) * n;
      kernel_sum += std::exp(-params.alpha * d.squaredNorm());
    }
  } else {
    for (const auto& p : points) {
      const double dx = x - p.x();
      const double dy = y - p.y();
      kernel_sum += std::exp(-params.alpha * (dx * dx + dy * dy));
    }
  }
  return (params.r_max - params.r_min) / count * (1.0 - kernel_sum) + params.r_min;
}

double rbf_covariance(double x, double y, const Plane& plane, std::span<const Point3> points,
                      const CovarianceParams& params) {
  return std::clamp(rbf_covariance_raw(x, y, plane, points, params), params.r_min,
                    params.r_max);
}

CovarianceField covariance_field(const BinaryMask& mask, const Plane& plane,
                                 std::span<const Point3> points, const CovarianceParams& params) {
  const GridSpec& spec = mask.spec();
  CovarianceField field;
  field.cells = mask.indices();
  field.values.resize(field.cells.size());
  const auto n = static_cast<std::ptrdiff_t>(field.cells.size());
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::size_t c = field.cells[k];
    field.values[k] = rbf_covariance(spec.x_at(c % spec.nx), spec.y_at(c / spec.nx), plane,
                                     points, params);
  }
  return field;
}

}  // namespace surfmap
