#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "surfmap/geometry.hpp"
#include "surfmap/grid.hpp"

namespace surfmap {

class BinaryMask;

enum class DistanceMode {
  kPlaneProjected,  ///< in-plane displacement between grid point and measurement
  kXyProjected,     ///< displacement in the xy-plane of {0}
};

struct CovarianceParams {
  double r_min{10.0};
  double r_max{1.0e4};
  double alpha{0.1};  ///< kernel scale, 1/mm^2
  DistanceMode distance_mode{DistanceMode::kPlaneProjected};

  /// Throws Error(kConfig) unless r_max > r_min > 0 and alpha > 0.
  void validate() const;
};

/// Unclamped Gaussian-RBF covariance:
///   (r_max - r_min) / L * (1 - sum_l exp(-alpha |d_l|^2)) + r_min
/// For L > 1 the far-field value is (r_max - r_min) / L + r_min, and
/// overlapping kernels can push it below r_min.
double rbf_covariance_raw(double x, double y, const Plane& plane,
                          std::span<const Point3> points, const CovarianceParams& params);

/// rbf_covariance_raw clamped to [r_min, r_max].
double rbf_covariance(double x, double y, const Plane& plane, std::span<const Point3> points,
                      const CovarianceParams& params);

/// Covariance evaluated on masked cells only, in increasing linear index.
struct CovarianceField {
  std::vector<std::size_t> cells;
  std::vector<double> values;

  std::size_t size() const { return cells.size(); }
};

CovarianceField covariance_field(const BinaryMask& mask, const Plane& plane,
                                 std::span<const Point3> points, const CovarianceParams& params);

}  // namespace surfmap
