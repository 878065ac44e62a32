#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "surfmap/covariance.hpp"
#include "surfmap/geometry.hpp"
#include "surfmap/grid.hpp"
#include "surfmap/masks.hpp"

namespace surfmap {

/// Scalar per-cell filter model. The defaults describe a static surface.
struct KFParams {
  double f{1.0};  ///< state transition
  double h{1.0};  ///< observation gain
  double q{0.0};  ///< process covariance

  void validate() const;
};

/// One predict/correct step of the scalar Kalman filter:
///   z- = f z,  P- = f^2 P + Q,  S = R + h^2 P-,  K = h P- / S,
///   z+ = z- + K (z_meas - h z-),  P+ = (1 - K h) P-.
/// Throws Error(kNonPositiveR) unless r > 0.
CellState kf_cell_update(const CellState& cell, double z_meas, double r, const KFParams& params);

struct UpdateStats {
  std::size_t cells_touched{0};
  double r_min_used{0.0};  ///< 0 when nothing was touched
  double r_max_used{0.0};
};

/// Fuses one plane approximation into every masked cell:
/// measurement = plane height at the cell, variance = clamped RBF covariance.
/// Cells outside the mask are not written. Results do not depend on
/// `workers`; each cell is an independent filter.
///
/// Throws Error(kMaskShapeMismatch) if the mask was built for another grid
/// and Error(kVerticalPlane) for planes that are not height fields; the grid
/// is untouched in both cases.
UpdateStats masked_map_update(HeightGrid& grid, const Plane& plane,
                              std::span<const Point3> points, const BinaryMask& mask,
                              const CovarianceParams& cov_params, const KFParams& kf_params,
                              int workers = 1);

/// Accepts a sample once its centroid has moved more than `min_travel` from
/// the centroid of the last accepted sample.
class UpdateTrigger {
 public:
  explicit UpdateTrigger(double min_travel = 2.0);

  /// True (and remembers `centroid`) for the first sample or when the
  /// distance to the last accepted centroid exceeds min_travel.
  bool should_update(const Point3& centroid);

  const std::optional<Point3>& last_centroid() const { return last_; }
  double min_travel() const { return min_travel_; }

 private:
  std::optional<Point3> last_;
  double min_travel_;
};

}  // namespace surfmap
