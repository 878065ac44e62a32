#include "surfmap/kalman.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surfmap/error.hpp"

namespace surfmap {

void KFParams::validate() const {
  if (!(q >= 0.0)) throw Error(Errc::kConfig, "process covariance must be nonnegative");
  if (h == 0.0 || !std::isfinite(h) || !std::isfinite(f)) {
    throw Error(Errc::kConfig, "observation gain must be finite and nonzero");
  }
}

namespace {

inline CellState filter_step(const CellState& cell, double z_meas, double r,
                             const KFParams& kf) {
  const double z_pred = kf.f * cell.z_hat;
  const double p_pred = kf.f * kf.f * cell.p_hat + kf.q;
  const double s = r + kf.h * kf.h * p_pred;
  const double k = kf.h * p_pred / s;
  // P+ = (1 - K h) P- = P- R / S
  return {z_pred + k * (z_meas - kf.h * z_pred), p_pred * r / s};
}

}  // namespace

CellState kf_cell_update(const CellState& cell, double z_meas, double r, const KFParams& params) {
  if (!(r > 0.0)) throw Error(Errc::kNonPositiveR, "measurement covariance must be positive");
  return filter_step(cell, z_meas, r, params);
}

UpdateStats masked_map_update(HeightGrid& grid, const Plane& plane,
                              std::span<const Point3> points, const BinaryMask& mask,
                              const CovarianceParams& cov_params, const KFParams& kf_params,
                              int workers) {
  const GridSpec& spec = grid.spec();
  if (!(mask.spec() == spec)) {
    throw Error(Errc::kMaskShapeMismatch, "mask and grid dimensions differ");
  }
  if (std::abs(plane.normal.z()) <= kVerticalEpsilon) {
    throw Error(Errc::kVerticalPlane, "plane is (near) vertical, not a height field");
  }
  cov_params.validate();

  const std::vector<std::size_t> cells = mask.indices();
  UpdateStats stats;
  stats.cells_touched = cells.size();
  if (cells.empty()) return stats;

  double r_lo = std::numeric_limits<double>::infinity();
  double r_hi = -std::numeric_limits<double>::infinity();
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
  const int threads = std::max(1, workers);

#pragma omp parallel for num_threads(threads) schedule(static) reduction(min : r_lo) \
    reduction(max : r_hi) if (threads > 1)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const std::size_t c = cells[k];
    const double x = spec.x_at(c % spec.nx);
    const double y = spec.y_at(c / spec.nx);
    const double z_meas = plane_height_at(plane, x, y);
    const double r = rbf_covariance(x, y, plane, points, cov_params);
    grid[c] = filter_step(grid[c], z_meas, r, kf_params);
    r_lo = std::min(r_lo, r);
    r_hi = std::max(r_hi, r);
  }

  stats.r_min_used = r_lo;
  stats.r_max_used = r_hi;
  return stats;
}

UpdateTrigger::UpdateTrigger(double min_travel) : min_travel_(min_travel) {
  if (!(min_travel > 0.0)) throw Error(Errc::kConfig, "trigger distance must be positive");
}

bool UpdateTrigger::should_update(const Point3& centroid) {
  if (last_ && (centroid - *last_).norm() <= min_travel_) return false;
  last_ = centroid;
  return true;
}

}  // namespace surfmap
