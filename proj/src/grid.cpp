#include "surfmap/grid.hpp"

#include <cmath>

#include "surfmap/error.hpp"

namespace surfmap {

void GridSpec::validate() const {
  const bool finite = std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) &&
                      std::isfinite(y_max);
  if (!finite || !(x_max > x_min) || !(y_max > y_min)) {
    throw Error(Errc::kInvalidSpec, "grid extents must be finite with max > min");
  }
  if (nx == 0 || ny == 0) throw Error(Errc::kInvalidSpec, "grid cell counts must be positive");
}

GridSpec GridSpec::from_step(double x_min, double x_max, double y_min, double y_max,
                             double step) {
  if (!(step > 0.0)) throw Error(Errc::kInvalidSpec, "grid step must be positive");
  GridSpec spec{x_min, x_max, y_min, y_max,
                static_cast<std::size_t>(std::llround((x_max - x_min) / step)),
                static_cast<std::size_t>(std::llround((y_max - y_min) / step))};
  spec.validate();
  return spec;
}

std::pair<double, double> index_to_coord(const GridSpec& spec, std::size_t i, std::size_t j) {
  if (i >= spec.nx || j >= spec.ny) throw Error(Errc::kOutOfBounds, "grid index out of range");
  return {spec.x_at(i), spec.y_at(j)};
}

namespace {

std::size_t nearest_axis(double v, double lo, double hi, double step, std::size_t count) {
  if (!(v >= lo && v <= hi)) throw Error(Errc::kOutOfBounds, "coordinate outside grid extent");
  // ceil(t - 0.5) rounds to nearest with halves going down.
  const double t = std::ceil((v - lo) / step - 0.5);
  const auto idx = static_cast<std::size_t>(std::max(0.0, t));
  return std::min(idx, count - 1);
}

}  // namespace

std::pair<std::size_t, std::size_t> coord_to_nearest_index(const GridSpec& spec, double x,
                                                           double y) {
  return {nearest_axis(x, spec.x_min, spec.x_max, spec.step_x(), spec.nx),
          nearest_axis(y, spec.y_min, spec.y_max, spec.step_y(), spec.ny)};
}

HeightGrid::HeightGrid(const GridSpec& spec, double z0, double p0) : spec_(spec) {
  spec_.validate();
  if (!(p0 > 0.0) || !std::isfinite(p0) || !std::isfinite(z0)) {
    throw Error(Errc::kInvalidSpec, "initial covariance must be positive and finite");
  }
  cells_.assign(spec_.size(), CellState{z0, p0});
}

GridSnapshot HeightGrid::snapshot(GridField field) const {
  GridSnapshot snap{spec_, field, {}};
  snap.values.reserve(cells_.size());
  for (const auto& c : cells_) snap.values.push_back(field == GridField::kHeight ? c.z_hat : c.p_hat);
  return snap;
}

}  // namespace surfmap
