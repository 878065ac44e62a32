#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace surfmap {

/// Rectangular lattice over [x_min, x_max) x [y_min, y_max).
///
/// Grid point (i, j) sits at x_i = h_x i + x_min, y_j = h_y j + y_min with
/// h_x = (x_max - x_min) / nx and h_y = (y_max - y_min) / ny, i in [0, nx),
/// j in [0, ny). x_max and y_max are therefore not grid points.
/// Cells are stored y-major: linear index = j * nx + i.
struct GridSpec {
  double x_min{0.0};
  double x_max{1.0};
  double y_min{0.0};
  double y_max{1.0};
  std::size_t nx{1};
  std::size_t ny{1};

  double step_x() const { return (x_max - x_min) / static_cast<double>(nx); }
  double step_y() const { return (y_max - y_min) / static_cast<double>(ny); }
  std::size_t size() const { return nx * ny; }
  std::size_t linear(std::size_t i, std::size_t j) const { return j * nx + i; }
  double x_at(std::size_t i) const { return step_x() * static_cast<double>(i) + x_min; }
  double y_at(std::size_t j) const { return step_y() * static_cast<double>(j) + y_min; }

  /// Throws Error(kInvalidSpec) unless the extents are ordered and finite and
  /// both counts are positive.
  void validate() const;

  /// Spec covering [x_min, x_max] x [y_min, y_max] at the given step.
  static GridSpec from_step(double x_min, double x_max, double y_min, double y_max,
                            double step);

  bool operator==(const GridSpec&) const = default;
};

/// (x_i, y_j). Throws Error(kOutOfBounds) for indices outside the lattice.
std::pair<double, double> index_to_coord(const GridSpec& spec, std::size_t i, std::size_t j);

/// Nearest lattice indices; exact ties round toward the lower index.
/// Coordinates in [x_max - h_x/2, x_max] clamp to nx - 1 (same for y).
/// Throws Error(kOutOfBounds) outside [x_min, x_max] x [y_min, y_max].
std::pair<std::size_t, std::size_t> coord_to_nearest_index(const GridSpec& spec, double x,
                                                           double y);

struct CellState {
  double z_hat{0.0};
  double p_hat{0.0};
};

enum class GridField { kHeight, kCovariance };

/// Dense snapshot of one field, y-major (row j holds nx values).
struct GridSnapshot {
  GridSpec spec;
  GridField field{GridField::kHeight};
  std::vector<double> values;
};

class HeightGrid {
 public:
  /// Every cell starts at (z0, p0). Throws Error(kInvalidSpec) if the GridSpec is
  /// invalid or p0 <= 0.
  HeightGrid(const GridSpec& spec, double z0, double p0);

  const GridSpec& spec() const { return spec_; }
  std::size_t size() const { return cells_.size(); }

  const CellState& at(std::size_t i, std::size_t j) const { return cells_[spec_.linear(i, j)]; }
  CellState& at(std::size_t i, std::size_t j) { return cells_[spec_.linear(i, j)]; }
  const CellState& operator[](std::size_t linear) const { return cells_[linear]; }
  CellState& operator[](std::size_t linear) { return cells_[linear]; }

  const std::vector<CellState>& cells() const { return cells_; }

  GridSnapshot snapshot(GridField field) const;

 private:
  GridSpec spec_;
  std::vector<CellState> cells_;
};

inline HeightGrid new_grid(const GridSpec& spec, double z0, double p0) {
  return HeightGrid(spec, z0, p0);
}

}  // namespace surfmap
