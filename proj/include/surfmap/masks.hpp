#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "surfmap/geometry.hpp"
#include "surfmap/grid.hpp"

namespace surfmap {

enum class MaskKind { kRoi, kTriangle, kLargestCircle, kCap };
enum class FrameMode { kLocalA, kInertialXy };

std::string_view to_string(MaskKind kind);
std::string_view to_string(FrameMode mode);
/// Throws Error(kConfig) for unknown names.
MaskKind parse_mask_kind(std::string_view name);
FrameMode parse_frame_mode(std::string_view name);

struct MaskSpec {
  MaskKind kind{MaskKind::kTriangle};
  double cap_radius{5.0};
  int dilation_steps{2};
  FrameMode frame_mode{FrameMode::kLocalA};

  void validate() const;
};

/// nx x ny raster of update flags over a grid, y-major like HeightGrid.
class BinaryMask {
 public:
  explicit BinaryMask(const GridSpec& spec) : spec_(spec), bits_(spec.size(), 0) {}

  const GridSpec& spec() const { return spec_; }
  std::size_t size() const { return bits_.size(); }

  bool test(std::size_t i, std::size_t j) const { return bits_[spec_.linear(i, j)] != 0; }
  void set(std::size_t i, std::size_t j, bool value = true) {
    bits_[spec_.linear(i, j)] = value ? 1 : 0;
  }
  bool operator[](std::size_t linear) const { return bits_[linear] != 0; }

  std::span<const std::uint8_t> bits() const { return bits_; }
  std::span<std::uint8_t> bits() { return bits_; }

  std::size_t count() const;
  /// Linear indices of set cells, increasing.
  std::vector<std::size_t> indices() const;
  bool is_subset_of(const BinaryMask& other) const;

  /// Set on a triangle mask built from collinear points (mask left empty).
  bool degenerate() const { return degenerate_; }
  void set_degenerate(bool value) { degenerate_ = value; }

  bool operator==(const BinaryMask& other) const {
    return spec_ == other.spec_ && bits_ == other.bits_;
  }

 private:
  GridSpec spec_;
  std::vector<std::uint8_t> bits_;
  bool degenerate_{false};
};

/// Maps grid points and measurement points into the 2D coordinates where
/// mask membership is decided.
///
/// Inertial mode uses (x, y) of {0}. Local mode lifts a grid point vertically
/// onto the approximation plane and takes its (x, y) in {A}; measurement
/// points are expressed in {A} directly.
class MaskProjector {
 public:
  static MaskProjector inertial() { return MaskProjector(); }
  static MaskProjector local(const Plane& plane, const LocalFrame& frame) {
    return MaskProjector(plane, frame);
  }
  static MaskProjector for_mode(FrameMode mode, const Plane& plane, const LocalFrame& frame) {
    return mode == FrameMode::kLocalA ? local(plane, frame) : inertial();
  }

  bool is_local() const { return local_; }
  Eigen::Vector2d cell(double x, double y) const;
  Eigen::Vector2d point(const Point3& p) const;

  /// Inclusive index window that contains every grid point whose projection
  /// falls in the box [lo, hi]. Empty when first > last.
  struct Window {
    std::size_t i0{1}, i1{0}, j0{1}, j1{0};
    bool empty() const { return i0 > i1 || j0 > j1; }
  };
  Window window(const GridSpec& spec, const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) const;

 private:
  MaskProjector() = default;
  MaskProjector(const Plane& plane, const LocalFrame& frame)
      : local_(true), plane_(plane), frame_(frame) {}

  bool local_{false};
  Plane plane_;
  LocalFrame frame_;
};

/// Axis-aligned bounding box of the projected points (closed).
BinaryMask roi_mask(const GridSpec& spec, std::span<const Point3> points,
                    const MaskProjector& proj);

/// Closed triangle; vertex order is irrelevant. Collinear vertices give an
/// empty mask with degenerate() set.
BinaryMask triangle_mask(const GridSpec& spec, const Point3& p1, const Point3& p2,
                         const Point3& p3, const MaskProjector& proj);

/// Closed disk centred on the projected centroid whose radius reaches the
/// farthest projected point.
BinaryMask largest_circle_mask(const GridSpec& spec, std::span<const Point3> points,
                               const MaskProjector& proj);

/// Union of closed disks of the given radius around each projected point.
BinaryMask cap_mask(const GridSpec& spec, std::span<const Point3> points, double radius,
                    const MaskProjector& proj);

/// Binary dilation with a 3x3 structuring element applied `steps` times,
/// i.e. every cell within Chebyshev distance `steps` of a set cell.
BinaryMask dilate(const BinaryMask& mask, int steps);

/// Builds the mask of the configured kind, then dilates it.
BinaryMask build_mask(const MaskSpec& mask_spec, const GridSpec& spec, const Plane& plane,
                      const LocalFrame& frame, std::span<const Point3> points);

/// Plain PBM (P1) raster, one text row per grid row j = 0 .. ny-1.
std::string to_pbm(const BinaryMask& mask);

}  // namespace surfmap
