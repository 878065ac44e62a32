#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "surfmap/geometry.hpp"
#include "surfmap/surface.hpp"

namespace surfmap {

/// End-effector pose in {0}. The tool axis (local +z) points away from the
/// surface; sensors look along local -z, tilted inward.
struct Pose {
  Point3 position{Point3::Zero()};
  Eigen::Quaterniond rotation{Eigen::Quaterniond::Identity()};
};

/// Three distance sensors on a circle around the tool axis at azimuths
/// 90, 210 and 330 degrees, each tilted toward the axis so that all rays
/// meet at one point below the flange. Sensors 2 and 3 share a y-coordinate
/// in the end-effector frame.
struct SensorRig {
  double mount_radius{45.0};  ///< mm
  double tilt_deg{30.0};
  double range_min{50.0};     ///< mm along the ray
  double range_max{300.0};
  double resolution{0.33};    ///< quantisation step of the reported distance
  double max_linearity_error{1.0};

  void validate() const;

  /// Sensor origin and unit beam direction in the end-effector frame.
  Point3 mount(int sensor) const;
  Eigen::Vector3d beam(int sensor) const;
  /// Depth along the tool axis where the three beams meet.
  double convergence_depth() const;
};

enum class TrajectoryKind { kConstantHeight, kSurfaceTracking };

std::string_view to_string(TrajectoryKind kind);
TrajectoryKind parse_trajectory_kind(std::string_view name);

struct ScanArea {
  double x_min{50.0};
  double x_max{450.0};
  double y_min{50.0};
  double y_max{150.0};
};

/// Boustrophedon raster: `lines` passes along x, spaced `line_spacing` in y
/// starting at area.y_min, alternating direction.
struct TrajectoryPlan {
  TrajectoryKind kind{TrajectoryKind::kSurfaceTracking};
  int lines{21};
  double line_spacing{5.0};   ///< mm
  double speed{25.0};         ///< mm/s
  double sample_rate{100.0};  ///< Hz
  double height{80.0};        ///< flange z for constant height, mm
  double standoff{64.0};      ///< flange-to-surface distance along the normal, mm
  ScanArea area;

  void validate() const;
};

struct PlannedPose {
  double timestamp;
  Pose pose;
};

/// Throws Error(kAreaOutsideDomain) if the area is not inside the model domain.
std::vector<PlannedPose> plan_raster(const TrajectoryPlan& plan, const SurfaceModel& model);

struct NoiseModel {
  std::uint64_t seed{1};
  double quantum{0.33};         ///< mm; 0 disables quantisation
  double bias_amplitude{0.5};   ///< mm, per-sensor b(d) = A sin(2 pi d / period + phase)
  double bias_period{40.0};     ///< mm
  double white_sigma{0.05};     ///< mm
  double pose_sigma_mm{0.0};
  double pose_sigma_rad{0.0};
  int pose_delay{0};            ///< samples

  void validate() const;
  static NoiseModel none() { return NoiseModel{1, 0.0, 0.0, 40.0, 0.0, 0.0, 0.0, 0}; }
};

struct MeasurementSample {
  double timestamp{0.0};
  Pose pose;
  std::array<Point3, 3> points;

  Point3 centroid() const { return (points[0] + points[1] + points[2]) / 3.0; }
};

struct SimulationResult {
  std::vector<MeasurementSample> samples;
  /// Poses for which at least one beam found no surface in range.
  std::vector<std::string> gaps;
};

/// Casts the three beams for every planned pose and applies the noise
/// pipeline: per-sensor bias, white noise, quantisation, then conversion to
/// points with the (optionally delayed and perturbed) reported pose.
/// Identical inputs give bit-identical output.
SimulationResult simulate_scan(const SurfaceModel& model, const SensorRig& rig,
                               const TrajectoryPlan& plan, const NoiseModel& noise);

/// Beam hit points for one pose without any noise.
std::array<RayHit, 3> cast_beams(const SurfaceModel& model, const SensorRig& rig,
                                 const Pose& pose);

}  // namespace surfmap
