#include "surfmap/simulator.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "surfmap/error.hpp"

namespace surfmap {

namespace {

constexpr std::array<double, 3> kAzimuthDeg{90.0, 210.0, 330.0};

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

void SensorRig::validate() const {
  if (!(tilt_deg > 0.0 && tilt_deg < 90.0)) throw Error(Errc::kConfig, "tilt must be in (0, 90) deg");
  if (!(range_min >= 0.0 && range_max > range_min)) {
    throw Error(Errc::kConfig, "sensor range must satisfy 0 <= min < max");
  }
  if (!(mount_radius > 0.0)) throw Error(Errc::kConfig, "mount radius must be positive");
  if (!(resolution >= 0.0)) throw Error(Errc::kConfig, "sensor resolution must be nonnegative");
}

Point3 SensorRig::mount(int sensor) const {
  const double a = deg2rad(kAzimuthDeg.at(sensor));
  return {mount_radius * std::cos(a), mount_radius * std::sin(a), 0.0};
}

Eigen::Vector3d SensorRig::beam(int sensor) const {
  const double a = deg2rad(kAzimuthDeg.at(sensor));
  const double t = deg2rad(tilt_deg);
  return {-std::sin(t) * std::cos(a), -std::sin(t) * std::sin(a), -std::cos(t)};
}

double SensorRig::convergence_depth() const { return mount_radius / std::tan(deg2rad(tilt_deg)); }

std::string_view to_string(TrajectoryKind kind) {
  return kind == TrajectoryKind::kConstantHeight ? "constant_height" : "surface_tracking";
}

TrajectoryKind parse_trajectory_kind(std::string_view name) {
  if (name == "constant_height") return TrajectoryKind::kConstantHeight;
  if (name == "surface_tracking") return TrajectoryKind::kSurfaceTracking;
  throw Error(Errc::kConfig, "unknown trajectory kind '" + std::string(name) + "'");
}

void TrajectoryPlan::validate() const {
  if (lines < 0) throw Error(Errc::kConfig, "line count must be nonnegative");
  if (!(line_spacing > 0.0 && speed > 0.0 && sample_rate > 0.0)) {
    throw Error(Errc::kConfig, "line spacing, speed and sample rate must be positive");
  }
  if (!(area.x_max >= area.x_min && area.y_max >= area.y_min)) {
    throw Error(Errc::kConfig, "scan area must satisfy max >= min");
  }
  if (kind == TrajectoryKind::kSurfaceTracking && !(standoff > 0.0)) {
    throw Error(Errc::kConfig, "standoff must be positive");
  }
}

std::vector<PlannedPose> plan_raster(const TrajectoryPlan& plan, const SurfaceModel& model) {
  plan.validate();
  std::vector<PlannedPose> poses;
  if (plan.lines == 0) return poses;

  const auto& a = plan.area;
  const double y_last = a.y_min + (plan.lines - 1) * plan.line_spacing;
  if (!model.in_domain(a.x_min, a.y_min) || !model.in_domain(a.x_max, a.y_max) ||
      !model.in_domain(a.x_max, y_last)) {
    throw Error(Errc::kAreaOutsideDomain, "scan area exceeds the surface domain");
  }

  const double dt = 1.0 / plan.sample_rate;
  const double ds = plan.speed * dt;
  const double length = a.x_max - a.x_min;
  const auto steps = static_cast<long>(std::floor(length / ds + 1e-9));
  double t = 0.0;

  for (int line = 0; line < plan.lines; ++line) {
    const double y = a.y_min + line * plan.line_spacing;
    const bool forward = line % 2 == 0;
    if (line > 0) t += plan.line_spacing / plan.speed;
    for (long s = 0; s <= steps; ++s) {
      const double along = static_cast<double>(s) * ds;
      const double x = forward ? a.x_min + along : a.x_max - along;
      Pose pose;
      if (plan.kind == TrajectoryKind::kConstantHeight) {
        pose.position = Point3(x, y, plan.height);
      } else {
        const auto ground = model.eval(x, y);
        pose.position = Point3(x, y, ground.z) + plan.standoff * ground.normal;
        pose.rotation = Eigen::Quaterniond::FromTwoVectors(Eigen::Vector3d::UnitZ(), ground.normal);
      }
      poses.push_back({t, pose});
      if (s < steps) t += dt;
    }
  }
  return poses;
}

void NoiseModel::validate() const {
  if (!(quantum >= 0.0 && bias_amplitude >= 0.0 && white_sigma >= 0.0 && pose_sigma_mm >= 0.0 &&
        pose_sigma_rad >= 0.0 && pose_delay >= 0)) {
    throw Error(Errc::kConfig, "noise parameters must be nonnegative");
  }
  if (!(bias_period > 0.0)) throw Error(Errc::kConfig, "bias period must be positive");
}

std::array<RayHit, 3> cast_beams(const SurfaceModel& model, const SensorRig& rig,
                                 const Pose& pose) {
  const Eigen::Matrix3d rot = pose.rotation.toRotationMatrix();
  std::array<RayHit, 3> hits;
  for (int s = 0; s < 3; ++s) {
    const Point3 origin = pose.position + rot * rig.mount(s);
    hits[s] = ray_intersect(model, origin, rot * rig.beam(s), rig.range_max);
    if (hits[s].distance < rig.range_min) {
      throw Error(Errc::kNoIntersection, "surface closer than the sensor range");
    }
  }
  return hits;
}

SimulationResult simulate_scan(const SurfaceModel& model, const SensorRig& rig,
                               const TrajectoryPlan& plan, const NoiseModel& noise) {
  rig.validate();
  noise.validate();
  if (noise.bias_amplitude > rig.max_linearity_error) {
    throw Error(Errc::kConfig, "bias amplitude exceeds the sensor linearity bound");
  }
  const auto planned = plan_raster(plan, model);

  std::mt19937_64 rng(noise.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
  std::array<double, 3> bias_phase{};
  for (auto& ph : bias_phase) ph = uniform(rng);

  SimulationResult result;
  result.samples.reserve(planned.size());
  for (std::size_t k = 0; k < planned.size(); ++k) {
    std::array<double, 3> distance{};
    try {
      const auto hits = cast_beams(model, rig, planned[k].pose);
      for (int s = 0; s < 3; ++s) distance[s] = hits[s].distance;
    } catch (const Error& e) {
      std::ostringstream os;
      os << "t=" << planned[k].timestamp << " sample " << k << ": " << e.what();
      result.gaps.push_back(os.str());
      continue;
    }

    const std::size_t src = k >= static_cast<std::size_t>(noise.pose_delay) ? k - noise.pose_delay : 0;
    Pose reported = planned[src].pose;
    const Eigen::Vector3d dp(gauss(rng), gauss(rng), gauss(rng));
    const Eigen::Vector3d dr(gauss(rng), gauss(rng), gauss(rng));
    reported.position += noise.pose_sigma_mm * dp;
    const Eigen::Vector3d rotvec = noise.pose_sigma_rad * dr;
    if (rotvec.norm() > 0.0) {
      reported.rotation =
          (reported.rotation * Eigen::Quaterniond(Eigen::AngleAxisd(rotvec.norm(), rotvec.normalized())))
              .normalized();
    }
    const Eigen::Matrix3d rot = reported.rotation.toRotationMatrix();

    MeasurementSample sample;
    sample.timestamp = planned[k].timestamp;
    sample.pose = reported;
    for (int s = 0; s < 3; ++s) {
      double d = distance[s];
      d += noise.bias_amplitude *
           std::sin(2.0 * std::numbers::pi * d / noise.bias_period + bias_phase[s]);
      d += noise.white_sigma * gauss(rng);
      if (noise.quantum > 0.0) d = noise.quantum * std::round(d / noise.quantum);
      sample.points[s] = reported.position + rot * rig.mount(s) + d * (rot * rig.beam(s));
    }
    result.samples.push_back(sample);
  }
  return result;
}

}  // namespace surfmap
