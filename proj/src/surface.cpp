#include "surfmap/surface.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "surfmap/error.hpp"

namespace surfmap {

std::string_view to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::kFlat: return "flat";
    case SurfaceKind::kRamp: return "ramp";
    case SurfaceKind::kSinusoid: return "sinusoid";
    case SurfaceKind::kBump: return "bump";
    case SurfaceKind::kBowl: return "bowl";
  }
  return "unknown";
}

SurfaceKind parse_surface_kind(std::string_view name) {
  for (auto k : {SurfaceKind::kFlat, SurfaceKind::kRamp, SurfaceKind::kSinusoid,
                 SurfaceKind::kBump, SurfaceKind::kBowl}) {
    if (to_string(k) == name) return k;
  }
  throw Error(Errc::kConfig, "unknown surface model '" + std::string(name) + "'");
}

void SurfaceParams::validate() const {
  if (!(x_max > x_min) || !(y_max > y_min)) {
    throw Error(Errc::kConfig, "surface domain must satisfy max > min");
  }
  if (kind == SurfaceKind::kSinusoid && !(wavelength_x > 0.0 && wavelength_y > 0.0)) {
    throw Error(Errc::kConfig, "sinusoid wavelengths must be positive");
  }
  if ((kind == SurfaceKind::kBump || kind == SurfaceKind::kBowl) &&
      !(rim_radius > 0.0 && sphere_radius > rim_radius)) {
    throw Error(Errc::kConfig, "cap models need sphere_radius > rim_radius > 0");
  }
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double cap_sign(SurfaceKind kind) { return kind == SurfaceKind::kBowl ? -1.0 : 1.0; }

}  // namespace

SurfaceModel::SurfaceModel(const SurfaceParams& params) : params_(params) {
  params_.validate();
  const auto& p = params_;
  switch (p.kind) {
    case SurfaceKind::kFlat:
      max_slope_ = 0.0;
      break;
    case SurfaceKind::kRamp:
      max_slope_ = std::hypot(p.slope_x, p.slope_y);
      break;
    case SurfaceKind::kSinusoid:
      max_slope_ = std::hypot(p.amplitude_x * kTwoPi / p.wavelength_x,
                              p.amplitude_y * kTwoPi / p.wavelength_y);
      break;
    case SurfaceKind::kBump:
    case SurfaceKind::kBowl:
      max_slope_ = p.rim_radius /
                   std::sqrt(p.sphere_radius * p.sphere_radius - p.rim_radius * p.rim_radius);
      break;
  }
}

bool SurfaceModel::in_domain(double x, double y) const {
  return x >= params_.x_min && x <= params_.x_max && y >= params_.y_min && y <= params_.y_max;
}

double SurfaceModel::height(double x, double y) const {
  const auto& p = params_;
  switch (p.kind) {
    case SurfaceKind::kFlat:
      return p.offset;
    case SurfaceKind::kRamp:
      return p.offset + p.slope_x * x + p.slope_y * y;
    case SurfaceKind::kSinusoid:
      return p.offset + p.amplitude_x * std::sin(kTwoPi * x / p.wavelength_x + p.phase_x) +
             p.amplitude_y * std::sin(kTwoPi * y / p.wavelength_y + p.phase_y);
    case SurfaceKind::kBump:
    case SurfaceKind::kBowl: {
      const double rho2 = (x - p.center_x) * (x - p.center_x) + (y - p.center_y) * (y - p.center_y);
      const double a2 = p.rim_radius * p.rim_radius;
      if (rho2 >= a2) return p.offset;
      const double s2 = p.sphere_radius * p.sphere_radius;
      return p.offset + cap_sign(p.kind) * (std::sqrt(s2 - rho2) - std::sqrt(s2 - a2));
    }
  }
  return 0.0;
}

Eigen::Vector2d SurfaceModel::gradient(double x, double y) const {
  const auto& p = params_;
  switch (p.kind) {
    case SurfaceKind::kFlat:
      return Eigen::Vector2d::Zero();
    case SurfaceKind::kRamp:
      return {p.slope_x, p.slope_y};
    case SurfaceKind::kSinusoid: {
      const double kx = kTwoPi / p.wavelength_x;
      const double ky = kTwoPi / p.wavelength_y;
      return {p.amplitude_x * kx * std::cos(kx * x + p.phase_x),
              p.amplitude_y * ky * std::cos(ky * y + p.phase_y)};
    }
    case SurfaceKind::kBump:
    case SurfaceKind::kBowl: {
      const double dx = x - p.center_x;
      const double dy = y - p.center_y;
      const double rho2 = dx * dx + dy * dy;
      if (rho2 >= p.rim_radius * p.rim_radius) return Eigen::Vector2d::Zero();
      const double w = std::sqrt(p.sphere_radius * p.sphere_radius - rho2);
      return -cap_sign(p.kind) * Eigen::Vector2d(dx / w, dy / w);
    }
  }
  return Eigen::Vector2d::Zero();
}

Eigen::Matrix2d SurfaceModel::hessian(double x, double y) const {
  const auto& p = params_;
  Eigen::Matrix2d h = Eigen::Matrix2d::Zero();
  switch (p.kind) {
    case SurfaceKind::kFlat:
    case SurfaceKind::kRamp:
      break;
    case SurfaceKind::kSinusoid: {
      const double kx = kTwoPi / p.wavelength_x;
      const double ky = kTwoPi / p.wavelength_y;
      h(0, 0) = -p.amplitude_x * kx * kx * std::sin(kx * x + p.phase_x);
      h(1, 1) = -p.amplitude_y * ky * ky * std::sin(ky * y + p.phase_y);
      break;
    }
    case SurfaceKind::kBump:
    case SurfaceKind::kBowl: {
      const double dx = x - p.center_x;
      const double dy = y - p.center_y;
      const double rho2 = dx * dx + dy * dy;
      if (rho2 >= p.rim_radius * p.rim_radius) break;
      const double w2 = p.sphere_radius * p.sphere_radius - rho2;
      const double w = std::sqrt(w2);
      const double w3 = w2 * w;
      const double s = -cap_sign(p.kind);
      h(0, 0) = s * (1.0 / w + dx * dx / w3);
      h(1, 1) = s * (1.0 / w + dy * dy / w3);
      h(0, 1) = h(1, 0) = s * dx * dy / w3;
      break;
    }
  }
  return h;
}

SurfaceSample SurfaceModel::eval(double x, double y) const {
  if (!in_domain(x, y)) throw Error(Errc::kOutOfDomain, "point outside surface domain");
  const Eigen::Vector2d g = gradient(x, y);
  return {height(x, y), Eigen::Vector3d(-g.x(), -g.y(), 1.0).normalized()};
}

double SurfaceModel::curvature(double x, double y) const {
  // Shape operator of a graph: I^-1 II with II = H / sqrt(1 + |grad|^2).
  const Eigen::Vector2d g = gradient(x, y);
  Eigen::Matrix2d first;
  first << 1.0 + g.x() * g.x(), g.x() * g.y(), g.x() * g.y(), 1.0 + g.y() * g.y();
  const Eigen::Matrix2d second = hessian(x, y) / std::sqrt(1.0 + g.squaredNorm());
  const Eigen::Matrix2d shape = first.inverse() * second;
  const auto ev = shape.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(1)));
}

double SurfaceModel::min_curvature_radius(double step) const {
  const auto& p = params_;
  const bool cap = p.kind == SurfaceKind::kBump || p.kind == SurfaceKind::kBowl;
  double kappa = 0.0;
  for (double y = p.y_min; y <= p.y_max; y += step) {
    for (double x = p.x_min; x <= p.x_max; x += step) {
      if (cap && std::hypot(x - p.center_x, y - p.center_y) >= p.rim_radius) continue;
      kappa = std::max(kappa, curvature(x, y));
    }
  }
  return kappa > 0.0 ? 1.0 / kappa : std::numeric_limits<double>::infinity();
}

RayHit ray_intersect(const SurfaceModel& model, const Point3& origin,
                     const Eigen::Vector3d& direction, double t_max) {
  const Eigen::Vector3d dir = direction.normalized();
  auto gap = [&](double t, bool& inside) {
    const Point3 q = origin + t * dir;
    inside = model.in_domain(q.x(), q.y());
    return inside ? q.z() - model.height(q.x(), q.y()) : 0.0;
  };

  bool inside = false;
  double f = gap(0.0, inside);
  if (!inside) throw Error(Errc::kOutOfDomain, "ray origin outside surface domain");
  if (!(f > 0.0)) throw Error(Errc::kNoIntersection, "ray origin is not above the surface");

  // The vertical gap shrinks at most at rate `lipschitz` per unit of t, so a
  // step of gap / lipschitz cannot jump over the first crossing.
  const double lipschitz = std::abs(dir.z()) + model.max_slope() * dir.head<2>().norm();
  if (!(lipschitz > 0.0)) throw Error(Errc::kNoIntersection, "ray parallel to flat surface");
  constexpr double kMinStep = 0.01;

  double t_prev = 0.0;
  double t = 0.0;
  for (;;) {
    t_prev = t;
    t += std::max(f / lipschitz, kMinStep);
    if (t > t_max) throw Error(Errc::kNoIntersection, "no surface crossing within range");
    f = gap(t, inside);
    if (!inside) throw Error(Errc::kOutOfDomain, "ray left the surface domain");
    if (f <= 0.0) break;
  }

  double lo = t_prev;
  double hi = t;
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    if (gap(mid, inside) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t_hit = 0.5 * (lo + hi);
  return {origin + t_hit * dir, t_hit};
}

}  // namespace surfmap
