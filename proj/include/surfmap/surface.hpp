#pragma once

#include <string_view>
#include <utility>

#include <Eigen/Core>

#include "surfmap/geometry.hpp"

namespace surfmap {

enum class SurfaceKind {
  kFlat,      ///< z = offset
  kRamp,      ///< z = offset + slope_x x + slope_y y
  kSinusoid,  ///< z = offset + A_x sin(2 pi x / L_x + phi_x) + A_y sin(2 pi y / L_y + phi_y)
  kBump,      ///< spherical cap rising above `offset`, flat outside the rim
  kBowl,      ///< spherical dish sinking below `offset`, flat outside the rim
};

std::string_view to_string(SurfaceKind kind);
SurfaceKind parse_surface_kind(std::string_view name);

/// Ground-truth surface parameters, all lengths in mm. Only the fields of the
/// selected kind are used.
struct SurfaceParams {
  SurfaceKind kind{SurfaceKind::kSinusoid};
  double x_min{0.0};
  double x_max{500.0};
  double y_min{0.0};
  double y_max{200.0};
  double offset{20.0};

  double slope_x{0.0};
  double slope_y{0.0};

  // Defaults give a 30 mm height span and a 20 mm minimum curvature radius
  // (A k^2 = 1/20 on both axes).
  double amplitude_x{10.0};
  double amplitude_y{5.0};
  double wavelength_x{88.85765876316732};  // 2 pi sqrt(200)
  double wavelength_y{62.83185307179586};  // 2 pi sqrt(100)
  double phase_x{0.0};
  double phase_y{0.0};

  double center_x{250.0};
  double center_y{100.0};
  double sphere_radius{100.0};
  double rim_radius{60.0};

  void validate() const;
};

struct SurfaceSample {
  double z;
  Eigen::Vector3d normal;
};

/// Analytic height field z = g(x, y) with closed-form derivatives.
class SurfaceModel {
 public:
  explicit SurfaceModel(const SurfaceParams& params);

  const SurfaceParams& params() const { return params_; }
  bool in_domain(double x, double y) const;

  /// g(x, y); no domain check.
  double height(double x, double y) const;
  /// (dg/dx, dg/dy); no domain check.
  Eigen::Vector2d gradient(double x, double y) const;
  /// Hessian of g; no domain check.
  Eigen::Matrix2d hessian(double x, double y) const;

  /// Height and upward unit normal. Throws Error(kOutOfDomain).
  SurfaceSample eval(double x, double y) const;

  /// Upper bound on |grad g| over the domain.
  double max_slope() const { return max_slope_; }

  /// Largest principal curvature magnitude at (x, y).
  double curvature(double x, double y) const;

  /// 1 / max curvature, found by scanning the domain at `step` mm.
  /// Cap models only scan inside the rim (the rim itself is a crease).
  double min_curvature_radius(double step = 0.5) const;

 private:
  SurfaceParams params_;
  double max_slope_{0.0};
};

inline SurfaceSample surface_eval(const SurfaceModel& model, double x, double y) {
  return model.eval(x, y);
}

struct RayHit {
  Point3 point;
  double distance;
};

/// First crossing of the ray origin + t * direction (t in [0, t_max]) with
/// the surface, bracketed by Lipschitz-safe marching and refined by
/// bisection. Throws Error(kNoIntersection) when the origin is not above
/// the surface or no crossing exists up to t_max, and Error(kOutOfDomain)
/// when the ray leaves the domain first.
RayHit ray_intersect(const SurfaceModel& model, const Point3& origin,
                     const Eigen::Vector3d& direction, double t_max = 1000.0);

}  // namespace surfmap
