#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "surfmap/error.hpp"
#include "surfmap/surface.hpp"

using namespace surfmap;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no exception";
  return Errc::kData;
}

SurfaceParams flat(double z) {
  SurfaceParams p;
  p.kind = SurfaceKind::kFlat;
  p.offset = z;
  return p;
}

}  // namespace

TEST(Surface, FlatNormal) {
  const SurfaceModel m(flat(10));
  for (double x : {0.0, 123.4, 500.0})
    for (double y : {0.0, 77.0, 200.0}) {
      const auto s = m.eval(x, y);
      EXPECT_EQ(s.z, 10.0);
      EXPECT_EQ(s.normal, Eigen::Vector3d(0, 0, 1));
    }
  EXPECT_EQ(code_of([&] { m.eval(-0.1, 5); }), Errc::kOutOfDomain);
  EXPECT_EQ(code_of([&] { surface_eval(m, 5, 200.1); }), Errc::kOutOfDomain);
}

TEST(Surface, RampNormal) {
  SurfaceParams p;
  p.kind = SurfaceKind::kRamp;
  p.offset = 1;
  p.slope_x = 0.5;
  p.slope_y = -0.25;
  const SurfaceModel m(p);
  const auto s = m.eval(10, 20);
  EXPECT_NEAR(s.z, 1 + 5 - 5, 1e-12);
  EXPECT_NEAR((s.normal - Eigen::Vector3d(-0.5, 0.25, 1).normalized()).norm(), 0, 1e-12);
  EXPECT_NEAR(m.max_slope(), std::hypot(0.5, 0.25), 1e-12);
}

TEST(Surface, SinusoidCurvatureRadius) {
  // A k^2 = 1/20 with A = 15, lambda = 2 pi sqrt(300)
  SurfaceParams p;
  p.kind = SurfaceKind::kSinusoid;
  p.offset = 0;
  p.amplitude_x = 15;
  p.wavelength_x = 2 * M_PI * std::sqrt(300.0);
  p.amplitude_y = 0;
  const SurfaceModel m(p);
  EXPECT_NEAR(m.min_curvature_radius(), 20.0, 0.1);
  EXPECT_NEAR(1.0 / m.curvature(p.wavelength_x / 4, 50), 20.0, 1e-9);
}

TEST(Surface, DefaultSinusoidMatchesTargets) {
  const SurfaceModel m{SurfaceParams{}};
  EXPECT_GE(m.min_curvature_radius(), 20.0 - 0.1);
  EXPECT_LE(m.min_curvature_radius(), 20.0 + 0.1);
  double lo = 1e9, hi = -1e9;
  for (double x = 0; x <= 500; x += 0.5)
    for (double y = 0; y <= 200; y += 0.5) {
      lo = std::min(lo, m.height(x, y));
      hi = std::max(hi, m.height(x, y));
    }
  EXPECT_LE(hi - lo, 30.0 + 1e-9);
  EXPECT_GT(hi - lo, 29.0);
}

TEST(Surface, GradientMatchesFiniteDifferences) {
  for (auto kind : {SurfaceKind::kSinusoid, SurfaceKind::kBump, SurfaceKind::kBowl}) {
    SurfaceParams p;
    p.kind = kind;
    const SurfaceModel m(p);
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> ux(1, 499), uy(1, 199);
    double worst = 0;
    int checked = 0;
    while (checked < 1000) {
      const double x = ux(rng), y = uy(rng);
      const double rr = std::hypot(x - p.center_x, y - p.center_y);
      if (kind != SurfaceKind::kSinusoid && std::abs(rr - p.rim_radius) < 0.01) continue;
      const double h = 1e-5;
      const Eigen::Vector2d fd((m.height(x + h, y) - m.height(x - h, y)) / (2 * h),
                               (m.height(x, y + h) - m.height(x, y - h)) / (2 * h));
      const Eigen::Vector2d g = m.gradient(x, y);
      worst = std::max(worst, (g - fd).norm() / std::max(1e-3, g.norm()));
      ++checked;
    }
    EXPECT_LE(worst, 1e-6) << to_string(kind);
  }
}

TEST(Surface, HessianMatchesFiniteDifferences) {
  const SurfaceModel m{SurfaceParams{}};
  std::mt19937_64 rng(103);
  std::uniform_real_distribution<double> ux(1, 499), uy(1, 199);
  for (int k = 0; k < 200; ++k) {
    const double x = ux(rng), y = uy(rng), h = 1e-5;
    Eigen::Matrix2d fd;
    fd.col(0) = (m.gradient(x + h, y) - m.gradient(x - h, y)) / (2 * h);
    fd.col(1) = (m.gradient(x, y + h) - m.gradient(x, y - h)) / (2 * h);
    EXPECT_LE((m.hessian(x, y) - fd).norm(), 1e-6);
  }
}

TEST(Surface, CapShapes) {
  SurfaceParams p;
  p.kind = SurfaceKind::kBump;
  p.offset = 0;
  const SurfaceModel bump(p);
  const double apex = std::sqrt(100.0 * 100 - 0.0) - std::sqrt(100.0 * 100 - 60.0 * 60);
  EXPECT_NEAR(bump.height(250, 100), apex, 1e-9);
  EXPECT_NEAR(bump.height(250 + 60, 100), 0, 1e-9);
  EXPECT_EQ(bump.height(10, 10), 0);
  EXPECT_NEAR(bump.min_curvature_radius(), 100, 0.1);
  p.kind = SurfaceKind::kBowl;
  EXPECT_NEAR(SurfaceModel(p).height(250, 100), -apex, 1e-9);
}

TEST(Ray, VerticalOntoFlat) {
  const SurfaceModel m(flat(10));
  const RayHit h = ray_intersect(m, {0, 0, 100}, {0, 0, -1});
  EXPECT_NEAR((h.point - Point3(0, 0, 10)).norm(), 0, 1e-6);
  EXPECT_NEAR(h.distance, 90, 1e-6);
}

TEST(Ray, TiltedOntoFlat) {
  const SurfaceModel m(flat(10));
  const double t = M_PI / 6;
  const RayHit h = ray_intersect(m, {100, 100, 100}, {std::sin(t), 0, -std::cos(t)});
  EXPECT_NEAR(h.point.x(), 100 + 90 * std::tan(t), 1e-6);
  EXPECT_NEAR(h.point.y(), 100, 1e-12);
  EXPECT_NEAR(h.distance, 90 / std::cos(t), 1e-6);
}

TEST(Ray, ResidualOnCurvedSurfaces) {
  for (auto kind : {SurfaceKind::kSinusoid, SurfaceKind::kBump, SurfaceKind::kBowl}) {
    SurfaceParams p;
    p.kind = kind;
    const SurfaceModel m(p);
    std::mt19937_64 rng(107);
    std::uniform_real_distribution<double> ux(100, 400), uy(60, 140), ua(-0.6, 0.6);
    for (int k = 0; k < 500; ++k) {
      const Point3 o(ux(rng), uy(rng), 90);
      const Eigen::Vector3d d = Eigen::Vector3d(ua(rng), ua(rng), -1).normalized();
      const RayHit h = ray_intersect(m, o, d);
      EXPECT_LE(std::abs(h.point.z() - m.height(h.point.x(), h.point.y())), 1e-5);
      // nothing crossed earlier along the ray
      for (double s = 0; s < h.distance - 1e-3; s += 0.05) {
        const Point3 q = o + s * d;
        ASSERT_GT(q.z(), m.height(q.x(), q.y()) - 1e-9);
      }
    }
  }
}

TEST(Ray, Errors) {
  const SurfaceModel m(flat(10));
  EXPECT_EQ(code_of([&] { ray_intersect(m, {5, 5, 100}, {0, 0, 1}); }), Errc::kNoIntersection);
  EXPECT_EQ(code_of([&] { ray_intersect(m, {5, 5, 100}, {0, 0, -1}, 50); }), Errc::kNoIntersection);
  EXPECT_EQ(code_of([&] { ray_intersect(m, {5, 5, 5}, {0, 0, -1}); }), Errc::kNoIntersection);
  EXPECT_EQ(code_of([&] { ray_intersect(m, {5, 5, 100}, Eigen::Vector3d(-1, 0, -0.1).normalized()); }),
            Errc::kOutOfDomain);
}
