#include "surfmap/masks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "surfmap/error.hpp"

namespace surfmap {

std::string_view to_string(MaskKind kind) {
  switch (kind) {
    case MaskKind::kRoi: return "roi";
    case MaskKind::kTriangle: return "triangle";
    case MaskKind::kLargestCircle: return "largest_circle";
    case MaskKind::kCap: return "cap";
  }
  return "unknown";
}

std::string_view to_string(FrameMode mode) {
  return mode == FrameMode::kLocalA ? "local_a" : "inertial_xy";
}

MaskKind parse_mask_kind(std::string_view name) {
  for (auto k : {MaskKind::kRoi, MaskKind::kTriangle, MaskKind::kLargestCircle, MaskKind::kCap}) {
    if (to_string(k) == name) return k;
  }
  throw Error(Errc::kConfig, "unknown mask kind '" + std::string(name) + "'");
}

FrameMode parse_frame_mode(std::string_view name) {
  if (name == "local_a") return FrameMode::kLocalA;
  if (name == "inertial_xy") return FrameMode::kInertialXy;
  throw Error(Errc::kConfig, "unknown frame mode '" + std::string(name) + "'");
}

void MaskSpec::validate() const {
  if (kind == MaskKind::kCap && !(cap_radius > 0.0)) {
    throw Error(Errc::kConfig, "cap radius must be positive");
  }
  if (dilation_steps < 0) throw Error(Errc::kConfig, "dilation steps must be nonnegative");
}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> BinaryMask::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k]) out.push_back(k);
  }
  return out;
}

bool BinaryMask::is_subset_of(const BinaryMask& other) const {
  if (!(spec_ == other.spec_)) return false;
  for (std::size_t k = 0; k < bits_.size(); ++k) {
    if (bits_[k] && !other.bits_[k]) return false;
  }
  return true;
}

Eigen::Vector2d MaskProjector::cell(double x, double y) const {
  if (!local_) return {x, y};
  return to_local(frame_, Point3(x, y, plane_height_at(plane_, x, y))).head<2>();
}

Eigen::Vector2d MaskProjector::point(const Point3& p) const {
  if (!local_) return p.head<2>();
  return to_local(frame_, p).head<2>();
}

MaskProjector::Window MaskProjector::window(const GridSpec& spec, const Eigen::Vector2d& lo,
                                            const Eigen::Vector2d& hi) const {
  double x_lo = lo.x(), x_hi = hi.x(), y_lo = lo.y(), y_hi = hi.y();
  if (local_) {
    x_lo = y_lo = std::numeric_limits<double>::infinity();
    x_hi = y_hi = -std::numeric_limits<double>::infinity();
    for (double u : {lo.x(), hi.x()}) {
      for (double v : {lo.y(), hi.y()}) {
        const Point3 q = from_local(frame_, Point3(u, v, 0.0));
        x_lo = std::min(x_lo, q.x());
        x_hi = std::max(x_hi, q.x());
        y_lo = std::min(y_lo, q.y());
        y_hi = std::max(y_hi, q.y());
      }
    }
  }
  // One cell of slack on each side absorbs rounding in the projection.
  auto axis = [](double a, double b, double origin, double step, std::size_t count,
                 std::size_t& first, std::size_t& last) {
    const double f = std::floor((a - origin) / step) - 1.0;
    const double l = std::ceil((b - origin) / step) + 1.0;
    if (!std::isfinite(f) || !std::isfinite(l) || l < 0.0 || f > static_cast<double>(count - 1)) {
      first = 1;
      last = 0;
      return;
    }
    first = static_cast<std::size_t>(std::max(0.0, f));
    last = static_cast<std::size_t>(std::min(static_cast<double>(count - 1), l));
  };
  Window w;
  axis(x_lo, x_hi, spec.x_min, spec.step_x(), spec.nx, w.i0, w.i1);
  axis(y_lo, y_hi, spec.y_min, spec.step_y(), spec.ny, w.j0, w.j1);
  if (w.i0 > w.i1 || w.j0 > w.j1) w = Window{};
  return w;
}

namespace {

template <class Inside>
BinaryMask rasterize(const GridSpec& spec, const MaskProjector& proj, const Eigen::Vector2d& lo,
                     const Eigen::Vector2d& hi, Inside inside) {
  BinaryMask mask(spec);
  const auto w = proj.window(spec, lo, hi);
  if (w.empty()) return mask;
  for (std::size_t j = w.j0; j <= w.j1; ++j) {
    const double y = spec.y_at(j);
    for (std::size_t i = w.i0; i <= w.i1; ++i) {
      if (inside(proj.cell(spec.x_at(i), y))) mask.set(i, j);
    }
  }
  return mask;
}

std::vector<Eigen::Vector2d> project_all(std::span<const Point3> points,
                                         const MaskProjector& proj) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(proj.point(p));
  return out;
}

void bounds(const std::vector<Eigen::Vector2d>& pts, Eigen::Vector2d& lo, Eigen::Vector2d& hi) {
  lo = pts.front();
  hi = pts.front();
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
}

// Twice the signed area of (a, b, c); positive for counter-clockwise order.
double signed_area2(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

}  // namespace

BinaryMask roi_mask(const GridSpec& spec, std::span<const Point3> points,
                    const MaskProjector& proj) {
  if (points.empty()) return BinaryMask(spec);
  Eigen::Vector2d lo, hi;
  bounds(project_all(points, proj), lo, hi);
  return rasterize(spec, proj, lo, hi, [&](const Eigen::Vector2d& q) {
    return q.x() >= lo.x() && q.x() <= hi.x() && q.y() >= lo.y() && q.y() <= hi.y();
  });
}

BinaryMask triangle_mask(const GridSpec& spec, const Point3& p1, const Point3& p2,
                         const Point3& p3, const MaskProjector& proj) {
  Eigen::Vector2d a = proj.point(p1);
  Eigen::Vector2d b = proj.point(p2);
  Eigen::Vector2d c = proj.point(p3);

  const double area2 = signed_area2(a, b, c);
  const double scale = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(),
                                 (a - c).squaredNorm()});
  if (!(std::abs(area2) > 1e-12 * scale)) {
    BinaryMask empty(spec);
    empty.set_degenerate(true);
    return empty;
  }
  if (area2 < 0.0) std::swap(b, c);

  // Edge functions a_k >= 0 hold on the closed interior of a CCW triangle.
  auto edge = [](const Eigen::Vector2d& from, const Eigen::Vector2d& to, const Eigen::Vector2d& q) {
    return (q.y() - from.y()) * (to.x() - from.x()) - (to.y() - from.y()) * (q.x() - from.x());
  };
  const Eigen::Vector2d lo = a.cwiseMin(b).cwiseMin(c);
  const Eigen::Vector2d hi = a.cwiseMax(b).cwiseMax(c);
  return rasterize(spec, proj, lo, hi, [&](const Eigen::Vector2d& q) {
    return edge(a, b, q) >= 0.0 && edge(b, c, q) >= 0.0 && edge(c, a, q) >= 0.0;
  });
}

BinaryMask largest_circle_mask(const GridSpec& spec, std::span<const Point3> points,
                               const MaskProjector& proj) {
  if (points.empty()) return BinaryMask(spec);
  Point3 centroid = Point3::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());
  const Eigen::Vector2d center = proj.point(centroid);

  double r2 = 0.0;
  for (const auto& p : project_all(points, proj)) {
    r2 = std::max(r2, (p - center).squaredNorm());
  }
  const double r = std::sqrt(r2);
  const Eigen::Vector2d reach(r, r);
  return rasterize(spec, proj, center - reach, center + reach,
                   [&](const Eigen::Vector2d& q) { return (q - center).squaredNorm() <= r2; });
}

BinaryMask cap_mask(const GridSpec& spec, std::span<const Point3> points, double radius,
                    const MaskProjector& proj) {
  if (!(radius > 0.0)) throw Error(Errc::kConfig, "cap radius must be positive");
  if (points.empty()) return BinaryMask(spec);
  const auto centers = project_all(points, proj);
  const double r2 = radius * radius;
  Eigen::Vector2d lo, hi;
  bounds(centers, lo, hi);
  const Eigen::Vector2d reach(radius, radius);
  return rasterize(spec, proj, lo - reach, hi + reach, [&](const Eigen::Vector2d& q) {
    for (const auto& c : centers) {
      if ((q - c).squaredNorm() <= r2) return true;
    }
    return false;
  });
}

BinaryMask dilate(const BinaryMask& mask, int steps) {
  if (steps <= 0) return mask;
  const GridSpec& spec = mask.spec();
  const auto nx = static_cast<std::ptrdiff_t>(spec.nx);
  const auto ny = static_cast<std::ptrdiff_t>(spec.ny);
  const std::ptrdiff_t s = steps;

  // Chebyshev dilation by s is separable: a row pass then a column pass,
  // each a sliding-window OR evaluated through prefix counts.
  std::vector<std::uint8_t> rows(spec.size(), 0);
  std::vector<int> prefix(static_cast<std::size_t>(std::max(nx, ny)) + 1);
  const auto src = mask.bits();
  for (std::ptrdiff_t j = 0; j < ny; ++j) {
    prefix[0] = 0;
    for (std::ptrdiff_t i = 0; i < nx; ++i) prefix[i + 1] = prefix[i] + src[j * nx + i];
    for (std::ptrdiff_t i = 0; i < nx; ++i) {
      const auto lo = std::max<std::ptrdiff_t>(0, i - s);
      const auto hi = std::min<std::ptrdiff_t>(nx - 1, i + s);
      rows[j * nx + i] = prefix[hi + 1] - prefix[lo] > 0;
    }
  }

  BinaryMask out(spec);
  auto dst = out.bits();
  for (std::ptrdiff_t i = 0; i < nx; ++i) {
    prefix[0] = 0;
    for (std::ptrdiff_t j = 0; j < ny; ++j) prefix[j + 1] = prefix[j] + rows[j * nx + i];
    for (std::ptrdiff_t j = 0; j < ny; ++j) {
      const auto lo = std::max<std::ptrdiff_t>(0, j - s);
      const auto hi = std::min<std::ptrdiff_t>(ny - 1, j + s);
      dst[j * nx + i] = prefix[hi + 1] - prefix[lo] > 0;
    }
  }
  out.set_degenerate(mask.degenerate());
  return out;
}

BinaryMask build_mask(const MaskSpec& mask_spec, const GridSpec& spec, const Plane& plane,
                      const LocalFrame& frame, std::span<const Point3> points) {
  const auto proj = MaskProjector::for_mode(mask_spec.frame_mode, plane, frame);
  BinaryMask mask(spec);
  switch (mask_spec.kind) {
    case MaskKind::kRoi:
      mask = roi_mask(spec, points, proj);
      break;
    case MaskKind::kTriangle:
      if (points.size() != 3) {
        throw Error(Errc::kInvalidSpec, "triangle mask requires exactly 3 measurement points");
      }
      mask = triangle_mask(spec, points[0], points[1], points[2], proj);
      break;
    case MaskKind::kLargestCircle:
      mask = largest_circle_mask(spec, points, proj);
      break;
    case MaskKind::kCap:
      mask = cap_mask(spec, points, mask_spec.cap_radius, proj);
      break;
  }
  return dilate(mask, mask_spec.dilation_steps);
}

std::string to_pbm(const BinaryMask& mask) {
  const GridSpec& spec = mask.spec();
  std::ostringstream os;
  os << "P1\n# rows are grid rows j = 0.." << spec.ny - 1 << " (y increasing)\n"
     << spec.nx << ' ' << spec.ny << '\n';
  for (std::size_t j = 0; j < spec.ny; ++j) {
    for (std::size_t i = 0; i < spec.nx; ++i) {
      if (i) os << ' ';
      os << (mask.test(i, j) ? '1' : '0');
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace surfmap
