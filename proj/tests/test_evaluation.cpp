#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "surfmap/error.hpp"
#include "surfmap/evaluation.hpp"

using namespace surfmap;

namespace {

SurfaceParams flat_domain(double x_max, double y_max) {
  SurfaceParams p;
  p.kind = SurfaceKind::kFlat;
  p.offset = 0;
  p.x_max = x_max;
  p.y_max = y_max;
  return p;
}

HeightGrid perfect(const GridSpec& spec, const SurfaceModel& m) {
  HeightGrid g(spec, 0, 1);
  for (std::size_t j = 0; j < spec.ny; ++j)
    for (std::size_t i = 0; i < spec.nx; ++i) g.at(i, j).z_hat = m.height(spec.x_at(i), spec.y_at(j));
  return g;
}

}  // namespace

TEST(Evaluate, PerfectGridIsZero) {
  const SurfaceModel m{SurfaceParams{}};
  const GridSpec spec{50, 450, 50, 150, 80, 20};  // 5 mm, lattice on cells
  const auto r = evaluate(perfect(spec, m), m, {});
  EXPECT_EQ(r.mean_abs_err, 0);
  EXPECT_EQ(r.max_abs_err, 0);
  EXPECT_EQ(r.std_dev, 0);
  EXPECT_EQ(r.counted, 80u * 20u);
  for (double e : error_map(perfect(spec, m), m)) EXPECT_EQ(e, 0);
}

TEST(Evaluate, UnmappedGridHasNoCountedCells) {
  const SurfaceModel m{SurfaceParams{}};
  const HeightGrid g(GridSpec{50, 450, 50, 150, 200, 50}, 0, 1e6);
  try {
    evaluate(g, m, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNoCountedCells);
  }
  for (double e : error_map(g, m)) EXPECT_TRUE(std::isnan(e));
}

TEST(Evaluate, ThreeCellHandExample) {
  const SurfaceModel m(flat_domain(12, 4));
  HeightGrid g(GridSpec{0, 15, 0, 5, 3, 1}, 0, 1);
  g.at(0, 0).z_hat = 1;
  g.at(1, 0).z_hat = -1;
  g.at(2, 0).z_hat = 2;
  const auto r = evaluate(g, m, {});
  EXPECT_EQ(r.counted, 3u);
  EXPECT_NEAR(r.mean_abs_err, 4.0 / 3, 1e-12);
  EXPECT_NEAR(r.max_abs_err, 2, 1e-12);
  // population: mean 2/3, E[e^2] = 6/3 -> var = 2 - 4/9 = 14/9
  EXPECT_NEAR(r.std_dev, std::sqrt(14.0 / 9), 1e-12);
  const auto s = summarize_errors({1, NAN, -1, 2});
  EXPECT_EQ(s.counted, 3u);
  EXPECT_NEAR(s.std_dev, std::sqrt(14.0 / 9), 1e-12);
}

TEST(Evaluate, NearestCellTiesLow) {
  // lattice point x = 5 sits between cells at 4 and 6 (2 mm grid)
  const SurfaceModel m(flat_domain(6, 1));
  HeightGrid g(GridSpec{0, 8, 0, 2, 4, 1}, 0, 1);
  g.at(2, 0).z_hat = 3;  // x = 4
  g.at(3, 0).z_hat = 7;  // x = 6
  const auto r = evaluate(g, m, {});
  EXPECT_EQ(r.counted, 2u);  // x = 0 and x = 5
  EXPECT_NEAR(r.max_abs_err, 3, 1e-12);
}

TEST(Evaluate, ThresholdMonotone) {
  const SurfaceModel m{SurfaceParams{}};
  const GridSpec spec{50, 450, 50, 150, 200, 50};
  HeightGrid g(spec, 0, 1);
  std::mt19937_64 rng(131);
  std::uniform_real_distribution<double> lp(0, 6);
  for (std::size_t c = 0; c < g.size(); ++c) g[c].p_hat = std::pow(10.0, lp(rng));
  std::size_t prev = 0;
  for (double t : {10.0, 100.0, 1e3, 1e4, 1e5, 1e7}) {
    EvaluationConfig cfg;
    cfg.covariance_threshold = t;
    const auto r = evaluate(g, m, cfg);
    EXPECT_GE(r.counted, prev);
    prev = r.counted;
  }
}

TEST(Evaluate, ReportAgreesWithErrorMap) {
  const SurfaceModel m{SurfaceParams{}};
  const GridSpec spec{50, 450, 50, 150, 200, 50};
  HeightGrid g(spec, 0, 1);
  std::mt19937_64 rng(137);
  std::normal_distribution<double> n(0, 0.5);
  std::bernoulli_distribution unmapped(0.2);
  for (std::size_t j = 0; j < spec.ny; ++j)
    for (std::size_t i = 0; i < spec.nx; ++i) {
      g.at(i, j).z_hat = m.height(spec.x_at(i), spec.y_at(j)) + n(rng);
      if (unmapped(rng)) g.at(i, j).p_hat = 1e6;
    }
  const auto map = error_map(g, m);
  const auto from_map = summarize_errors(map);
  std::size_t count = 0;
  double sum = 0, mx = 0;
  for (std::size_t c = 0; c < map.size(); ++c) {
    if (g[c].p_hat > 1e4) {
      EXPECT_TRUE(std::isnan(map[c]));
      continue;
    }
    EXPECT_NEAR(map[c], g[c].z_hat - m.height(spec.x_at(c % spec.nx), spec.y_at(c / spec.nx)), 1e-12);
    ++count, sum += std::abs(map[c]), mx = std::max(mx, std::abs(map[c]));
  }
  EXPECT_EQ(from_map.counted, count);
  EXPECT_NEAR(from_map.mean_abs_err, sum / count, 1e-12);
  EXPECT_EQ(from_map.max_abs_err, mx);
}

TEST(Report, Formatting) {
  EvaluationReport r{"triangle", 0.5, 2.0, 0.25, 10, 3};
  EXPECT_EQ(report_csv_header().substr(0, 5), "mask,");
  EXPECT_EQ(report_csv_row(r).substr(0, 9), "triangle,");
  const std::string t = report_table({r, r});
  EXPECT_NE(t.find("triangle"), std::string::npos);
}
