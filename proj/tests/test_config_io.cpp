#include <cstring>
#include <cmath>
#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "surfmap/config.hpp"
#include "surfmap/error.hpp"
#include "surfmap/io.hpp"
#include "surfmap/pipeline.hpp"

using namespace surfmap;
namespace fs = std::filesystem;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kConfig);
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << text;
  return {};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("surfmap_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Config, EmptyGivesDefaults) {
  const RunConfig c = parse_config("{}");
  EXPECT_EQ(c.grid, (GridSpec{50, 450, 50, 150, 200, 50}));
  EXPECT_EQ(c.mask.kind, MaskKind::kTriangle);
  EXPECT_EQ(c.mask.dilation_steps, 2);
  EXPECT_EQ(c.covariance.alpha, 0.1);
  EXPECT_EQ(c.trigger_distance, 2.0);
  EXPECT_EQ(dump_config(c), dump_config(RunConfig{}));
}

TEST(Config, ParsesSectionsAndComments) {
  const RunConfig c = parse_config(R"({
    // 1 mm grid
    "grid": {"x_min": 0, "x_max": 100, "y_min": 0, "y_max": 40, "step": 1},
    "mask": {"kind": "cap", "cap_radius": 4, "dilation_steps": 1, "frame": "inertial_xy"},
    "covariance": {"alpha": 0.2, "distance": "xy_projected"},
    "trigger": {"min_travel": 3},
    "surface": {"model": "bump"},
    "trajectory": {"kind": "constant_height", "lines": 3},
    "noise": {"seed": 9, "white_sigma": 0},
    "run": {"workers": 2}
  })");
  EXPECT_EQ(c.grid.nx, 100u);
  EXPECT_EQ(c.grid.ny, 40u);
  EXPECT_EQ(c.mask.kind, MaskKind::kCap);
  EXPECT_EQ(c.mask.frame_mode, FrameMode::kInertialXy);
  EXPECT_EQ(c.covariance.distance_mode, DistanceMode::kXyProjected);
  EXPECT_EQ(c.trigger_distance, 3);
  EXPECT_EQ(c.surface.kind, SurfaceKind::kBump);
  EXPECT_EQ(c.trajectory.kind, TrajectoryKind::kConstantHeight);
  EXPECT_EQ(c.noise.seed, 9u);
  EXPECT_EQ(c.resolved_workers(), 2);
  EXPECT_EQ(dump_config(parse_config(dump_config(c))), dump_config(c));
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(config_error(R"({"mask": {"kindd": "roi"}})").find("mask.kindd"), std::string::npos);
  EXPECT_NE(config_error(R"({"covariance": {"alpha": "big"}})").find("covariance.alpha"), std::string::npos);
  EXPECT_NE(config_error(R"({"colour": 1})").find("colour"), std::string::npos);
  EXPECT_NE(config_error(R"({"mask": {"kind": "hexagon"}})").find("hexagon"), std::string::npos);
  EXPECT_NE(config_error(R"({"covariance": {"r_min": 100, "r_max": 10}})").find("covariance"), std::string::npos);
  config_error(R"({"grid": {"step": 2, "nx": 5}})");
  config_error(R"({"grid": )");
  config_error(R"({"noise": {"bias_amplitude": 3}})");
}

TEST(Config, HashTracksContent) {
  RunConfig a;
  RunConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.noise.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(GridFiles, CsvAndBinary) {
  const fs::path dir = scratch("grid");
  const GridSpec spec{0, 6, -2, 2, 3, 2};
  const std::vector<double> v{1.5, -2.25, NAN, 1e-300, 0.1, 7};
  io::write_grid_csv(dir / "h.csv", spec, v, "height");
  const GridSnapshot s = io::read_grid_csv(dir / "h.csv");
  EXPECT_EQ(s.spec, spec);
  ASSERT_EQ(s.values.size(), v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (std::isnan(v[k])) EXPECT_TRUE(std::isnan(s.values[k]));
    else EXPECT_EQ(s.values[k], v[k]);
  }
  io::write_grid_binary(dir / "h.bin", spec, v, "height");
  GridSpec back;
  const auto b = io::read_grid_binary(dir / "h.bin", back);
  EXPECT_EQ(back, spec);
  EXPECT_EQ(std::memcmp(b.data(), v.data(), v.size() * sizeof(double)), 0);
  EXPECT_EQ(fs::file_size(dir / "h.bin"), v.size() * sizeof(double));
}

TEST(GridFiles, SaveAndLoadGrid) {
  const fs::path dir = scratch("save");
  HeightGrid g(GridSpec{0, 10, 0, 4, 5, 2}, 0.5, 1e6);
  g.at(3, 1) = {2.75, 12.5};
  io::save_grid(dir, g);
  for (const char* f : {"height.csv", "height.bin", "covariance.csv", "covariance.bin"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  const HeightGrid h = io::load_grid(dir);
  EXPECT_EQ(h.spec(), g.spec());
  for (std::size_t c = 0; c < g.size(); ++c) {
    EXPECT_EQ(h[c].z_hat, g[c].z_hat);
    EXPECT_EQ(h[c].p_hat, g[c].p_hat);
  }
  EXPECT_THROW(io::load_grid(dir / "missing"), Error);
}

TEST(SampleStream, JsonLines) {
  RunConfig c;
  c.trajectory.lines = 1;
  const auto sim = simulate(c);
  ASSERT_GT(sim.samples.size(), 10u);
  std::stringstream ss;
  io::write_samples(ss, sim.samples);
  const auto back = io::read_samples(ss);
  ASSERT_EQ(back.size(), sim.samples.size());
  for (std::size_t k = 0; k < back.size(); ++k) {
    EXPECT_EQ(back[k].timestamp, sim.samples[k].timestamp);
    for (int s = 0; s < 3; ++s) EXPECT_EQ(back[k].points[s], sim.samples[k].points[s]);
    EXPECT_EQ(back[k].pose.position, sim.samples[k].pose.position);
  }
}

TEST(SampleStream, SchemaErrorsCarryLineNumbers) {
  const std::string good = io::sample_to_json(MeasurementSample{});
  auto code_and_message = [](const std::string& text) -> std::pair<Errc, std::string> {
    std::istringstream is(text);
    try {
      io::read_samples(is);
    } catch (const Error& e) {
      return {e.code(), e.what()};
    }
    return {Errc::kIo, "accepted"};
  };
  auto [c1, m1] = code_and_message(good + "\n" + good + "\n{\"t\": 1}\n");
  EXPECT_EQ(c1, Errc::kData);
  EXPECT_NE(m1.find("line 3"), std::string::npos);
  auto [c2, m2] = code_and_message("not json\n");
  EXPECT_EQ(c2, Errc::kData);
  EXPECT_NE(m2.find("line 1"), std::string::npos);
  auto [c3, m3] = code_and_message(R"({"t": 0, "pose": {"position": [0,0,0], "quaternion": [1,0,0,0]}, "points": [[0,0,0],[1,0,0]]})");
  EXPECT_EQ(c3, Errc::kData);
  std::istringstream blank("\n" + good + "\n\n");
  EXPECT_EQ(io::read_samples(blank).size(), 1u);
}
