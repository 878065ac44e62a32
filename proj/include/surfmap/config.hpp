#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "surfmap/covariance.hpp"
#include "surfmap/evaluation.hpp"
#include "surfmap/grid.hpp"
#include "surfmap/kalman.hpp"
#include "surfmap/masks.hpp"
#include "surfmap/simulator.hpp"
#include "surfmap/surface.hpp"

namespace surfmap {

/// Everything a run needs. Defaults reproduce the reference parameter set:
/// 2 mm grid over 400 x 100 mm, triangle mask with two dilation steps,
/// alpha = 0.1, R in [10, 1e4], 2 mm update trigger.
struct RunConfig {
  GridSpec grid{50.0, 450.0, 50.0, 150.0, 200, 50};
  double z0{0.0};
  double p0{1.0e6};
  MaskSpec mask;
  CovarianceParams covariance;
  KFParams kalman;
  double trigger_distance{2.0};
  SurfaceParams surface;
  SensorRig rig;
  TrajectoryPlan trajectory;
  NoiseModel noise;
  EvaluationConfig evaluation;
  int workers{0};  ///< 0 = available parallelism
  int bench_updates{1000};

  /// Throws Error(kConfig) naming the offending field.
  void validate() const;
  int resolved_workers() const;
};

/// Parses the nested JSON config (comments allowed). Missing fields keep
/// their defaults; unknown fields and type mismatches raise Error(kConfig)
/// with the dotted field path (and line/column for syntax errors).
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Fully resolved config as pretty-printed JSON.
std::string dump_config(const RunConfig& config);

/// FNV-1a 64 of dump_config(), as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace surfmap
