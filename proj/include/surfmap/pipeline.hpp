#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "surfmap/config.hpp"
#include "surfmap/grid.hpp"
#include "surfmap/kalman.hpp"
#include "surfmap/simulator.hpp"

namespace surfmap {

struct UpdateRecord {
  double timestamp{0.0};
  Point3 centroid{Point3::Zero()};
  std::size_t cells_touched{0};
  double r_min_used{0.0};
  double r_max_used{0.0};
  double wall_ms{0.0};
};

enum class SampleOutcome { kApplied, kSkippedTrigger, kSkippedDegenerate };

/// Sequential mapping loop: trigger -> plane fit -> local frame -> mask ->
/// masked Kalman update. One sample is fully applied before the next.
class MappingPipeline {
 public:
  explicit MappingPipeline(const RunConfig& config);

  SampleOutcome process(const MeasurementSample& sample);

  const HeightGrid& grid() const { return grid_; }
  const std::vector<UpdateRecord>& updates() const { return updates_; }
  /// One line per sample rejected by plane fit, frame or mask construction.
  const std::vector<std::string>& skipped() const { return skipped_; }
  /// Samples received since the last applied update that the trigger held back.
  const std::vector<MeasurementSample>& untriggered() const { return untriggered_; }
  std::size_t untriggered_total() const { return untriggered_total_; }

 private:
  RunConfig config_;
  int workers_;
  HeightGrid grid_;
  UpdateTrigger trigger_;
  std::vector<UpdateRecord> updates_;
  std::vector<std::string> skipped_;
  std::vector<MeasurementSample> untriggered_;
  std::size_t untriggered_total_{0};
};

/// Runs every sample through a fresh pipeline.
MappingPipeline run_mapping(const RunConfig& config, std::span<const MeasurementSample> samples);

/// Simulates the configured scan (model, rig, trajectory, noise).
SimulationResult simulate(const RunConfig& config);

/// Update log as CSV: timestamp, centroid, cells touched, R range, wall time.
std::string update_log_csv(const std::vector<UpdateRecord>& updates);

}  // namespace surfmap
