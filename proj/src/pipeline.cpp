#include "surfmap/pipeline.hpp"

#include <chrono>
#include <iomanip>
#include <sstream>

#include "surfmap/error.hpp"
#include "surfmap/masks.hpp"

namespace surfmap {

MappingPipeline::MappingPipeline(const RunConfig& config)
    : config_(config),
      workers_(config.resolved_workers()),
      grid_(config.grid, config.z0, config.p0),
      trigger_(config.trigger_distance) {
  config_.mask.validate();
  config_.covariance.validate();
  config_.kalman.validate();
}

SampleOutcome MappingPipeline::process(const MeasurementSample& sample) {
  const Point3 centroid = sample.centroid();
  // Peek first: the trigger only advances once the update has been applied.
  UpdateTrigger probe = trigger_;
  if (!probe.should_update(centroid)) {
    untriggered_.push_back(sample);
    ++untriggered_total_;
    return SampleOutcome::kSkippedTrigger;
  }

  const auto start = std::chrono::steady_clock::now();
  UpdateStats stats;
  try {
    const Plane plane = fit_plane_pca(sample.points);
    const LocalFrame frame = build_local_frame(plane, sample.points[0]);
    const BinaryMask mask = build_mask(config_.mask, grid_.spec(), plane, frame, sample.points);
    if (mask.degenerate()) throw Error(Errc::kCollinearPoints, "degenerate triangle mask");
    stats = masked_map_update(grid_, plane, sample.points, mask, config_.covariance,
                              config_.kalman, workers_);
  } catch (const Error& e) {
    std::ostringstream os;
    os << std::setprecision(17) << "t=" << sample.timestamp << ": " << e.what();
    skipped_.push_back(os.str());
    return SampleOutcome::kSkippedDegenerate;
  }
  const auto stop = std::chrono::steady_clock::now();

  trigger_ = probe;
  untriggered_.clear();
  updates_.push_back({sample.timestamp, centroid, stats.cells_touched, stats.r_min_used,
                      stats.r_max_used,
                      std::chrono::duration<double, std::milli>(stop - start).count()});
  return SampleOutcome::kApplied;
}

MappingPipeline run_mapping(const RunConfig& config, std::span<const MeasurementSample> samples) {
  MappingPipeline pipeline(config);
  for (const auto& s : samples) pipeline.process(s);
  return pipeline;
}

SimulationResult simulate(const RunConfig& config) {
  const SurfaceModel model(config.surface);
  return simulate_scan(model, config.rig, config.trajectory, config.noise);
}

std::string update_log_csv(const std::vector<UpdateRecord>& updates) {
  std::ostringstream os;
  os << "timestamp,centroid_x,centroid_y,centroid_z,cells_touched,r_min_used,r_max_used,wall_ms\n";
  os << std::setprecision(12);
  for (const auto& u : updates) {
    os << u.timestamp << ',' << u.centroid.x() << ',' << u.centroid.y() << ',' << u.centroid.z()
       << ',' << u.cells_touched << ',' << u.r_min_used << ',' << u.r_max_used << ','
       << u.wall_ms << '\n';
  }
  return os.str();
}

}  // namespace surfmap
