#include "surfmap/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "surfmap/io.hpp"
#include "surfmap/masks.hpp"
#include "surfmap/pipeline.hpp"

namespace surfmap {

using nlohmann::json;
namespace fs = std::filesystem;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::kConfig:
    case Errc::kInvalidSpec:
    case Errc::kAreaOutsideDomain:
      return kExitConfig;
    case Errc::kNoCountedCells:
      return kExitEvaluationEmpty;
    default:
      return kExitData;
  }
}

SimulateSummary cmd_simulate(const RunConfig& config, const fs::path& out) {
  const auto result = simulate(config);
  SimulateSummary summary{result.samples.size(), result.gaps.size(), config_hash(config)};

  io::write_samples(out / "samples.jsonl", result.samples);
  std::string gaps;
  for (const auto& g : result.gaps) gaps += g + '\n';
  io::write_text(out / "gaps.log", gaps);
  io::write_text(out / "config.resolved.json", dump_config(config));
  const json manifest = {{"seed", config.noise.seed},
                         {"config_hash", summary.config_hash},
                         {"samples", summary.samples},
                         {"gaps", summary.gaps},
                         {"stream", "samples.jsonl"},
                         {"units", {{"length", "mm"}, {"time", "s"}}}};
  io::write_text(out / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

MapSummary cmd_map(const RunConfig& config, const std::optional<fs::path>& samples,
                   const fs::path& out) {
  std::vector<MeasurementSample> stream;
  if (!samples) {
    stream = simulate(config).samples;
  } else if (*samples == "-") {
    stream = io::read_samples(std::cin);
  } else {
    stream = io::read_samples(*samples);
  }

  const auto pipeline = run_mapping(config, stream);
  io::save_grid(out, pipeline.grid());
  io::write_text(out / "update_log.csv", update_log_csv(pipeline.updates()));
  std::string skipped;
  for (const auto& s : pipeline.skipped()) skipped += s + '\n';
  io::write_text(out / "skipped.log", skipped);
  io::write_text(out / "config.resolved.json", dump_config(config));

  return {stream.size(), pipeline.updates().size(), pipeline.skipped().size(),
          pipeline.untriggered_total()};
}

std::vector<EvaluationReport> cmd_evaluate(const RunConfig& config,
                                           const std::vector<fs::path>& grids,
                                           const fs::path& out) {
  if (grids.empty()) throw Error(Errc::kConfig, "evaluate needs at least one grid directory");
  const SurfaceModel model(config.surface);
  std::vector<EvaluationReport> reports;
  for (std::size_t k = 0; k < grids.size(); ++k) {
    const HeightGrid grid = io::load_grid(grids[k]);
    std::string label = grids[k].filename().string();
    if (fs::exists(grids[k] / "config.resolved.json")) {
      label = std::string(to_string(load_config(grids[k] / "config.resolved.json").mask.kind));
    }
    EvaluationReport report = evaluate(grid, model, config.evaluation);
    report.label = label;
    reports.push_back(report);

    const auto errors = error_map(grid, model, config.evaluation.covariance_threshold);
    const std::string stem = "error_" + std::to_string(k) + "_" + label;
    io::write_grid_csv(out / (stem + ".csv"), grid.spec(), errors, "error");
    io::write_grid_binary(out / (stem + ".bin"), grid.spec(), errors, "error");
  }

  std::string csv = report_csv_header() + "\n";
  for (const auto& r : reports) csv += report_csv_row(r) + "\n";
  io::write_text(out / "report.csv", csv);
  io::write_text(out / "report.txt",
                 "# population std. dev. of signed error; P > " +
                     std::to_string(config.evaluation.covariance_threshold) + " excluded\n" +
                     report_table(reports));
  return reports;
}

const BenchTiming& BenchReport::find(const std::string& scenario, int workers) const {
  for (const auto& t : timings) {
    if (t.scenario == scenario && t.workers == workers) return t;
  }
  throw Error(Errc::kData, "no bench timing for " + scenario);
}

namespace {

struct PreparedUpdate {
  Plane plane;
  std::array<Point3, 3> points;
  BinaryMask mask;
};

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) - 1;
  return v[std::min(idx, v.size() - 1)];
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool same_bits(const HeightGrid& a, const HeightGrid& b) {
  return a.size() == b.size() &&
         std::memcmp(a.cells().data(), b.cells().data(), a.size() * sizeof(CellState)) == 0;
}

}  // namespace

BenchReport cmd_bench(const RunConfig& config, const fs::path& out) {
  // Accepted samples of the configured scan, with plane and mask prebuilt so
  // only the masked update itself is timed.
  const auto sim = simulate(config);
  std::vector<PreparedUpdate> prepared;
  UpdateTrigger trigger(config.trigger_distance);
  for (const auto& s : sim.samples) {
    if (!trigger.should_update(s.centroid())) continue;
    try {
      const Plane plane = fit_plane_pca(s.points);
      const LocalFrame frame = build_local_frame(plane, s.points[0]);
      prepared.push_back({plane, s.points,
                          build_mask(config.mask, config.grid, plane, frame, s.points)});
    } catch (const Error&) {
    }
  }
  if (prepared.empty()) throw Error(Errc::kData, "bench: the configured scan produced no updates");

  BenchReport report;
  report.multi_workers = std::max(2, config.resolved_workers());
  BinaryMask full(config.grid);
  for (auto& b : full.bits()) b = 1;
  const BinaryMask empty(config.grid);

  const auto n = static_cast<std::size_t>(config.bench_updates);
  for (const std::string scenario : {"mask", "full_grid", "empty"}) {
    HeightGrid reference(config.grid, config.z0, config.p0);
    for (int workers : {1, report.multi_workers}) {
      HeightGrid grid(config.grid, config.z0, config.p0);
      std::vector<double> times;
      times.reserve(n);
      double cells = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const auto& u = prepared[k % prepared.size()];
        const BinaryMask& mask = scenario == "mask" ? u.mask : scenario == "full_grid" ? full : empty;
        const auto t0 = std::chrono::steady_clock::now();
        const auto stats = masked_map_update(grid, u.plane, u.points, mask, config.covariance,
                                             config.kalman, workers);
        const auto t1 = std::chrono::steady_clock::now();
        times.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        cells += static_cast<double>(stats.cells_touched);
      }
      report.timings.push_back({scenario, workers, n, cells / static_cast<double>(n), median(times),
                                percentile(times, 0.95)});
      if (workers == 1) {
        reference = grid;
      } else if (!same_bits(reference, grid)) {
        report.deterministic = false;
      }
    }
  }

  auto speedup = [&](const std::string& s) {
    const double multi = report.find(s, report.multi_workers).median_ms;
    return multi > 0.0 ? report.find(s, 1).median_ms / multi : 1.0;
  };
  report.speedup_mask = speedup("mask");
  report.speedup_full_grid = speedup("full_grid");

  if (!out.empty()) {
    json j;
    j["mask_kind"] = to_string(config.mask.kind);
    j["grid"] = {{"nx", config.grid.nx}, {"ny", config.grid.ny}};
    j["deterministic"] = report.deterministic;
    j["speedup_mask"] = report.speedup_mask;
    j["speedup_full_grid"] = report.speedup_full_grid;
    j["hardware_threads"] = std::thread::hardware_concurrency();
    for (const auto& t : report.timings) {
      j["timings"].push_back({{"scenario", t.scenario},
                              {"workers", t.workers},
                              {"updates", t.updates},
                              {"mean_cells", t.mean_cells},
                              {"median_ms", t.median_ms},
                              {"p95_ms", t.p95_ms}});
    }
    io::write_text(out / "bench.json", j.dump(2) + "\n");
    io::write_text(out / "bench.txt", bench_table(report));
  }
  return report;
}

std::string bench_table(const BenchReport& report) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "scenario" << std::right << std::setw(9) << "workers"
     << std::setw(9) << "updates" << std::setw(12) << "cells" << std::setw(13) << "median [ms]"
     << std::setw(11) << "p95 [ms]" << '\n';
  os << std::fixed;
  for (const auto& t : report.timings) {
    os << std::left << std::setw(12) << t.scenario << std::right << std::setw(9) << t.workers
       << std::setw(9) << t.updates << std::setw(12) << std::setprecision(1) << t.mean_cells
       << std::setw(13) << std::setprecision(4) << t.median_ms << std::setw(11) << t.p95_ms
       << '\n';
  }
  os << std::setprecision(2) << "speedup (" << report.multi_workers
     << " workers): mask " << report.speedup_mask << "x, full grid " << report.speedup_full_grid
     << "x; deterministic: " << (report.deterministic ? "yes" : "NO") << '\n';
  return os.str();
}

}  // namespace surfmap
