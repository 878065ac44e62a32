#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "surfmap/config.hpp"
#include "surfmap/error.hpp"
#include "surfmap/evaluation.hpp"

namespace surfmap {

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitData = 3,
  kExitEvaluationEmpty = 4,
};

int exit_code_for(Errc code);

struct SimulateSummary {
  std::size_t samples{0};
  std::size_t gaps{0};
  std::string config_hash;
};

/// Writes samples.jsonl, manifest.json, gaps.log and config.resolved.json.
SimulateSummary cmd_simulate(const RunConfig& config, const std::filesystem::path& out);

struct MapSummary {
  std::size_t samples{0};
  std::size_t updates{0};
  std::size_t skipped{0};
  std::size_t untriggered{0};
};

/// Replays `samples` ("-" reads stdin) or, without a stream, simulates the
/// configured scan in memory. Writes height/covariance snapshots,
/// update_log.csv, skipped.log and config.resolved.json.
MapSummary cmd_map(const RunConfig& config, const std::optional<std::filesystem::path>& samples,
                   const std::filesystem::path& out);

/// One report per grid directory (written by cmd_map), plus report.csv,
/// report.txt and per-grid signed error maps. Throws Error(kNoCountedCells)
/// if any grid has nothing left after covariance filtering.
std::vector<EvaluationReport> cmd_evaluate(const RunConfig& config,
                                           const std::vector<std::filesystem::path>& grids,
                                           const std::filesystem::path& out);

struct BenchTiming {
  std::string scenario;
  int workers{1};
  std::size_t updates{0};
  double mean_cells{0.0};
  double median_ms{0.0};
  double p95_ms{0.0};
};

struct BenchReport {
  std::vector<BenchTiming> timings;
  /// Final grids identical bit for bit across worker counts, per scenario.
  bool deterministic{true};
  int multi_workers{2};
  double speedup_mask{1.0};
  double speedup_full_grid{1.0};

  const BenchTiming& find(const std::string& scenario, int workers) const;
};

/// Times masked_map_update on the configured mask, a full-grid mask and an
/// empty mask, single- versus multi-worker. Writes bench.json and bench.txt
/// when `out` is non-empty.
BenchReport cmd_bench(const RunConfig& config, const std::filesystem::path& out);

std::string bench_table(const BenchReport& report);

}  // namespace surfmap
