#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "surfmap/grid.hpp"
#include "surfmap/surface.hpp"

namespace surfmap {

struct EvaluationConfig {
  double spacing{5.0};                ///< ground-truth lattice step, mm
  double covariance_threshold{1.0e4}; ///< cells with P > threshold are excluded

  void validate() const;
};

/// Error statistics of a mapped grid against ground truth.
/// std_dev is the population standard deviation of the signed errors
/// z_hat - z_true over counted samples.
struct EvaluationReport {
  std::string label;
  double mean_abs_err{0.0};
  double max_abs_err{0.0};
  double std_dev{0.0};
  std::size_t counted{0};
  std::size_t excluded{0};
};

/// Samples ground truth on an equidistant lattice from the grid origin up
/// to the last grid point and compares each sample with the nearest grid cell (ties toward
/// the lower index). Throws Error(kNoCountedCells) if every sample is
/// filtered by the covariance threshold.
EvaluationReport evaluate(const HeightGrid& grid, const SurfaceModel& model,
                          const EvaluationConfig& config);

/// Per-cell signed error z_hat - g(x_i, y_j), y-major. Cells with
/// P > threshold or outside the model domain hold NaN.
std::vector<double> error_map(const HeightGrid& grid, const SurfaceModel& model,
                              double covariance_threshold = 1.0e4);

/// Aggregates signed errors (NaNs skipped) the same way evaluate() does.
EvaluationReport summarize_errors(const std::vector<double>& signed_errors,
                                  std::size_t excluded = 0);

std::string report_csv_header();
std::string report_csv_row(const EvaluationReport& report);
/// Fixed-width comparison table, one line per report.
std::string report_table(const std::vector<EvaluationReport>& reports);

}  // namespace surfmap
