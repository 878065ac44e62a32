#include "surfmap/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "surfmap/error.hpp"

namespace surfmap {

void EvaluationConfig::validate() const {
  if (!(spacing > 0.0)) throw Error(Errc::kConfig, "evaluation spacing must be positive");
  if (!(covariance_threshold > 0.0)) {
    throw Error(Errc::kConfig, "covariance threshold must be positive");
  }
}

EvaluationReport summarize_errors(const std::vector<double>& signed_errors, std::size_t excluded) {
  EvaluationReport r;
  r.excluded = excluded;
  double sum = 0.0;
  double sum_abs = 0.0;
  for (double e : signed_errors) {
    if (std::isnan(e)) continue;
    ++r.counted;
    sum += e;
    sum_abs += std::abs(e);
    r.max_abs_err = std::max(r.max_abs_err, std::abs(e));
  }
  if (r.counted == 0) return r;
  const double n = static_cast<double>(r.counted);
  const double mean = sum / n;
  double ss = 0.0;
  for (double e : signed_errors) {
    if (!std::isnan(e)) ss += (e - mean) * (e - mean);
  }
  r.mean_abs_err = sum_abs / n;
  r.std_dev = std::sqrt(ss / n);
  return r;
}

EvaluationReport evaluate(const HeightGrid& grid, const SurfaceModel& model,
                          const EvaluationConfig& config) {
  config.validate();
  const GridSpec& spec = grid.spec();
  std::vector<double> errors;
  std::size_t excluded = 0;

  // lattice spans the grid points, x_min .. x_at(nx - 1)
  const auto nx = static_cast<long>(std::floor((spec.x_at(spec.nx - 1) - spec.x_min) / config.spacing + 1e-9));
  const auto ny = static_cast<long>(std::floor((spec.y_at(spec.ny - 1) - spec.y_min) / config.spacing + 1e-9));
  for (long b = 0; b <= ny; ++b) {
    const double y = spec.y_min + static_cast<double>(b) * config.spacing;
    for (long a = 0; a <= nx; ++a) {
      const double x = spec.x_min + static_cast<double>(a) * config.spacing;
      if (!model.in_domain(x, y)) continue;
      const auto [i, j] = coord_to_nearest_index(spec, x, y);
      const CellState& cell = grid.at(i, j);
      if (!(cell.p_hat <= config.covariance_threshold)) {
        ++excluded;
        continue;
      }
      errors.push_back(cell.z_hat - model.height(x, y));
    }
  }
  if (errors.empty()) {
    throw Error(Errc::kNoCountedCells, "no evaluation sample passed the covariance filter");
  }
  return summarize_errors(errors, excluded);
}

std::vector<double> error_map(const HeightGrid& grid, const SurfaceModel& model,
                              double covariance_threshold) {
  const GridSpec& spec = grid.spec();
  std::vector<double> out(spec.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t j = 0; j < spec.ny; ++j) {
    const double y = spec.y_at(j);
    for (std::size_t i = 0; i < spec.nx; ++i) {
      const double x = spec.x_at(i);
      const CellState& c = grid.at(i, j);
      if (c.p_hat <= covariance_threshold && model.in_domain(x, y)) {
        out[spec.linear(i, j)] = c.z_hat - model.height(x, y);
      }
    }
  }
  return out;
}

std::string report_csv_header() { return "mask,mean_abs_err,max_abs_err,std_dev,counted,excluded"; }

std::string report_csv_row(const EvaluationReport& r) {
  std::ostringstream os;
  os << std::setprecision(17) << r.label << ',' << r.mean_abs_err << ',' << r.max_abs_err << ','
     << r.std_dev << ',' << r.counted << ',' << r.excluded;
  return os.str();
}

std::string report_table(const std::vector<EvaluationReport>& reports) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "mask" << std::right << std::setw(12) << "mean [mm]"
     << std::setw(12) << "max [mm]" << std::setw(12) << "std [mm]" << std::setw(10) << "counted"
     << std::setw(10) << "excluded" << '\n';
  os << std::fixed << std::setprecision(3);
  for (const auto& r : reports) {
    os << std::left << std::setw(16) << r.label << std::right << std::setw(12) << r.mean_abs_err
       << std::setw(12) << r.max_abs_err << std::setw(12) << r.std_dev << std::setw(10)
       << r.counted << std::setw(10) << r.excluded << '\n';
  }
  return os.str();
}

}  // namespace surfmap
