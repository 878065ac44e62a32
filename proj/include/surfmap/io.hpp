#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "surfmap/grid.hpp"
#include "surfmap/masks.hpp"
#include "surfmap/simulator.hpp"

namespace surfmap::io {

std::string_view field_name(GridField field);

/// CSV export: '#' comment lines carrying the grid spec, then ny rows of nx
/// comma-separated values (row j = y_j, column i = x_i). NaN is written as
/// an empty field.
void write_grid_csv(const std::filesystem::path& path, const GridSpec& spec,
                    const std::vector<double>& values, std::string_view field);
GridSnapshot read_grid_csv(const std::filesystem::path& path);

/// Raw little-endian float64, y-major, plus `<path>.json` holding the GridSpec.
void write_grid_binary(const std::filesystem::path& path, const GridSpec& spec,
                       const std::vector<double>& values, std::string_view field);
/// Returns the values and fills `spec` from the sidecar.
std::vector<double> read_grid_binary(const std::filesystem::path& path, GridSpec& spec);

/// Writes height.{csv,bin} and covariance.{csv,bin} into `dir`.
void save_grid(const std::filesystem::path& dir, const HeightGrid& grid);
/// Rebuilds a grid from the binary files written by save_grid.
HeightGrid load_grid(const std::filesystem::path& dir);

void write_pbm(const std::filesystem::path& path, const BinaryMask& mask);

/// JSON-lines sample stream. One object per line:
///   {"t": s, "pose": {"position": [x,y,z], "quaternion": [w,x,y,z]},
///    "points": [[x,y,z],[x,y,z],[x,y,z]]}
/// Lengths in mm, time in seconds, positions in {0}.
std::string sample_to_json(const MeasurementSample& sample);
/// Throws Error(kData) naming `line_no` on schema violations.
MeasurementSample sample_from_json(const std::string& line, std::size_t line_no);

void write_samples(std::ostream& os, const std::vector<MeasurementSample>& samples);
void write_samples(const std::filesystem::path& path, const std::vector<MeasurementSample>& samples);
std::vector<MeasurementSample> read_samples(std::istream& is);
std::vector<MeasurementSample> read_samples(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace surfmap::io
