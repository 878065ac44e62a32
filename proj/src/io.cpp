#include "surfmap/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "surfmap/error.hpp"

namespace surfmap::io {

using nlohmann::json;

namespace {

static_assert(std::endian::native == std::endian::little, "binary grid format assumes little-endian");

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, mode);
  if (!os) throw Error(Errc::kIo, "cannot write " + path.string());
  return os;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream is(path, mode);
  if (!is) throw Error(Errc::kIo, "cannot read " + path.string());
  return is;
}

json spec_json(const GridSpec& spec) {
  return {{"x_min", spec.x_min}, {"x_max", spec.x_max}, {"y_min", spec.y_min},
          {"y_max", spec.y_max}, {"nx", spec.nx},       {"ny", spec.ny}};
}

GridSpec spec_from_json(const json& j) {
  GridSpec spec{j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                j.at("y_min").get<double>(), j.at("y_max").get<double>(),
                j.at("nx").get<std::size_t>(), j.at("ny").get<std::size_t>()};
  spec.validate();
  return spec;
}

json vec3(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string_view field_name(GridField field) {
  return field == GridField::kHeight ? "height" : "covariance";
}

void write_grid_csv(const std::filesystem::path& path, const GridSpec& spec,
                    const std::vector<double>& values, std::string_view field) {
  auto os = open_out(path);
  os << "# surfmap grid field=" << field << '\n'
     << std::setprecision(17) << "# x_min=" << spec.x_min << ",x_max=" << spec.x_max
     << ",y_min=" << spec.y_min << ",y_max=" << spec.y_max << ",nx=" << spec.nx
     << ",ny=" << spec.ny << '\n'
     << "# rows: j = 0.." << spec.ny - 1 << " (y_j = y_min + j*(y_max-y_min)/ny), columns: i = 0.."
     << spec.nx - 1 << " (x_i = x_min + i*(x_max-x_min)/nx); empty = missing\n";
  for (std::size_t j = 0; j < spec.ny; ++j) {
    for (std::size_t i = 0; i < spec.nx; ++i) {
      if (i) os << ',';
      const double v = values[spec.linear(i, j)];
      if (!std::isnan(v)) os << v;
    }
    os << '\n';
  }
}

GridSnapshot read_grid_csv(const std::filesystem::path& path) {
  auto is = open_in(path);
  GridSnapshot snap;
  std::string line;
  bool have_spec = false;
  while (std::getline(is, line)) {
    if (line.rfind("# x_min=", 0) == 0) {
      std::istringstream ss(line.substr(2));
      std::string kv;
      while (std::getline(ss, kv, ',')) {
        const auto eq = kv.find('=');
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "x_min") snap.spec.x_min = std::stod(val);
        else if (key == "x_max") snap.spec.x_max = std::stod(val);
        else if (key == "y_min") snap.spec.y_min = std::stod(val);
        else if (key == "y_max") snap.spec.y_max = std::stod(val);
        else if (key == "nx") snap.spec.nx = std::stoul(val);
        else if (key == "ny") snap.spec.ny = std::stoul(val);
      }
      have_spec = true;
      continue;
    }
    if (line.empty() || line[0] == '#') continue;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
      snap.values.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN()
                                         : std::stod(cell));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  if (!have_spec) throw Error(Errc::kData, path.string() + ": missing grid header");
  snap.spec.validate();
  if (snap.values.size() != snap.spec.size()) {
    throw Error(Errc::kData, path.string() + ": value count does not match header");
  }
  return snap;
}

void write_grid_binary(const std::filesystem::path& path, const GridSpec& spec,
                       const std::vector<double>& values, std::string_view field) {
  {
    auto os = open_out(path, std::ios::out | std::ios::binary);
    os.write(reinterpret_cast<const char*>(values.data()),
             static_cast<std::streamsize>(values.size() * sizeof(double)));
  }
  json meta = spec_json(spec);
  meta["field"] = field;
  meta["dtype"] = "float64-le";
  meta["layout"] = "row-major, ny rows of nx values (row j = y_j)";
  auto os = open_out(path.string() + ".json");
  os << meta.dump(2) << '\n';
}

std::vector<double> read_grid_binary(const std::filesystem::path& path, GridSpec& spec) {
  try {
    spec = spec_from_json(json::parse(read_text(path.string() + ".json")));
  } catch (const json::exception& e) {
    throw Error(Errc::kData, path.string() + ".json: " + e.what());
  }
  auto is = open_in(path, std::ios::in | std::ios::binary);
  std::vector<double> values(spec.size());
  is.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(values.size() * sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(values.size() * sizeof(double))) {
    throw Error(Errc::kData, path.string() + ": truncated grid file");
  }
  return values;
}

void save_grid(const std::filesystem::path& dir, const HeightGrid& grid) {
  for (auto field : {GridField::kHeight, GridField::kCovariance}) {
    const auto snap = grid.snapshot(field);
    const std::string name(field_name(field));
    write_grid_csv(dir / (name + ".csv"), snap.spec, snap.values, name);
    write_grid_binary(dir / (name + ".bin"), snap.spec, snap.values, name);
  }
}

HeightGrid load_grid(const std::filesystem::path& dir) {
  GridSpec hs, cs;
  const auto heights = read_grid_binary(dir / "height.bin", hs);
  const auto covs = read_grid_binary(dir / "covariance.bin", cs);
  if (!(hs == cs)) throw Error(Errc::kData, dir.string() + ": height/covariance specs differ");
  HeightGrid grid(hs, 0.0, 1.0);
  for (std::size_t k = 0; k < grid.size(); ++k) grid[k] = CellState{heights[k], covs[k]};
  return grid;
}

void write_pbm(const std::filesystem::path& path, const BinaryMask& mask) {
  write_text(path, to_pbm(mask));
}

std::string sample_to_json(const MeasurementSample& s) {
  const auto& q = s.pose.rotation;
  json j;
  j["t"] = s.timestamp;
  j["pose"] = {{"position", vec3(s.pose.position)},
               {"quaternion", json::array({q.w(), q.x(), q.y(), q.z()})}};
  j["points"] = json::array({vec3(s.points[0]), vec3(s.points[1]), vec3(s.points[2])});
  return j.dump();
}

MeasurementSample sample_from_json(const std::string& line, std::size_t line_no) {
  const std::string where = "line " + std::to_string(line_no) + ": ";
  try {
    const json j = json::parse(line);
    MeasurementSample s;
    s.timestamp = j.at("t").get<double>();
    const json& pose = j.at("pose");
    s.pose.position = vec3_from(pose.at("position"));
    const json& q = pose.at("quaternion");
    if (!q.is_array() || q.size() != 4) throw std::invalid_argument("quaternion must be [w, x, y, z]");
    s.pose.rotation = Eigen::Quaterniond(q[0].get<double>(), q[1].get<double>(),
                                         q[2].get<double>(), q[3].get<double>());
    const json& pts = j.at("points");
    if (!pts.is_array() || pts.size() != 3) throw std::invalid_argument("points must hold 3 entries");
    for (std::size_t k = 0; k < 3; ++k) s.points[k] = vec3_from(pts[k]);
    for (const auto& p : s.points) {
      if (!p.allFinite()) throw std::invalid_argument("non-finite point coordinate");
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(Errc::kData, where + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(Errc::kData, where + e.what());
  }
}

void write_samples(std::ostream& os, const std::vector<MeasurementSample>& samples) {
  for (const auto& s : samples) os << sample_to_json(s) << '\n';
}

void write_samples(const std::filesystem::path& path, const std::vector<MeasurementSample>& samples) {
  auto os = open_out(path);
  write_samples(os, samples);
}

std::vector<MeasurementSample> read_samples(std::istream& is) {
  std::vector<MeasurementSample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(sample_from_json(line, line_no));
  }
  return out;
}

std::vector<MeasurementSample> read_samples(const std::filesystem::path& path) {
  auto is = open_in(path);
  return read_samples(is);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto os = open_out(path);
  os << text;
}

std::string read_text(const std::filesystem::path& path) {
  auto is = open_in(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace surfmap::io
