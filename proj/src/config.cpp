#include "surfmap/config.hpp"

#include <cstdio>
#include <set>
#include <thread>

#include <json.hpp>

#include "surfmap/error.hpp"
#include "surfmap/io.hpp"

namespace surfmap {

using nlohmann::json;

void RunConfig::validate() const {
  auto wrap = [](const char* section, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      throw Error(Errc::kConfig, std::string(section) + ": " + e.detail());
    }
  };
  wrap("grid", [&] { grid.validate(); });
  if (!(p0 > 0.0)) throw Error(Errc::kConfig, "grid.p0: must be positive");
  wrap("mask", [&] { mask.validate(); });
  wrap("covariance", [&] { covariance.validate(); });
  wrap("kalman", [&] { kalman.validate(); });
  if (!(trigger_distance > 0.0)) throw Error(Errc::kConfig, "trigger.min_travel: must be positive");
  wrap("surface", [&] { surface.validate(); });
  wrap("rig", [&] { rig.validate(); });
  wrap("trajectory", [&] { trajectory.validate(); });
  wrap("noise", [&] { noise.validate(); });
  if (noise.bias_amplitude > rig.max_linearity_error) {
    throw Error(Errc::kConfig, "noise.bias_amplitude: exceeds rig.max_linearity_error");
  }
  wrap("evaluation", [&] { evaluation.validate(); });
  if (workers < 0) throw Error(Errc::kConfig, "run.workers: must be nonnegative");
  if (bench_updates < 1) throw Error(Errc::kConfig, "bench.updates: must be positive");
  if (grid.x_max < surface.x_min || grid.x_min > surface.x_max || grid.y_max < surface.y_min ||
      grid.y_min > surface.y_max) {
    throw Error(Errc::kConfig, "grid: does not overlap the surface domain");
  }
}

int RunConfig::resolved_workers() const {
  if (workers > 0) return workers;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

namespace {

// Reads fields out of one JSON object, tracking which keys were consumed so
// leftovers can be reported as unknown.
class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    node_ = &root.at(name_);
    if (!node_->is_object()) throw Error(Errc::kConfig, name_ + ": expected an object");
  }

  template <class T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return;
    try {
      out = node_->at(key).get<T>();
    } catch (const json::exception&) {
      throw Error(Errc::kConfig, name_ + "." + key + ": wrong type");
    }
  }

  template <class Enum, class Parse, class Name>
  void read_enum(const char* key, Enum& out, Parse parse, Name name) {
    std::string text(name(out));
    read(key, text);
    try {
      out = parse(text);
    } catch (const Error& e) {
      throw Error(Errc::kConfig, name_ + "." + key + ": " + e.detail());
    }
  }

  bool has(const char* key) const { return node_ && node_->contains(key); }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, _] : node_->items()) {
      if (!seen_.count(key)) throw Error(Errc::kConfig, name_ + "." + key + ": unknown field");
    }
  }

 private:
  std::string name_;
  const json* node_{nullptr};
  std::set<std::string> seen_;
};

DistanceMode parse_distance_mode(std::string_view s) {
  if (s == "plane_projected") return DistanceMode::kPlaneProjected;
  if (s == "xy_projected") return DistanceMode::kXyProjected;
  throw Error(Errc::kConfig, "unknown distance mode '" + std::string(s) + "'");
}

std::string_view distance_mode_name(DistanceMode m) {
  return m == DistanceMode::kPlaneProjected ? "plane_projected" : "xy_projected";
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw Error(Errc::kConfig, e.what());
  }
  if (!root.is_object()) throw Error(Errc::kConfig, "config root must be an object");

  static const std::set<std::string> kSections{"grid",   "mask",       "covariance", "kalman",
                                               "trigger", "surface",   "rig",        "trajectory",
                                               "noise",  "evaluation", "run",        "bench"};
  for (const auto& [key, _] : root.items()) {
    if (!kSections.count(key)) throw Error(Errc::kConfig, key + ": unknown section");
  }

  RunConfig c;
  {
    Section s(root, "grid");
    s.read("x_min", c.grid.x_min);
    s.read("x_max", c.grid.x_max);
    s.read("y_min", c.grid.y_min);
    s.read("y_max", c.grid.y_max);
    s.read("nx", c.grid.nx);
    s.read("ny", c.grid.ny);
    if (s.has("step")) {
      if (s.has("nx") || s.has("ny")) throw Error(Errc::kConfig, "grid.step: conflicts with nx/ny");
      double step = 0.0;
      s.read("step", step);
      try {
        c.grid = GridSpec::from_step(c.grid.x_min, c.grid.x_max, c.grid.y_min, c.grid.y_max, step);
      } catch (const Error& e) {
        throw Error(Errc::kConfig, std::string("grid.step: ") + e.detail());
      }
    } else {
      double ignored = 0.0;
      s.read("step", ignored);
    }
    s.read("z0", c.z0);
    s.read("p0", c.p0);
    s.finish();
  }
  {
    Section s(root, "mask");
    s.read_enum("kind", c.mask.kind, parse_mask_kind,
                [](MaskKind k) { return to_string(k); });
    s.read("cap_radius", c.mask.cap_radius);
    s.read("dilation_steps", c.mask.dilation_steps);
    s.read_enum("frame", c.mask.frame_mode, parse_frame_mode,
                [](FrameMode m) { return to_string(m); });
    s.finish();
  }
  {
    Section s(root, "covariance");
    s.read("r_min", c.covariance.r_min);
    s.read("r_max", c.covariance.r_max);
    s.read("alpha", c.covariance.alpha);
    s.read_enum("distance", c.covariance.distance_mode, parse_distance_mode, distance_mode_name);
    s.finish();
  }
  {
    Section s(root, "kalman");
    s.read("f", c.kalman.f);
    s.read("h", c.kalman.h);
    s.read("q", c.kalman.q);
    s.finish();
  }
  {
    Section s(root, "trigger");
    s.read("min_travel", c.trigger_distance);
    s.finish();
  }
  {
    Section s(root, "surface");
    auto& p = c.surface;
    s.read_enum("model", p.kind, parse_surface_kind, [](SurfaceKind k) { return to_string(k); });
    s.read("x_min", p.x_min);
    s.read("x_max", p.x_max);
    s.read("y_min", p.y_min);
    s.read("y_max", p.y_max);
    s.read("offset", p.offset);
    s.read("slope_x", p.slope_x);
    s.read("slope_y", p.slope_y);
    s.read("amplitude_x", p.amplitude_x);
    s.read("amplitude_y", p.amplitude_y);
    s.read("wavelength_x", p.wavelength_x);
    s.read("wavelength_y", p.wavelength_y);
    s.read("phase_x", p.phase_x);
    s.read("phase_y", p.phase_y);
    s.read("center_x", p.center_x);
    s.read("center_y", p.center_y);
    s.read("sphere_radius", p.sphere_radius);
    s.read("rim_radius", p.rim_radius);
    s.finish();
  }
  {
    Section s(root, "rig");
    s.read("mount_radius", c.rig.mount_radius);
    s.read("tilt_deg", c.rig.tilt_deg);
    s.read("range_min", c.rig.range_min);
    s.read("range_max", c.rig.range_max);
    s.read("resolution", c.rig.resolution);
    s.read("max_linearity_error", c.rig.max_linearity_error);
    s.finish();
  }
  {
    Section s(root, "trajectory");
    auto& t = c.trajectory;
    s.read_enum("kind", t.kind, parse_trajectory_kind,
                [](TrajectoryKind k) { return to_string(k); });
    s.read("lines", t.lines);
    s.read("line_spacing", t.line_spacing);
    s.read("speed", t.speed);
    s.read("sample_rate", t.sample_rate);
    s.read("height", t.height);
    s.read("standoff", t.standoff);
    s.read("x_min", t.area.x_min);
    s.read("x_max", t.area.x_max);
    s.read("y_min", t.area.y_min);
    s.read("y_max", t.area.y_max);
    s.finish();
  }
  {
    Section s(root, "noise");
    s.read("seed", c.noise.seed);
    s.read("quantum", c.noise.quantum);
    s.read("bias_amplitude", c.noise.bias_amplitude);
    s.read("bias_period", c.noise.bias_period);
    s.read("white_sigma", c.noise.white_sigma);
    s.read("pose_sigma_mm", c.noise.pose_sigma_mm);
    s.read("pose_sigma_rad", c.noise.pose_sigma_rad);
    s.read("pose_delay", c.noise.pose_delay);
    s.finish();
  }
  {
    Section s(root, "evaluation");
    s.read("spacing", c.evaluation.spacing);
    s.read("covariance_threshold", c.evaluation.covariance_threshold);
    s.finish();
  }
  {
    Section s(root, "run");
    s.read("workers", c.workers);
    s.finish();
  }
  {
    Section s(root, "bench");
    s.read("updates", c.bench_updates);
    s.finish();
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = io::read_text(path);
  } catch (const Error& e) {
    throw Error(Errc::kConfig, e.detail());
  }
  try {
    return parse_config(text);
  } catch (const Error& e) {
    throw Error(Errc::kConfig, path.string() + ": " + e.detail());
  }
}

std::string dump_config(const RunConfig& c) {
  json j;
  j["grid"] = {{"x_min", c.grid.x_min}, {"x_max", c.grid.x_max}, {"y_min", c.grid.y_min},
               {"y_max", c.grid.y_max}, {"nx", c.grid.nx},       {"ny", c.grid.ny},
               {"z0", c.z0},            {"p0", c.p0}};
  j["mask"] = {{"kind", to_string(c.mask.kind)},
               {"cap_radius", c.mask.cap_radius},
               {"dilation_steps", c.mask.dilation_steps},
               {"frame", to_string(c.mask.frame_mode)}};
  j["covariance"] = {{"r_min", c.covariance.r_min},
                     {"r_max", c.covariance.r_max},
                     {"alpha", c.covariance.alpha},
                     {"distance", distance_mode_name(c.covariance.distance_mode)}};
  j["kalman"] = {{"f", c.kalman.f}, {"h", c.kalman.h}, {"q", c.kalman.q}};
  j["trigger"] = {{"min_travel", c.trigger_distance}};
  const auto& p = c.surface;
  j["surface"] = {{"model", to_string(p.kind)},
                  {"x_min", p.x_min},
                  {"x_max", p.x_max},
                  {"y_min", p.y_min},
                  {"y_max", p.y_max},
                  {"offset", p.offset},
                  {"slope_x", p.slope_x},
                  {"slope_y", p.slope_y},
                  {"amplitude_x", p.amplitude_x},
                  {"amplitude_y", p.amplitude_y},
                  {"wavelength_x", p.wavelength_x},
                  {"wavelength_y", p.wavelength_y},
                  {"phase_x", p.phase_x},
                  {"phase_y", p.phase_y},
                  {"center_x", p.center_x},
                  {"center_y", p.center_y},
                  {"sphere_radius", p.sphere_radius},
                  {"rim_radius", p.rim_radius}};
  j["rig"] = {{"mount_radius", c.rig.mount_radius},
              {"tilt_deg", c.rig.tilt_deg},
              {"range_min", c.rig.range_min},
              {"range_max", c.rig.range_max},
              {"resolution", c.rig.resolution},
              {"max_linearity_error", c.rig.max_linearity_error}};
  const auto& t = c.trajectory;
  j["trajectory"] = {{"kind", to_string(t.kind)},
                     {"lines", t.lines},
                     {"line_spacing", t.line_spacing},
                     {"speed", t.speed},
                     {"sample_rate", t.sample_rate},
                     {"height", t.height},
                     {"standoff", t.standoff},
                     {"x_min", t.area.x_min},
                     {"x_max", t.area.x_max},
                     {"y_min", t.area.y_min},
                     {"y_max", t.area.y_max}};
  j["noise"] = {{"seed", c.noise.seed},
                {"quantum", c.noise.quantum},
                {"bias_amplitude", c.noise.bias_amplitude},
                {"bias_period", c.noise.bias_period},
                {"white_sigma", c.noise.white_sigma},
                {"pose_sigma_mm", c.noise.pose_sigma_mm},
                {"pose_sigma_rad", c.noise.pose_sigma_rad},
                {"pose_delay", c.noise.pose_delay}};
  j["evaluation"] = {{"spacing", c.evaluation.spacing},
                     {"covariance_threshold", c.evaluation.covariance_threshold}};
  j["run"] = {{"workers", c.workers}};
  j["bench"] = {{"updates", c.bench_updates}};
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace surfmap
