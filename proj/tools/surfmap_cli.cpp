// surfmap: simulate, map, evaluate and benchmark sparse-measurement surface maps.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "surfmap/commands.hpp"
#include "surfmap/config.hpp"
#include "surfmap/error.hpp"
#include "surfmap/evaluation.hpp"
#include "surfmap/masks.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Sparse-measurement surface mapping on a probabilistic height grid"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
  std::optional<int> workers;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Run configuration (JSON, comments allowed)");
    cmd->add_option("--seed", seed, "Override noise.seed");
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--workers", workers, "Worker threads for the masked update (0 = all)");
  };

  auto* simulate = app.add_subcommand("simulate", "Simulate the sensor rig and write a sample stream");
  add_common(simulate);

  auto* map = app.add_subcommand("map", "Build the height grid from a sample stream");
  add_common(map);
  std::optional<std::string> samples;
  std::optional<std::string> mask_kind;
  map->add_option("--samples", samples, "JSON-lines stream to replay ('-' = stdin); default simulates");
  map->add_option("--mask", mask_kind, "Override mask.kind (roi, triangle, largest_circle, cap)");

  auto* evaluate = app.add_subcommand("evaluate", "Compare mapped grids with ground truth");
  add_common(evaluate);
  std::vector<std::string> grids;
  evaluate->add_option("--grid", grids, "Directory written by 'map' (repeatable)")->required();

  auto* bench = app.add_subcommand("bench", "Time the masked grid update");
  add_common(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? surfmap::kExitOk : surfmap::kExitConfig;
  }

  try {
    surfmap::RunConfig config;
    if (!config_path.empty()) config = surfmap::load_config(config_path);
    if (seed) config.noise.seed = *seed;
    if (workers) config.workers = *workers;
    if (mask_kind) config.mask.kind = surfmap::parse_mask_kind(*mask_kind);
    config.validate();
    const fs::path out(out_dir);

    if (simulate->parsed()) {
      const auto s = surfmap::cmd_simulate(config, out);
      std::cout << "wrote " << s.samples << " samples (" << s.gaps << " gaps) to "
                << (out / "samples.jsonl").string() << ", config " << s.config_hash << '\n';
    } else if (map->parsed()) {
      std::optional<fs::path> stream;
      if (samples) stream = fs::path(*samples);
      const auto s = surfmap::cmd_map(config, stream, out);
      std::cout << s.samples << " samples, " << s.updates << " updates applied, " << s.skipped
                << " skipped, " << s.untriggered << " below trigger distance\n";
    } else if (evaluate->parsed()) {
      std::vector<fs::path> dirs(grids.begin(), grids.end());
      const auto reports = surfmap::cmd_evaluate(config, dirs, out);
      std::cout << surfmap::report_table(reports);
    } else if (bench->parsed()) {
      std::cout << surfmap::bench_table(surfmap::cmd_bench(config, out));
    }
  } catch (const surfmap::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return surfmap::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return surfmap::kExitData;
  }
  return surfmap::kExitOk;
}
