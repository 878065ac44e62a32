#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("surfmap_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(SURFMAP_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

const char* kSmall = R"({"trajectory": {"lines": 2, "x_max": 150}})";

}  // namespace

TEST(Cli, SimulateIsByteIdentical) {
  const fs::path d = scratch("sim");
  spit(d / "c.json", kSmall);
  ASSERT_EQ(run("simulate --config " + (d / "c.json").string() + " --out " + (d / "a").string()), 0);
  ASSERT_EQ(run("simulate --config " + (d / "c.json").string() + " --out " + (d / "b").string()), 0);
  const std::string a = slurp(d / "a" / "samples.jsonl");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(d / "b" / "samples.jsonl"));
  EXPECT_NE(slurp(d / "a" / "manifest.json").find("config_hash"), std::string::npos);
  ASSERT_EQ(run("simulate --config " + (d / "c.json").string() + " --seed 5 --out " + (d / "c").string()), 0);
  EXPECT_NE(a, slurp(d / "c" / "samples.jsonl"));
}

TEST(Cli, ZeroLengthTrajectory) {
  const fs::path d = scratch("zero");
  spit(d / "c.json", R"({"trajectory": {"lines": 0}})");
  ASSERT_EQ(run("simulate --config " + (d / "c.json").string() + " --out " + d.string()), 0);
  EXPECT_TRUE(slurp(d / "samples.jsonl").empty());
  EXPECT_NE(slurp(d / "manifest.json").find("\"samples\": 0"), std::string::npos);
}

TEST(Cli, MapEvaluateFourMasks) {
  const fs::path d = scratch("masks");
  spit(d / "c.json", kSmall);
  const std::string cfg = "--config " + (d / "c.json").string();
  ASSERT_EQ(run("simulate " + cfg + " --out " + (d / "sim").string()), 0);
  std::string grids;
  for (const char* kind : {"roi", "triangle", "largest_circle", "cap"}) {
    ASSERT_EQ(run("map " + cfg + " --samples " + (d / "sim" / "samples.jsonl").string() + " --mask " +
                  kind + " --out " + (d / kind).string()),
              0);
    EXPECT_TRUE(fs::exists(d / kind / "height.csv"));
    EXPECT_TRUE(fs::exists(d / kind / "update_log.csv"));
    grids += " --grid " + (d / kind).string();
  }
  ASSERT_EQ(run("evaluate " + cfg + grids + " --out " + (d / "eval").string()), 0);
  const std::string csv = slurp(d / "eval" / "report.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
  for (const char* kind : {"roi", "triangle", "largest_circle", "cap"})
    EXPECT_NE(csv.find(std::string("\n") + kind + ","), std::string::npos);
}

TEST(Cli, ExitCodes) {
  const fs::path d = scratch("codes");
  spit(d / "bad.json", R"({"mask": {"kind": "hexagon"}})");
  EXPECT_EQ(run("map --config " + (d / "bad.json").string() + " --out " + d.string()), 2);
  spit(d / "syntax.json", "{");
  EXPECT_EQ(run("simulate --config " + (d / "syntax.json").string() + " --out " + d.string()), 2);
  EXPECT_EQ(run("simulate --config " + (d / "missing.json").string() + " --out " + d.string()), 2);
  EXPECT_EQ(run("frobnicate"), 2);

  spit(d / "broken.jsonl", "{\"t\": 0}\n");
  EXPECT_EQ(run("map --samples " + (d / "broken.jsonl").string() + " --out " + (d / "m").string()), 3);

  // an empty stream leaves every cell at the prior, so nothing passes the filter
  spit(d / "empty.jsonl", "");
  ASSERT_EQ(run("map --samples " + (d / "empty.jsonl").string() + " --out " + (d / "e").string()), 0);
  EXPECT_EQ(run("evaluate --grid " + (d / "e").string() + " --out " + (d / "ev").string()), 4);
  EXPECT_EQ(run("evaluate --grid " + (d / "nowhere").string() + " --out " + (d / "ev").string()), 3);
}

TEST(Cli, Bench) {
  const fs::path d = scratch("bench");
  spit(d / "c.json", R"({"bench": {"updates": 20}, "trajectory": {"lines": 2}})");
  ASSERT_EQ(run("bench --config " + (d / "c.json").string() + " --out " + d.string()), 0);
  const std::string j = slurp(d / "bench.json");
  EXPECT_NE(j.find("\"deterministic\": true"), std::string::npos);
  EXPECT_NE(j.find("full_grid"), std::string::npos);
}
