#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "fraclayer/io.hpp"

namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  const fs::path d = fs::temp_directory_path() / "fraclayer_cli";
  fs::create_directories(d);
  return d;
}

int run(const std::string& args) {
  const std::string cmd = std::string(FRACLAYER_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string out_dir(const std::string& name) {
  const fs::path d = workdir() / name;
  fs::remove_all(d);
  return d.string();
}

}  // namespace

TEST(Cli, SolveProfile) {
  const std::string d = out_dir("solve");
  EXPECT_EQ(run("solve-profile --s 0.5 --R 40 --h 0.1 --out " + d), 0);
  for (const char* f : {"profile.csv", "report.json", "trace.csv", "energy.csv", "manifest.json"})
    EXPECT_TRUE(fs::exists(fs::path(d) / f)) << f;
  const auto rep = nlohmann::json::parse(fraclayer::read_file(d + "/report.json"));
  EXPECT_TRUE(rep["converged"].get<bool>());
  EXPECT_GE(rep["monotonicity_defect"].get<double>(), -1e-8);
}

TEST(Cli, ByteIdenticalReruns) {
  const std::string a = out_dir("rerun_a"), b = out_dir("rerun_b");
  EXPECT_EQ(run("check-properties --s 0.3 --trials 50 --seed 9 --out " + a), 0);
  EXPECT_EQ(run("check-properties --s 0.3 --trials 50 --seed 9 --out " + b), 0);
  EXPECT_EQ(fraclayer::read_file(a + "/properties.csv"), fraclayer::read_file(b + "/properties.csv"));

  const std::string c = out_dir("rerun_c"), e = out_dir("rerun_e");
  EXPECT_EQ(run("solve-profile --s 0.3 --R 10 --h 0.2 --out " + c), 0);
  EXPECT_EQ(run("solve-profile --s 0.3 --R 10 --h 0.2 --out " + e), 0);
  for (const char* f : {"profile.csv", "trace.csv", "energy.csv", "report.json"})
    EXPECT_EQ(fraclayer::read_file(c + "/" + f), fraclayer::read_file(e + "/" + f)) << f;
}

TEST(Cli, ManifestDescribesRun) {
  const std::string d = out_dir("manifest");
  EXPECT_EQ(run("compute-varpi --s 0.25 --n 2 --out " + d), 0);
  const auto m = nlohmann::json::parse(fraclayer::read_file(d + "/manifest.json"));
  EXPECT_EQ(m["run"]["command"], "compute-varpi");
  EXPECT_EQ(m["run"]["s"], 0.25);
  EXPECT_EQ(m["run"]["n"], 2);
  EXPECT_EQ(m["outputs"]["varpi.csv"], fraclayer::git_blob_hash(fraclayer::read_file(d + "/varpi.csv")));
}

TEST(Cli, InputErrors) {
  const std::string d = out_dir("bad");
  EXPECT_EQ(run("solve-profile --s 1.5 --out " + d), 2);
  EXPECT_EQ(run("solve-profile --h -1 --out " + d), 2);
  EXPECT_EQ(run("sweep-scaling --R-schedule 64,32,128 --out " + d), 2);
  EXPECT_EQ(run("sweep-scaling --R-schedule 32,64 --out " + d), 2);
  EXPECT_EQ(run("shell-energy --deltas 0.7 --out " + d), 2);
  EXPECT_EQ(run("solve-profile --potential /nonexistent.csv --out " + d), 2);
  EXPECT_EQ(run("fit-decay --window 0.6,0.2 --out " + d), 2);
  EXPECT_EQ(run("no-such-command"), 2);
  EXPECT_EQ(run("solve-profile --bogus 3"), 2);
  EXPECT_FALSE(fs::exists(fs::path(d) / "manifest.json"));
}

TEST(Cli, CheckFailureExitsOne) {
  const std::string d = out_dir("fail");
  EXPECT_EQ(run("solve-profile --s 0.5 --R 20 --h 0.1 --max-iters 2 --out " + d), 1);
}

TEST(Cli, TabulatedPotential) {
  const fs::path d = workdir() / "tab";
  fs::remove_all(d);
  fs::create_directories(d);
  {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i <= 300; ++i) {
      const double u = -1.5 + 0.01 * i;
      rows.push_back({u, 0.25 * (1 - u * u) * (1 - u * u), -u * (1 - u * u), 3 * u * u - 1});
    }
    fraclayer::write_table_csv((d / "w.csv").string(), {"u", "W", "dW", "ddW"}, rows);
  }
  EXPECT_EQ(run("solve-profile --R 8 --h 0.2 --potential " + (d / "w.csv").string() + " --out " + (d / "o").string()),
            0);
  const auto m = nlohmann::json::parse(fraclayer::read_file((d / "o" / "manifest.json").string()));
  EXPECT_EQ(m["inputs"].size(), 1u);
}
