#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "fkclock/cli.hpp"
#include "fkclock/version.hpp"
#include "helpers.hpp"

namespace fkclock {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<fs::path> run_dirs(const fs::path& root) {
  std::vector<fs::path> dirs;
  if (!fs::exists(root)) return dirs;
  for (const auto& e : fs::directory_iterator(root))
    if (e.is_directory()) dirs.push_back(e.path());
  std::sort(dirs.begin(), dirs.end());
  return dirs;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(Cli, VqeIsByteForByteReproducible) {
  const auto root = test::scratch_dir("cli_vqe");
  for (const char* sub : {"a", "b"}) {
    const auto r = run({"vqe", "--ns", "2", "--na", "2", "--depth", "2", "--seed", "7", "--out", (root / sub).string()});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  }
  const auto a = run_dirs(root / "a"), b = run_dirs(root / "b");
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(slurp(a[0] / "trace.csv"), slurp(b[0] / "trace.csv"));
  EXPECT_EQ(read_csv(a[0] / "trace.csv")[0], (std::vector<std::string>{"iter", "stage", "energy", "grad_norm"}));

  const json meta = json::parse(slurp(a[0] / "meta.json"));
  EXPECT_EQ(meta["version"], kVersion);
  EXPECT_EQ(meta["seed"], 7);
  EXPECT_EQ(meta["config"]["depth"], 2);
  EXPECT_EQ(meta["config"]["dt"], 1.5);
  const json theta = json::parse(slurp(a[0] / "theta.json"));
  EXPECT_EQ(theta["theta"].size(), 48u);
  EXPECT_TRUE(theta["converged"].get<bool>());
}

TEST(Cli, RunsNeverShareADirectory) {
  const auto root = test::scratch_dir("cli_fresh");
  for (int k = 0; k < 3; ++k) ASSERT_EQ(run({"count", "--out", root.string()}).code, cli::kExitOk);
  const auto dirs = run_dirs(root);
  EXPECT_EQ(dirs.size(), 3u);
  for (const auto& d : dirs) EXPECT_TRUE(fs::exists(d / "meta.json"));
}

TEST(Cli, BuildDumpMatchesCountReport) {
  const auto root = test::scratch_dir("cli_build");
  const auto r = run({"build", "--ns", "2", "--na", "2", "--dump-pauli", "--dump-clock", "--out", root.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const auto dir = run_dirs(root).at(0);
  const json counts = json::parse(slurp(dir / "counts.json"));
  std::ifstream in(dir / "hamiltonian.txt");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) lines += !line.empty();
  EXPECT_EQ(lines, counts["total_terms"].get<std::size_t>());
  EXPECT_EQ(counts["clock_strings_c2"], 8);
  const auto clock = read_csv(dir / "clock.csv");
  ASSERT_EQ(clock.size(), 5u);
  EXPECT_EQ(clock[3][2], "11");
  const json gap = json::parse(slurp(dir / "gap.json"));
  EXPECT_NEAR(gap["gap_formula"].get<double>(), 0.29289321881345248, 1e-15);
}

TEST(Cli, EchoEstimatesWithinThreeSigma) {
  const auto root = test::scratch_dir("cli_echo");
  ASSERT_EQ(run({"echo", "--ns", "2", "--na", "2", "--shots", "100000", "--out", root.string()}).code, cli::kExitOk);
  const auto rows = read_csv(run_dirs(root).at(0) / "echo.csv");
  ASSERT_EQ(rows[0], (std::vector<std::string>{"time", "L", "lambda", "estimator", "stderr"}));
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double l = std::stod(rows[k][1]), est = std::stod(rows[k][3]), se = std::stod(rows[k][4]);
    EXPECT_LE(std::abs(est - l), 3 * se) << "row " << k;
  }
}

TEST(Cli, ObserveTrotterAndSweepFromTheta) {
  const auto root = test::scratch_dir("cli_theta");
  ASSERT_EQ(run({"vqe", "--ns", "2", "--na", "2", "--out", (root / "v").string()}).code, cli::kExitOk);
  const auto theta = run_dirs(root / "v").at(0) / "theta.json";

  ASSERT_EQ(run({"observe", "--theta", theta.string(), "--out", (root / "o").string()}).code, cli::kExitOk);
  const auto obs = read_csv(run_dirs(root / "o").at(0) / "observe.csv");
  EXPECT_EQ(obs[0], (std::vector<std::string>{"level", "time", "magnetization", "clock_prob"}));
  EXPECT_EQ(obs.size(), 5u);

  ASSERT_EQ(run({"trotter", "--theta", theta.string(), "--out", (root / "t").string()}).code, cli::kExitOk);
  const auto tro = read_csv(run_dirs(root / "t").at(0) / "trotter.csv");
  EXPECT_EQ(tro[0], (std::vector<std::string>{"level", "time", "infidelity"}));

  ASSERT_EQ(run({"noise-sweep", "--theta", theta.string(), "--points", "3", "--out", (root / "n").string()}).code,
            cli::kExitOk);
  const auto sweep = read_csv(run_dirs(root / "n").at(0) / "noise_sweep.csv");
  EXPECT_EQ(sweep[0], (std::vector<std::string>{"p2", "f_vfk_mean", "f_vfk_std", "f_ts_mean", "f_ts_std", "ratio"}));
  EXPECT_EQ(sweep.size(), 4u);
}

TEST(Cli, CsvCellsCarryFullPrecision) {
  const auto root = test::scratch_dir("cli_precision");
  ASSERT_EQ(run({"observe", "--ns", "2", "--na", "2", "--out", root.string()}).code, cli::kExitOk);
  const auto rows = read_csv(run_dirs(root).at(0) / "observe.csv");
  // Level 1 is one X layer of dt = 1.5, so the cell holds cos(3) to rounding.
  const std::string cell = rows[2][2];
  EXPECT_NEAR(std::stod(cell), std::cos(3.0), 1e-14);
  EXPECT_EQ(cell.size(), std::string("-0.98999249660044542").size());
}

TEST(Cli, NonConvergenceExitsTwo) {
  const auto root = test::scratch_dir("cli_nonconv");
  const auto r = run({"vqe", "--na", "3", "--max-iter", "3", "--stages", "2", "--out", root.string()});
  EXPECT_EQ(r.code, cli::kExitNotConverged);
  EXPECT_TRUE(fs::exists(run_dirs(root).at(0) / "trace.csv"));
}

TEST(Cli, InvalidConfigNamesField) {
  const auto r = run({"vqe", "--initial", "012", "--out", test::scratch_dir("cli_bad").string()});
  EXPECT_EQ(r.code, cli::kExitError);
  EXPECT_NE(r.err.find("'initial'"), std::string::npos);
  EXPECT_EQ(run({"count", "--ns", "1"}).code, cli::kExitError);
  EXPECT_EQ(run({}).code, cli::kExitError);
  EXPECT_EQ(run({"count", "--bogus"}).code, cli::kExitError);
}

TEST(Cli, ConfigFileFlagsAndEnvironment) {
  const auto root = test::scratch_dir("cli_config");
  {
    std::ofstream f(root / "run.toml");
    f << "ns = 3\nna = 1\nseed = 4\nmax-iter = 17\n";
  }
  auto meta_of = [&](const fs::path& out) { return json::parse(slurp(run_dirs(out).at(0) / "meta.json"))["config"]; };

  ASSERT_EQ(run({"count", "--config", (root / "run.toml").string(), "--out", (root / "file").string()}).code, 0);
  json cfg = meta_of(root / "file");
  EXPECT_EQ(cfg["ns"], 3);
  EXPECT_EQ(cfg["max-iter"], 17);

  // A flag beats the file.
  ASSERT_EQ(
      run({"count", "--config", (root / "run.toml").string(), "--ns", "2", "--out", (root / "flag").string()}).code, 0);
  EXPECT_EQ(meta_of(root / "flag")["ns"], 2);

  ::setenv("FKCLOCK_NA", "3", 1);
  ::setenv("FKCLOCK_MAX_ITER", "9", 1);
  const int env_code = run({"count", "--out", (root / "env").string()}).code;
  ::unsetenv("FKCLOCK_NA");
  ::unsetenv("FKCLOCK_MAX_ITER");
  ASSERT_EQ(env_code, 0);
  cfg = meta_of(root / "env");
  EXPECT_EQ(cfg["na"], 3);
  EXPECT_EQ(cfg["max-iter"], 9);
}

TEST(Cli, CountSubsets) {
  const auto root = test::scratch_dir("cli_count");
  ASSERT_EQ(run({"count", "--ansatz", "--ns", "6", "--na", "6", "--out", root.string()}).code, 0);
  const json c = json::parse(slurp(run_dirs(root).at(0) / "counts.json"));
  EXPECT_EQ(c["parameters"], 504);
  EXPECT_EQ(c["cx_ansatz"], 126);
  EXPECT_FALSE(c.contains("cx_trotter"));
}

TEST(Cli, ReproduceWritesDatasets) {
  const auto root = test::scratch_dir("cli_reproduce");
  const auto r = run({"reproduce", "fig2", "--scale", "desk", "--out", root.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto dir = run_dirs(root).at(0);
  for (const char* f : {"fig2_ns2_na2.csv", "fig2_ns2_na3.csv", "meta.json"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_EQ(read_csv(dir / "fig2_ns2_na3.csv").size(), 9u);
}

TEST(Cli, VersionAndHelp) {
  const auto v = run({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(kVersion), std::string::npos);
  const auto h = run({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("noise-sweep"), std::string::npos);
}

}  // namespace
}  // namespace fkclock
