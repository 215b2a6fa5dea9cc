// End-to-end checks of the installed CLI binary: exit codes, output files,
// and byte-level reproducibility.

#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

int run(const std::string& args) {
    const std::string cmd = std::string(EHVI_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, HelpExitsCleanly) {
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("compare --help"), 0);
}

TEST(Cli, UnknownFlagIsConfigError) {
    EXPECT_EQ(run("compare --no-such-flag"), 2);
    EXPECT_EQ(run("compare --shape not-a-shape --trials 4"), 2);
}

TEST(Cli, CompareWritesOutput) {
    const std::string out = temp_path("ehvi_cli_compare.csv");
    EXPECT_EQ(run("compare --shape concave-sphere --m 2 --count 20 --trials 6 "
                  "--mc-samples 500 --gh-nodes 3 5 --seed 3 --out " + out),
              0);
    EXPECT_TRUE(std::filesystem::exists(out));
    std::filesystem::remove(out);
}

TEST(Cli, RepeatRunsAreByteIdentical) {
    const std::string a = temp_path("ehvi_cli_det_a.json");
    const std::string b = temp_path("ehvi_cli_det_b.json");
    const std::string flags =
        "compare --shape linear --m 2 --count 15 --trials 5 --mc-samples 300 "
        "--gh-nodes 4 --seed 11 --format json --out ";
    ASSERT_EQ(run(flags + a), 0);
    ASSERT_EQ(run(flags + b), 0);
    EXPECT_EQ(slurp(a), slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Cli, GridDumpBadPathFailsWithoutFile) {
    EXPECT_EQ(run("gh-grid --mu 0 0 --cov 1 0 0 1 --n 4 --prune 0.2 "
                  "--out /nonexistent-dir/grid.csv"),
              2);
    EXPECT_FALSE(std::filesystem::exists("/nonexistent-dir/grid.csv"));
}

TEST(Cli, NonSpdCovarianceIsNumericalFailure) {
    EXPECT_EQ(run("gh-grid --mu 0 0 --cov 1 2 2 1 --n 4 --prune 0.2 --out " +
                  temp_path("ehvi_cli_bad.csv")),
              3);
}

TEST(Cli, CorrelatedSubcommandRuns) {
    EXPECT_EQ(run("correlated --shape concave-sphere --m 2 --count 15 --trials 5 "
                  "--mc-samples 500 --gh-nodes 5 --seed 2"),
              0);
}

TEST(Cli, ThreadCapDoesNotChangeResults) {
    const std::string a = temp_path("ehvi_cli_thr_a.csv");
    const std::string b = temp_path("ehvi_cli_thr_b.csv");
    const std::string flags =
        "compare --shape convex --m 2 --count 15 --trials 6 --mc-samples 400 "
        "--gh-nodes 4 --seed 13 --out ";
    ASSERT_EQ(run(flags + a), 0);
    {
        const std::string cmd = std::string("EHVI_QUAD_THREADS=2 ") + EHVI_CLI_PATH +
                                " " + flags + b + " > /dev/null 2>&1";
        ASSERT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    }
    EXPECT_EQ(slurp(a), slurp(b));
    std::filesystem::remove(a);
    std::filesystem::remove(b);
}

TEST(Cli, ConfigFileWithFlagOverride) {
    const std::string ini = temp_path("ehvi_cli_config.ini");
    const std::string out = temp_path("ehvi_cli_config_out.csv");
    {
        std::ofstream f(ini);
        f << "shape=linear\nm=2\ncount=12\ntrials=40\nmc-samples=300\n"
          << "gh-nodes=3 5\nseed=21\n";
    }
    // --trials on the command line overrides the config file's 40
    ASSERT_EQ(run("compare --config " + ini + " --trials 4 --out " + out), 0);
    const std::string content = slurp(out);
    EXPECT_EQ(static_cast<int>(std::count(content.begin(), content.end(), '\n')),
              1 + 4);  // header + one row per trial
    std::filesystem::remove(ini);
    std::filesystem::remove(out);
}

TEST(Cli, SingleEvaluationFromFiles) {
    const std::string front = temp_path("ehvi_cli_front.csv");
    const std::string density = temp_path("ehvi_cli_density.json");
    {
        std::ofstream f(front);
        f << "0.0,1.0\n0.5,0.5\n1.0,0.0\n";
        std::ofstream d(density);
        d << R"({"mean":[0.2,0.2],"covariance":[0.05,0.0,0.0,0.05]})";
    }
    EXPECT_EQ(run("ehvi --front " + front + " --density " + density +
                  " --method exact2d"),
              0);
    EXPECT_EQ(run("ehvi --front " + front + " --density " + density +
                  " --method gh --gh-n 7"),
              0);
    EXPECT_EQ(run("ehvi --front " + front + " --density " + density +
                  " --method mc --mc-samples 1000 --seed 4"),
              0);
    EXPECT_EQ(run("ehvi --front " + front + " --density " + density +
                  " --method reference --cells 100"),
              0);
    const std::string grid_out = temp_path("ehvi_cli_density_grid.csv");
    EXPECT_EQ(run("gh-grid --density " + density + " --n 5 --prune 0.2 --out " +
                  grid_out),
              0);
    EXPECT_TRUE(std::filesystem::exists(grid_out));
    std::filesystem::remove(grid_out);
    std::filesystem::remove(front);
    std::filesystem::remove(density);
}
