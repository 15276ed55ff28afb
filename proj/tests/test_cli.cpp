#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

#include "nurbsvo/cli.hpp"

using namespace nurbsvo;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "nurbsvo_cli_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_scenario(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "scenario.json";
    std::ofstream(p) << body;
    return p;
}

const char* kShort = R"({
    "uav": {"speed": 15.0},
    "waypoints": [{"pos": [0, 0], "heading": 0}, {"pos": [90, 0], "heading": 0}],
    "static_obstacles": [{"center": [45, 60], "radius": 10}],
    "planner": {"budget": 200, "pop_init": 20},
    "sim": {"max_steps": 2000}
})";

int shell(const std::string& args) {
    const int status = std::system((std::string(NURBSVO_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, ValidateWritesNothing) {
    const fs::path dir = scratch("validate");
    RunOptions o;
    o.scenario = write_scenario(dir, kShort);
    o.out = dir / "out";
    o.mode = RunMode::validate;
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run(o, out, err), kExitOk);
    EXPECT_NE(out.str().find("scenario ok"), std::string::npos);
    EXPECT_FALSE(fs::exists(o.out));
}

TEST(Cli, BadInputExitCode) {
    const fs::path dir = scratch("bad");
    RunOptions o;
    o.scenario = write_scenario(dir, R"({"uav": {}, "waypoints": []})");
    o.out = dir / "out";
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run(o, out, err), kExitBadInput);
    EXPECT_NE(err.str().find("error:"), std::string::npos);
    o.scenario = dir / "does_not_exist.json";
    EXPECT_EQ(run(o, out, err), kExitBadInput);
}

TEST(Cli, MissionWritesArtifacts) {
    const fs::path dir = scratch("mission");
    RunOptions o;
    o.scenario = write_scenario(dir, kShort);
    o.out = dir / "out";
    o.plot = true;
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(run(o, out, err), kExitOk) << err.str();
    for (const char* f : {"trajectory.csv", "metrics.json", "curves.jsonl", "plot.svg"}) {
        EXPECT_TRUE(fs::exists(o.out / f)) << f;
    }
    std::ifstream metrics(o.out / "metrics.json");
    const nlohmann::json m = nlohmann::json::parse(metrics);
    EXPECT_EQ(m["outcome"], "success");
    EXPECT_TRUE(m["success"].get<bool>());
}

TEST(Cli, MissionFailureExitCode) {
    const fs::path dir = scratch("failure");
    RunOptions o;
    o.scenario = write_scenario(dir, R"({
        "uav": {"speed": 15.0, "r_view": 0.001},
        "waypoints": [{"pos": [0, 0], "heading": 0}, {"pos": [90, 0], "heading": 0}],
        "static_obstacles": [{"center": [45, 0], "radius": 5, "known": false}],
        "planner": {"budget": 100, "pop_init": 10}
    })");
    o.out = dir / "out";
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(run(o, out, err), kExitMissionFailure);
    std::ifstream metrics(o.out / "metrics.json");
    EXPECT_EQ(nlohmann::json::parse(metrics)["outcome"], "collision");
}

TEST(Cli, BenchWritesReport) {
    const fs::path dir = scratch("bench");
    RunOptions o;
    o.scenario = write_scenario(dir, kShort);
    o.out = dir / "out";
    o.mode = RunMode::bench_replan;
    o.replans = 3;
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(run(o, out, err), kExitOk) << err.str();
    std::ifstream bench(o.out / "bench.json");
    const nlohmann::json b = nlohmann::json::parse(bench);
    EXPECT_EQ(b["replans"], 3);
    EXPECT_EQ(b["dimension"], 26);
}

TEST(Cli, CommandLineParsing) {
    const fs::path dir = scratch("argv");
    const fs::path sc = write_scenario(dir, kShort);
    EXPECT_EQ(shell("--help"), 0);
    EXPECT_EQ(shell("--mode validate"), kExitBadInput);
    EXPECT_EQ(shell("--scenario " + sc.string() + " --mode nonsense"), kExitBadInput);
    EXPECT_EQ(shell("--scenario " + sc.string() + " --bogus"), kExitBadInput);
    EXPECT_EQ(shell("--scenario " + sc.string() + " --mode VALIDATE"), kExitOk);
    EXPECT_EQ(shell("--scenario " + sc.string() + " --mode validate --seed 5 --disable-vo --disable-curvature"),
              kExitOk);
}
