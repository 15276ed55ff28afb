#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace nurbsvo {

enum class RunMode { mission, bench_replan, validate };

struct RunOptions {
    std::filesystem::path scenario;
    std::filesystem::path out = "out";
    std::optional<std::uint64_t> seed;
    RunMode mode = RunMode::mission;
    bool disable_vo = false;
    bool disable_curvature = false;
    bool plot = false;
    std::size_t replans = 50;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitMissionFailure = 2;
inline constexpr int kExitBadInput = 3;

/// Runs one mode and writes its files. Diagnostics go to `err`, summaries to `out`.
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// Parses the command line and calls run().
int run_cli(int argc, char** argv);

}  // namespace nurbsvo
