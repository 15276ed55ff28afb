#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nurbsvo/mission.hpp"
#include "nurbsvo/scenario.hpp"

namespace nurbsvo {

/// Value as written with nine significant digits and read back.
double quantize(double x);
std::string format_number(double x);

struct TimingStats {
    double median = 0.0;
    double p95 = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

/// Nearest-rank percentiles. Empty input gives zeros.
TimingStats timing_stats(std::vector<double> samples);

struct MetricsReport {
    bool success = false;
    std::string outcome;
    std::size_t steps = 0;
    double duration = 0.0;
    /// Sum of segment lengths between the logged (quantized) positions.
    double path_length = 0.0;
    /// Minimum logged (quantized) clearance; nullopt when no hazard ever existed.
    std::optional<double> min_clearance;
    std::size_t waypoints_reached = 0;
    std::size_t replans = 0;
    std::size_t feasible_replans = 0;
    std::size_t replan_errors = 0;
    TimingStats replan_time;
    std::size_t evaluations_total = 0;
    std::size_t evaluations_max = 0;
    std::vector<CollisionEvent> collisions;
};

MetricsReport compute_metrics(const SimLog& log);
nlohmann::json metrics_to_json(const MetricsReport& metrics);

/// Columns: t,x,y,heading,s_anchor,clearance. One row per logged step.
std::string trajectory_csv(const SimLog& log);
/// One JSON object per line: {t, segment, cycle, feasible, length, violations, evaluations, curve}.
std::string curves_jsonl(const SimLog& log);
/// Deterministic SVG of the world, obstacle tracks, waypoints and executed path. Throws on an empty log.
std::string render_svg(const SimLog& log, const Scenario& scenario);

struct SvgFrame {
    double width = 800.0;
    double height = 800.0;
    double margin = 20.0;
    Vec2 lower = Vec2::Zero();
    Vec2 upper = Vec2::Ones();

    Vec2 to_canvas(const Vec2& world) const;
};
/// World-to-canvas mapping covering waypoints, zones, logged positions and obstacle tracks.
SvgFrame svg_frame(const SimLog& log, const Scenario& scenario);

struct BenchReport {
    std::size_t replans = 0;
    std::size_t dimension = 0;
    std::size_t sensed_obstacles = 0;
    bool budget_mode = false;
    TimingStats wall_time;
    TimingStats evaluations;
    std::size_t feasible = 0;
};

/// N isolated replan cycles on the scenario's initial snapshot (vehicle at its start pose).
BenchReport bench_replan(const Scenario& scenario, std::size_t replans, std::uint64_t seed);
nlohmann::json bench_to_json(const BenchReport& bench);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nurbsvo
