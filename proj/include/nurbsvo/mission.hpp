#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nurbsvo/planner.hpp"
#include "nurbsvo/scenario.hpp"

namespace nurbsvo {

struct StepRecord {
    double t = 0.0;
    Vec2 position = Vec2::Zero();
    double heading = 0.0;
    /// Tracker projection parameter on the active curve.
    double s_anchor = 0.0;
    double clearance = 0.0;
    std::size_t segment = 0;
    /// Commanded heading rate after saturation, rad/s.
    double turn_rate = 0.0;
};

struct ReplanRecord {
    double t = 0.0;
    std::size_t segment = 0;
    std::size_t cycle = 0;
    ReplanResult result;
};

struct WaypointEvent {
    std::size_t index = 0;
    double t = 0.0;
    double distance = 0.0;
};

enum class MissionOutcome { success, collision, timeout, missed_waypoint };

std::string to_string(MissionOutcome outcome);

struct SimLog {
    std::vector<StepRecord> steps;
    std::vector<ReplanRecord> replans;
    std::vector<SensedSnapshot> snapshots;
    std::vector<CollisionEvent> collisions;
    std::vector<WaypointEvent> waypoints_reached;
    std::vector<NurbsCurve> initial_paths;
    std::size_t replan_errors = 0;
    MissionOutcome outcome = MissionOutcome::timeout;

    bool success() const { return outcome == MissionOutcome::success; }
};

/// Per-purpose seed derived from the mission seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Straight initial paths for every waypoint pair, refined offline against the known zones when needed.
std::vector<NurbsCurve> plan_initial_paths(const Scenario& scenario, std::uint64_t seed);

/// Fixed-step simulation. Every ceil(T_s / dt) steps the planner replans on a fresh snapshot while
/// the tracker keeps following the active curve; the result becomes active at the next cycle.
SimLog run_mission(const Scenario& scenario, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace nurbsvo
