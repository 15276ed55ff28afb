#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nurbsvo/planner.hpp"
#include "nurbsvo/tracking.hpp"
#include "nurbsvo/world.hpp"

namespace nurbsvo {

struct SimConfig {
    /// Zero means replan_interval / 10.
    double dt = 0.0;
    std::size_t max_steps = 20000;
};

/// A complete mission description. waypoints[0] is the departure pose; the vehicle starts at
/// `start`, which defaults to that pose.
struct Scenario {
    std::string name;
    UavState start;
    std::vector<Waypoint> waypoints;
    std::vector<StaticObstacle> statics;
    std::vector<DynamicObstacle> dynamics;
    PlannerConfig planner;
    SimConfig sim;
    std::uint64_t seed = 0;

    double dt() const { return sim.dt > 0.0 ? sim.dt : planner.replan_interval / 10.0; }
    /// Throws ScenarioError naming the offending field.
    void validate() const;
};

class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace nurbsvo
