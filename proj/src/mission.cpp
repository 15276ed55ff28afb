#include "nurbsvo/mission.hpp"

#include <cmath>

namespace nurbsvo {

std::string to_string(MissionOutcome outcome) {
    switch (outcome) {
        case MissionOutcome::success:
            return "success";
        case MissionOutcome::collision:
            return "collision";
        case MissionOutcome::timeout:
            return "timeout";
        case MissionOutcome::missed_waypoint:
            return "missed_waypoint";
    }
    return "unknown";
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over the combined words
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

namespace {

constexpr std::uint64_t kInitialPathStream = 1ULL << 32;

}  // namespace

std::vector<NurbsCurve> plan_initial_paths(const Scenario& scenario, std::uint64_t seed) {
    std::vector<StaticObstacle> known;
    for (const StaticObstacle& s : scenario.statics) {
        if (s.known) {
            known.push_back(s);
        }
    }
    std::vector<NurbsCurve> paths;
    for (std::size_t k = 0; k + 1 < scenario.waypoints.size(); ++k) {
        NurbsCurve path = initial_path(scenario.waypoints[k], scenario.waypoints[k + 1], scenario.planner);
        paths.push_back(refine_initial_path(path, known, scenario.start.speed, scenario.planner,
                                            derive_seed(seed, kInitialPathStream + k)));
    }
    return paths;
}

SimLog run_mission(const Scenario& scenario, std::optional<std::uint64_t> seed_override) {
    scenario.validate();
    const std::uint64_t seed = seed_override.value_or(scenario.seed);
    const PlannerConfig& config = scenario.planner;
    const VehicleLimits limits(config.kappa_max);
    const double dt = scenario.dt();
    const auto steps_per_cycle =
        static_cast<std::size_t>(std::max(1.0, std::ceil(config.replan_interval / dt - 1e-9)));
    const std::size_t last_segment = scenario.waypoints.size() - 2;

    SimLog log;
    log.initial_paths = plan_initial_paths(scenario, seed);

    World world(scenario.statics, scenario.dynamics, 0.0);
    UavState state = scenario.start;
    std::size_t segment = 0;
    NurbsCurve active = log.initial_paths.front();
    std::optional<NurbsCurve> pending;
    std::optional<double> hint;
    std::size_t cycle = 0;
    bool finished = false;

    for (std::size_t step = 0; step < scenario.sim.max_steps && !finished; ++step) {
        if (step % steps_per_cycle == 0) {
            if (pending) {
                active = std::move(*pending);
                pending.reset();
                hint.reset();
            }
            SensedSnapshot snapshot = sense(world, state.position, config.r_view);
            try {
                ReplanResult result = replan_cycle(active, state, snapshot, config, derive_seed(seed, cycle));
                if (result.status == ReplanResult::Status::optimized) {
                    pending = result.curve;
                    log.replans.push_back(ReplanRecord{world.clock(), segment, cycle, std::move(result)});
                    log.snapshots.push_back(std::move(snapshot));
                }
            } catch (const ReplanError&) {
                ++log.replan_errors;
            }
            ++cycle;
        }

        const FieldSample field = evaluate_field(active, state.position, config.gains, hint);
        hint = field.projection.s;
        const double u = heading_rate_command(state, field.direction, limits, config.gains);
        state = step_dubins(state, u, dt, limits);
        world.step(dt);

        StepRecord record;
        record.t = world.clock();
        record.position = state.position;
        record.heading = state.heading;
        record.s_anchor = field.projection.s;
        record.clearance = clearance(world, state.position, config.r_u, config.r_safe);
        record.segment = segment;
        record.turn_rate = u;
        log.steps.push_back(record);

        if (const auto hit = check_collision(world, state.position, config.r_u, config.r_safe)) {
            log.collisions.push_back(*hit);
            log.outcome = MissionOutcome::collision;
            break;
        }

        const Vec2& target = scenario.waypoints[segment + 1].position;
        const double distance = (state.position - target).norm();
        if (distance <= config.waypoint_tolerance) {
            log.waypoints_reached.push_back({segment + 1, world.clock(), distance});
            if (segment == last_segment) {
                log.outcome = MissionOutcome::success;
                finished = true;
                continue;
            }
            ++segment;
            active = log.initial_paths[segment];
            pending.reset();
            hint.reset();
        } else if (field.projection.s >= 1.0 && !pending) {
            // Past the end of the final curve without entering the tolerance disc.
            log.outcome = MissionOutcome::missed_waypoint;
            finished = true;
        }
    }
    return log;
}

}  // namespace nurbsvo
