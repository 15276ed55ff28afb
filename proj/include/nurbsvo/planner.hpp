#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "nurbsvo/lshade.hpp"
#include "nurbsvo/nurbs.hpp"
#include "nurbsvo/path_shape.hpp"
#include "nurbsvo/tracking.hpp"
#include "nurbsvo/velocity_obstacle.hpp"
#include "nurbsvo/world.hpp"

namespace nurbsvo {

/// Optimizer defaults for one replan cycle.
inline OptimizerConfig replan_optimizer_defaults() {
    OptimizerConfig config;
    config.pop_init = 40;
    config.budget = 1500;
    config.warm_spread = 0.25;
    return config;
}

/// Lower bound on |C'(s)| relative to the path length, part of the curvature constraint.
inline constexpr double kMinParametricSpeed = 0.1;

/// Grid multiplier and tolerance of the curvature re-check applied to every replan result.
inline constexpr int kCurvatureCheckDensity = 4;
inline constexpr double kCurvatureTolerance = 1e-6;

struct Waypoint {
    Vec2 position = Vec2::Zero();
    double heading = 0.0;
};

/// Everything the deliberative planner needs. Radii in meters, times in seconds.
struct PlannerConfig {
    double replan_interval = 0.1;
    double vo_horizon = 5.0;
    double kappa_max = 0.02;
    double r_u = 0.0;
    double r_safe = 5.0;
    double r_view = 150.0;
    std::size_t n_interior = 8;
    int degree = 3;
    int n_curv_samples = 64;
    int n_vo_samples = 20;
    int n_obs_samples = 64;
    double waypoint_tolerance = 2.0;

    /// Share of the replan interval granted to the optimizer in wall-clock mode.
    double deadline_fraction = 0.8;
    /// Evaluation-budget mode: no wall clock, fully reproducible.
    bool budget_mode = true;

    bool enable_vo = true;
    VoHorizon vo_mode = VoHorizon::rolling;
    bool enable_curvature = true;

    // Plan-delta box, in multiples of the minimum turn radius where noted.
    double point_bound = 2.0;
    double weight_bound = 0.5;
    double lambda_min = 0.05;
    double lambda_max = 2.0;
    WeightLimits weight_limits;

    OptimizerConfig optimizer = replan_optimizer_defaults();
    /// Evaluations for refining an initial path that violates the known-map constraints.
    std::size_t offline_budget = 20000;
    FieldGains gains;

    double min_turn_radius() const { return 1.0 / kappa_max; }
    std::size_t path_points() const { return n_interior + 2 * (kHeadingPoints + 1); }
    /// Throws std::invalid_argument on inconsistent values.
    void validate() const;
};

/// Obstacles handed to the constraint evaluator. Dynamic states are at the curve's start time.
struct ObstacleSet {
    std::vector<StaticObstacle> statics;
    std::vector<ObstacleState> dynamic;
};

struct ConstraintViolations {
    double obstacle = 0.0;
    double curvature = 0.0;
    double vo = 0.0;

    double total() const { return obstacle + curvature + vo; }
    bool feasible() const { return obstacle == 0.0 && curvature == 0.0 && vo == 0.0; }
};

/// Sampled violations of the three constraint families; `density` multiplies every sample count.
ConstraintViolations constraint_violations(const NurbsCurve& candidate, const ObstacleSet& obstacles, double speed,
                                           const PlannerConfig& config, int density = 1);

/// Path length (the objective) and violations from one shared arc-length table.
struct CandidateScore {
    double length = 0.0;
    ConstraintViolations violations;
};
CandidateScore score_candidate(const NurbsCurve& candidate, const ObstacleSet& obstacles, double speed,
                               const PlannerConfig& config, int density = 1);

/// Straight-chord path with the waypoint headings, lambda = min(rho_min, 0.1 * chord).
NurbsCurve initial_path(const Waypoint& from, const Waypoint& to, const PlannerConfig& config);

/// Offline refinement of an initial path against known static zones and the curvature limit.
/// Returns the input unchanged when it already satisfies them.
NurbsCurve refine_initial_path(const NurbsCurve& path, const std::vector<StaticObstacle>& known, double speed,
                               const PlannerConfig& config, std::uint64_t seed);

struct CutPath {
    NurbsCurve curve;
    /// Split parameter on the input curve.
    double s_split = 0.0;
    /// Arc length of the input curve before the split.
    double consumed = 0.0;
};

/// Projects the vehicle onto the curve, advances speed * interval along it and keeps the part
/// ahead of that point. nullopt when the advanced point reaches the end of the curve.
std::optional<CutPath> cut_path_at_projection(const NurbsCurve& curve, const UavState& state, double interval);

/// Box for plan deltas of `base` (see PlannerConfig for the scaling).
DeltaBounds delta_bounds(const NurbsCurve& base, const PlannerConfig& config, double point_scale = 1.0);

struct ReplanResult {
    enum class Status { optimized, segment_end };

    ReplanResult(Status status_, NurbsCurve curve_) : status(status_), curve(std::move(curve_)) {}

    Status status;
    NurbsCurve curve;
    bool feasible = false;
    double length = 0.0;
    ConstraintViolations violations;
    double wall_time = 0.0;
    std::size_t evaluations = 0;
    double s_split = 0.0;
    double consumed = 0.0;
    std::vector<double> delta;
};

/// Raised when the optimizer could not complete a single evaluation; carries the uncut curve.
class ReplanError : public std::runtime_error {
public:
    ReplanError(const std::string& what, NurbsCurve previous)
        : std::runtime_error(what), previous_(std::move(previous)) {}
    const NurbsCurve& previous() const { return previous_; }

private:
    NurbsCurve previous_;
};

/// Obstacle set for a curve that starts `lead_time` after the snapshot.
ObstacleSet predict_obstacles(const SensedSnapshot& snapshot, double lead_time);

/// One deliberative cycle: cut at the predicted anchor, optimize the plan delta under the
/// length objective and the three constraint families, and return the updated path.
ReplanResult replan_cycle(const NurbsCurve& curve, const UavState& state, const SensedSnapshot& sensed,
                          const PlannerConfig& config, std::uint64_t seed);

}  // namespace nurbsvo
