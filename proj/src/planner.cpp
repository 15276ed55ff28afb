#include "nurbsvo/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

namespace nurbsvo {

void PlannerConfig::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) {
            throw std::invalid_argument(std::string("planner config: ") + what);
        }
    };
    require(replan_interval > 0.0, "replan interval must be positive");
    require(vo_horizon > replan_interval, "VO horizon must exceed the replan interval");
    require(kappa_max > 0.0 && std::isfinite(kappa_max), "kappa_max must be positive");
    require(r_u >= 0.0, "r_u must be non-negative");
    require(r_safe > 0.0 && r_view > 0.0, "safety and sensing radii must be positive");
    require(n_interior >= 1, "n_interior must be at least 1");
    require(degree >= 1 && degree <= kMaxDegree, "degree out of range");
    require(n_curv_samples >= 2 && n_vo_samples >= 2 && n_obs_samples >= 2, "sample counts must be >= 2");
    require(waypoint_tolerance > 0.0, "waypoint tolerance must be positive");
    require(deadline_fraction > 0.0 && deadline_fraction <= 1.0, "deadline fraction must be in (0, 1]");
    require(point_bound > 0.0 && weight_bound > 0.0, "delta bounds must be positive");
    require(lambda_min > 0.0 && lambda_min < lambda_max, "lambda bounds must satisfy 0 < min < max");
    require(weight_limits.min > 0.0 && weight_limits.min < weight_limits.max, "weight limits invalid");
    require(optimizer.budget > 0 && offline_budget > 0, "optimizer budgets must be positive");
    require(gains.beta > 0.0 && gains.k_heading > 0.0, "field gains must be positive");
}

namespace {

double segment_distance(const Vec2& a, const Vec2& b, const Vec2& q) {
    const Vec2 ab = b - a;
    const double len_sq = ab.squaredNorm();
    const double t = len_sq > 0.0 ? std::clamp((q - a).dot(ab) / len_sq, 0.0, 1.0) : 0.0;
    return (a + t * ab - q).norm();
}

}  // namespace

CandidateScore score_candidate(const NurbsCurve& candidate, const ObstacleSet& obstacles, double speed,
                               const PlannerConfig& config, int density) {
    density = std::max(1, density);
    const ArcLengthTable table(candidate, 2);
    CandidateScore score;
    score.length = table.total();
    ConstraintViolations& v = score.violations;

    if (!obstacles.statics.empty()) {
        // Samples are uniform in arc length and each zone is tested against the chords between them.
        // A curve within the curvature limit strays at most kappa_max * h^2 / 8 from a chord of length h.
        const int n = config.n_obs_samples * density;
        const double h = score.length / (n - 1);
        const double sag = config.kappa_max * h * h / 8.0;
        Vec2 previous = candidate.front();
        for (int j = 0; j < n; ++j) {
            const Vec2 p = candidate.evaluate(table.approximate_parameter_at(j * h));
            for (const StaticObstacle& zone : obstacles.statics) {
                const double reach = zone.radius + config.r_safe + config.r_u + sag;
                v.obstacle += std::max(0.0, reach - segment_distance(previous, p, zone.center));
            }
            previous = p;
        }
    }

    if (config.enable_curvature) {
        const int n = config.n_curv_samples * density;
        const double ds = 1.0 / (n - 1);
        std::vector<double> kappa(static_cast<std::size_t>(n));
        double previous_heading = 0.0;
        Vec2 previous_point = Vec2::Zero();
        for (int j = 0; j < n; ++j) {
            const CurveSample sample = candidate.sample(j * ds);
            kappa[static_cast<std::size_t>(j)] = sample.curvature;
            v.curvature += std::max(0.0, sample.curvature - config.kappa_max) * ds;
            // Near-stationary parameterizations hide cusps between samples.
            v.curvature += std::max(0.0, kMinParametricSpeed - sample.tangent.norm() / score.length);
            // A turn of angle a at curvature k spans a chord of at least 2 sin(a / 2) / k, so spikes
            // between grid points still count.
            const double heading = angle_of(sample.tangent);
            if (j > 0) {
                const double turn = std::abs(wrap_angle(heading - previous_heading));
                const double chord = (sample.point - previous_point).norm();
                v.curvature += std::max(0.0, 2.0 * std::sin(0.5 * turn) - config.kappa_max * chord - 1e-9);
            }
            previous_heading = heading;
            previous_point = sample.point;
        }
        // Local peaks close to the limit are refined between their neighbours.
        for (int j = 0; j < n; ++j) {
            const double k = kappa[static_cast<std::size_t>(j)];
            const bool left = j == 0 || k >= kappa[static_cast<std::size_t>(j - 1)];
            const bool right = j == n - 1 || k >= kappa[static_cast<std::size_t>(j + 1)];
            if (left && right && k > 0.9 * config.kappa_max) {
                const CurvaturePeak refined =
                    refine_curvature_peak(candidate, std::max(0.0, (j - 1) * ds), std::min(1.0, (j + 1) * ds), 1e-5);
                v.curvature += std::max(0.0, refined.curvature - config.kappa_max);
            }
        }
    }

    if (config.enable_vo && !obstacles.dynamic.empty()) {
        v.vo = path_vo_violation(candidate, table, speed, obstacles.dynamic, config.r_u + config.r_safe,
                                 config.vo_horizon, config.n_vo_samples * density, config.vo_mode);
    }
    return score;
}

ConstraintViolations constraint_violations(const NurbsCurve& candidate, const ObstacleSet& obstacles, double speed,
                                           const PlannerConfig& config, int density) {
    return score_candidate(candidate, obstacles, speed, config, density).violations;
}

NurbsCurve initial_path(const Waypoint& from, const Waypoint& to, const PlannerConfig& config) {
    const double chord = (to.position - from.position).norm();
    if (chord == 0.0) {
        throw std::invalid_argument("initial_path: waypoints coincide");
    }
    const double lambda = std::min(config.min_turn_radius(), 0.1 * chord);
    const HeadingSpec spec{from.heading, to.heading, lambda, lambda};
    return build_path_with_headings(from.position, to.position, spec, config.n_interior, config.degree);
}

DeltaBounds delta_bounds(const NurbsCurve& base, const PlannerConfig& config, double point_scale) {
    const DeltaLayout layout(base.size());
    const double rho = config.min_turn_radius();
    DeltaBounds bounds{std::vector<double>(layout.dimension()), std::vector<double>(layout.dimension())};
    const double point = config.point_bound * rho * point_scale;
    for (std::size_t k = 0; k < layout.n_movable(); ++k) {
        for (std::size_t c = 0; c < 2; ++c) {
            bounds.lower[layout.point_offset(k) + c] = -point;
            bounds.upper[layout.point_offset(k) + c] = point;
        }
        bounds.lower[layout.weight_offset(k)] = -config.weight_bound;
        bounds.upper[layout.weight_offset(k)] = config.weight_bound;
    }
    // The current spacings stay inside the box so that the identity delta is admissible.
    const auto [lambda_start, lambda_goal] = heading_spacings(base);
    const auto set_lambda = [&](std::size_t i, double current) {
        bounds.lower[i] = std::min(config.lambda_min * rho, current);
        bounds.upper[i] = std::max(config.lambda_max * rho, current);
        if (!(bounds.lower[i] > 0.0)) {
            bounds.lower[i] = config.lambda_min * rho;
        }
    };
    set_lambda(layout.lambda_start_index(), lambda_start);
    set_lambda(layout.lambda_goal_index(), lambda_goal);
    return bounds;
}

namespace {

ProblemDef make_problem(const NurbsCurve& base, const DeltaBounds& bounds, const ObstacleSet& obstacles,
                        double speed, const PlannerConfig& config) {
    ProblemDef problem;
    problem.lower = bounds.lower;
    problem.upper = bounds.upper;
    problem.evaluate = [&base, &bounds, &obstacles, speed, &config](std::span<const double> x) {
        const NurbsCurve candidate = apply_delta(base, x, bounds, config.weight_limits);
        const CandidateScore score = score_candidate(candidate, obstacles, speed, config);
        return Evaluation{score.length,
                          {score.violations.obstacle, score.violations.curvature, score.violations.vo}};
    };
    return problem;
}

}  // namespace

NurbsCurve refine_initial_path(const NurbsCurve& path, const std::vector<StaticObstacle>& known, double speed,
                               const PlannerConfig& config, std::uint64_t seed) {
    const ObstacleSet obstacles{known, {}};
    if (score_candidate(path, obstacles, speed, config).violations.feasible()) {
        return path;
    }
    const double chord = (path.back() - path.front()).norm();
    const double point_scale =
        std::max(1.0, 0.5 * chord / (config.point_bound * config.min_turn_radius()));
    const DeltaBounds bounds = delta_bounds(path, config, point_scale);
    const ProblemDef problem = make_problem(path, bounds, obstacles, speed, config);

    OptimizerConfig opt = config.optimizer;
    opt.pop_init = 0;
    opt.budget = config.offline_budget;
    opt.deadline.reset();
    opt.seed = seed;
    const std::vector<double> warm = identity_delta(path);
    const OptimizeResult result = optimize(problem, opt, std::span<const double>(warm));
    return apply_delta(path, result.best->x, bounds, config.weight_limits);
}

std::optional<CutPath> cut_path_at_projection(const NurbsCurve& curve, const UavState& state, double interval) {
    const Projection projection = project_point(curve, state.position);
    const double advance = state.speed * interval;
    double s_split = projection.s;
    if (advance > 0.0) {
        const ArcLengthTable table(curve, 4);
        const double target = table.length_at(projection.s) + advance;
        if (target >= table.total()) {
            return std::nullopt;
        }
        s_split = table.parameter_at(target);
    }
    if (s_split >= 1.0) {
        return std::nullopt;
    }
    if (s_split <= 0.0) {
        return CutPath{curve, 0.0, 0.0};
    }
    return CutPath{split(curve, s_split).second, s_split, arc_length(curve, 0.0, s_split)};
}

ObstacleSet predict_obstacles(const SensedSnapshot& snapshot, double lead_time) {
    ObstacleSet set;
    set.statics = snapshot.statics;
    set.dynamic.reserve(snapshot.dynamic.size());
    for (ObstacleState o : snapshot.dynamic) {
        o.position += lead_time * o.velocity;
        set.dynamic.push_back(o);
    }
    return set;
}

ReplanResult replan_cycle(const NurbsCurve& curve, const UavState& state, const SensedSnapshot& sensed,
                          const PlannerConfig& config, std::uint64_t seed) {
    using Clock = std::chrono::steady_clock;
    const auto started = Clock::now();
    const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - started).count(); };

    const std::optional<CutPath> cut = cut_path_at_projection(curve, state, config.replan_interval);
    if (!cut) {
        ReplanResult ended(ReplanResult::Status::segment_end, curve);
        ended.s_split = 1.0;
        ended.wall_time = elapsed();
        return ended;
    }

    const NurbsCurve base = refine_to_count(cut->curve, config.path_points());
    // The new path takes over one interval from now.
    const ObstacleSet obstacles = predict_obstacles(sensed, config.replan_interval);
    const DeltaBounds bounds = delta_bounds(base, config);
    const ProblemDef problem = make_problem(base, bounds, obstacles, state.speed, config);

    OptimizerConfig opt = config.optimizer;
    opt.seed = seed;
    if (config.budget_mode) {
        opt.deadline.reset();
    } else {
        const double remaining = config.deadline_fraction * config.replan_interval - elapsed();
        opt.deadline = std::chrono::duration<double>(std::max(remaining, 1e-9));
    }
    const std::vector<double> warm = identity_delta(base);
    const OptimizeResult optimized = optimize(problem, opt, std::span<const double>(warm));
    if (!optimized.best) {
        throw ReplanError("replan: optimizer completed no evaluation before the deadline", curve);
    }

    NurbsCurve best = apply_delta(base, optimized.best->x, bounds, config.weight_limits);
    CandidateScore verified = score_candidate(best, obstacles, state.speed, config);
    if (config.enable_curvature) {
        // The curvature limit is re-checked on a denser grid before the result may be called feasible.
        const CurvaturePeak peak = max_curvature(best, kCurvatureCheckDensity * config.n_curv_samples);
        if (peak.curvature > config.kappa_max + kCurvatureTolerance) {
            verified.violations.curvature += peak.curvature - config.kappa_max;
        }
    }
    ReplanResult result(ReplanResult::Status::optimized, std::move(best));
    result.violations = verified.violations;
    result.feasible = verified.violations.feasible();
    result.length = verified.length;
    result.evaluations = optimized.stats.evaluations;
    result.s_split = cut->s_split;
    result.consumed = cut->consumed;
    result.delta = optimized.best->x;
    result.wall_time = elapsed();
    return result;
}

}  // namespace nurbsvo
