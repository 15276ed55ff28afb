#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nurbsvo/planner.hpp"

using namespace nurbsvo;

namespace {

PlannerConfig config() {
    PlannerConfig c;
    c.optimizer.budget = 600;
    return c;
}

NurbsCurve chord_path(const PlannerConfig& c) {
    return initial_path({Vec2(0, 0), 0.0}, {Vec2(400, 0), 0.0}, c);
}

}  // namespace

TEST(PlannerConfig, Validation) {
    PlannerConfig c;
    EXPECT_NO_THROW(c.validate());
    c.kappa_max = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = PlannerConfig{};
    c.replan_interval = -1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_EQ(PlannerConfig{}.path_points(), 16u);
}

TEST(InitialPath, StraightChordIsFeasibleAndMinimal) {
    const PlannerConfig c = config();
    const NurbsCurve p = chord_path(c);
    const CandidateScore score = score_candidate(p, {}, 15.0, c);
    EXPECT_NEAR(score.length, 400.0, 1e-6);
    EXPECT_TRUE(score.violations.feasible());
    const auto [ls, lg] = heading_spacings(p);
    EXPECT_NEAR(ls, 40.0, 1e-12);
    EXPECT_NEAR(lg, 40.0, 1e-12);
}

TEST(Constraints, StaticZoneOnChord) {
    const PlannerConfig c = config();
    ObstacleSet o;
    o.statics.push_back({Vec2(200, 0), 20.0, true});
    EXPECT_GT(constraint_violations(chord_path(c), o, 15.0, c).obstacle, 0.0);
    o.statics[0].center = Vec2(200, 100);
    EXPECT_EQ(constraint_violations(chord_path(c), o, 15.0, c).obstacle, 0.0);
}

TEST(Constraints, TightTurnViolatesCurvature) {
    PlannerConfig c = config();
    // Reversing heading within 60 m needs a radius below 50 m.
    const NurbsCurve u_turn = initial_path({Vec2(0, 0), 0.0}, {Vec2(0, 60), std::numbers::pi}, c);
    EXPECT_GT(constraint_violations(u_turn, {}, 15.0, c).curvature, 0.0);
    c.enable_curvature = false;
    EXPECT_EQ(constraint_violations(u_turn, {}, 15.0, c).curvature, 0.0);
}

TEST(Constraints, OncomingMoverViolatesVo) {
    PlannerConfig c = config();
    ObstacleSet o;
    o.dynamic.push_back({Vec2(120, 0), Vec2(-10, 0), 5.0});
    EXPECT_GT(constraint_violations(chord_path(c), o, 15.0, c).vo, 0.0);
    c.enable_vo = false;
    EXPECT_EQ(constraint_violations(chord_path(c), o, 15.0, c).vo, 0.0);
}

TEST(DeltaBounds, IdentityInsideBox) {
    const PlannerConfig c = config();
    const NurbsCurve p = refine_to_count(chord_path(c), c.path_points());
    const DeltaBounds b = delta_bounds(p, c);
    const std::vector<double> id = identity_delta(p);
    ASSERT_EQ(b.lower.size(), 26u);
    for (std::size_t i = 0; i < id.size(); ++i) {
        EXPECT_LE(b.lower[i], id[i]);
        EXPECT_GE(b.upper[i], id[i]);
    }
    EXPECT_TRUE(apply_delta(p, id, b, c.weight_limits) == p);
}

TEST(CutPath, AdvancesAlongProjection) {
    const PlannerConfig c = config();
    const NurbsCurve p = chord_path(c);
    const UavState s{Vec2(100, 3), 0.0, 15.0};
    const auto cut = cut_path_at_projection(p, s, 0.1);
    ASSERT_TRUE(cut.has_value());
    EXPECT_NEAR(cut->consumed, 101.5, 1e-6);
    EXPECT_NEAR((cut->curve.front() - Vec2(101.5, 0)).norm(), 0.0, 1e-6);
    EXPECT_NEAR((cut->curve.back() - Vec2(400, 0)).norm(), 0.0, 1e-9);
    EXPECT_FALSE(cut_path_at_projection(p, {Vec2(399.5, 0), 0.0, 15.0}, 0.1).has_value());
}

TEST(Replan, EmptyWorldKeepsChord) {
    const PlannerConfig c = config();
    const NurbsCurve p = chord_path(c);
    const UavState s{Vec2(0, 0), 0.0, 15.0};
    const ReplanResult r = replan_cycle(p, s, SensedSnapshot{}, c, 1);
    ASSERT_EQ(r.status, ReplanResult::Status::optimized);
    EXPECT_TRUE(r.feasible);
    EXPECT_NEAR(r.length, 400.0 - 1.5, 1e-6);
    EXPECT_EQ(r.curve.size(), c.path_points());
    EXPECT_LE(r.evaluations, c.optimizer.budget);
}

TEST(Replan, AvoidsOncomingMoverAndKeepsEndpoints) {
    PlannerConfig c = config();
    c.optimizer = replan_optimizer_defaults();
    const NurbsCurve p = chord_path(c);
    const UavState s{Vec2(0, 0), 0.0, 15.0};
    SensedSnapshot snap;
    snap.dynamic.push_back({Vec2(200, 0), Vec2(-5, 0), 5.0});
    ASSERT_GT(constraint_violations(p, predict_obstacles(snap, c.replan_interval), 15.0, c).vo, 0.0);
    const ReplanResult r = replan_cycle(p, s, snap, c, 3);
    ASSERT_EQ(r.status, ReplanResult::Status::optimized);
    EXPECT_TRUE(r.feasible);
    EXPECT_EQ(r.violations.vo, 0.0);
    EXPECT_GT(r.length, 398.5);
    EXPECT_NEAR((r.curve.back() - Vec2(400, 0)).norm(), 0.0, 1e-9);
    EXPECT_NEAR((r.curve.front() - Vec2(1.5, 0)).norm(), 0.0, 1e-6);
    EXPECT_NEAR(wrap_angle(angle_of(r.curve.sample(0.0).tangent)), 0.0, 1e-9);
    EXPECT_NEAR(wrap_angle(angle_of(r.curve.sample(1.0).tangent)), 0.0, 1e-9);
    EXPECT_LE(max_curvature(r.curve, kCurvatureCheckDensity * c.n_curv_samples).curvature,
              c.kappa_max + kCurvatureTolerance);
}

TEST(Replan, DeterministicInBudgetMode) {
    const PlannerConfig c = config();
    const NurbsCurve p = chord_path(c);
    SensedSnapshot snap;
    snap.dynamic.push_back({Vec2(150, 10), Vec2(-10, 0), 5.0});
    const ReplanResult a = replan_cycle(p, {Vec2(0, 0), 0.0, 15.0}, snap, c, 5);
    const ReplanResult b = replan_cycle(p, {Vec2(0, 0), 0.0, 15.0}, snap, c, 5);
    EXPECT_TRUE(a.curve == b.curve);
    EXPECT_EQ(a.delta, b.delta);
}

TEST(Replan, SegmentEndReturnsInput) {
    const PlannerConfig c = config();
    const NurbsCurve p = chord_path(c);
    const ReplanResult r = replan_cycle(p, {Vec2(399.9, 0), 0.0, 15.0}, SensedSnapshot{}, c, 0);
    EXPECT_EQ(r.status, ReplanResult::Status::segment_end);
    EXPECT_TRUE(r.curve == p);
}

TEST(PredictObstacles, PropagatesMovers) {
    SensedSnapshot snap;
    snap.dynamic.push_back({Vec2(10, 0), Vec2(2, -1), 3.0});
    snap.statics.push_back({Vec2(0, 0), 4.0, true});
    const ObstacleSet o = predict_obstacles(snap, 0.5);
    EXPECT_NEAR((o.dynamic[0].position - Vec2(11, -0.5)).norm(), 0.0, 1e-12);
    EXPECT_EQ(o.statics.size(), 1u);
}

TEST(RefineInitialPath, DetoursAroundKnownZone) {
    const PlannerConfig c = config();
    const NurbsCurve p = chord_path(c);
    const std::vector<StaticObstacle> zones{{Vec2(200, 0), 25.0, true}};
    const NurbsCurve r = refine_initial_path(p, zones, 15.0, c, 2);
    ObstacleSet o;
    o.statics = zones;
    const ConstraintViolations v = constraint_violations(r, o, 15.0, c);
    EXPECT_EQ(v.obstacle, 0.0);
    EXPECT_EQ(v.curvature, 0.0);
    EXPECT_TRUE(refine_initial_path(p, {}, 15.0, c, 2) == p);
}
