#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nurbsvo/path_shape.hpp"

using namespace nurbsvo;

namespace {

NurbsCurve sample_path() {
    HeadingSpec spec;
    spec.gamma_init = 0.3;
    spec.gamma_goal = -0.5;
    spec.lambda_start = 20.0;
    spec.lambda_goal = 15.0;
    return build_path_with_headings(Vec2(0, 0), Vec2(400, 50), spec, 8, 3);
}

DeltaBounds wide_bounds(std::size_t dim) {
    return {std::vector<double>(dim, -1e6), std::vector<double>(dim, 1e6)};
}

}  // namespace

TEST(PathShape, ControlPolygonLayout) {
    const NurbsCurve c = sample_path();
    ASSERT_EQ(c.size(), 16u);
    EXPECT_EQ(c.degree(), 3);
    const auto& p = c.points();
    for (int j = 1; j <= 3; ++j) {
        EXPECT_NEAR((p[j] - (p[0] + j * 20.0 * unit_from_angle(0.3))).norm(), 0.0, 1e-12);
        EXPECT_NEAR((p[15 - j] - (p[15] - j * 15.0 * unit_from_angle(-0.5))).norm(), 0.0, 1e-12);
    }
    // Interior points evenly spaced between the inner ends of the triples.
    const Vec2 step = (p[12] - p[3]) / 9.0;
    for (int k = 4; k < 12; ++k) {
        EXPECT_NEAR((p[k] - (p[3] + (k - 3) * step)).norm(), 0.0, 1e-9);
    }
    for (const double w : c.weights()) {
        EXPECT_EQ(w, 1.0);
    }
}

TEST(PathShape, EndpointHeadings) {
    const NurbsCurve c = sample_path();
    EXPECT_NEAR(wrap_angle(angle_of(c.sample(0.0).tangent) - 0.3), 0.0, 1e-12);
    EXPECT_NEAR(wrap_angle(angle_of(c.sample(1.0).tangent) + 0.5), 0.0, 1e-12);
}

TEST(DeltaLayout, DimensionForEightInteriorPoints) {
    const DeltaLayout layout(16);
    EXPECT_EQ(layout.n_movable(), 8u);
    EXPECT_EQ(layout.dimension(), 26u);
    EXPECT_EQ(layout.first_movable(), 4u);
    EXPECT_EQ(layout.weight_offset(0), 16u);
    EXPECT_EQ(layout.lambda_start_index(), 24u);
    EXPECT_EQ(layout.lambda_goal_index(), 25u);
}

TEST(Delta, IdentityReproducesBase) {
    const NurbsCurve c = sample_path();
    const std::vector<double> id = identity_delta(c);
    const auto [ls, lg] = heading_spacings(c);
    EXPECT_NEAR(ls, 20.0, 1e-12);
    EXPECT_NEAR(lg, 15.0, 1e-12);
    const NurbsCurve same = apply_delta(c, id, wide_bounds(id.size()));
    EXPECT_TRUE(same == c);
}

TEST(Delta, PreservesEndpointsAndHeadings) {
    const NurbsCurve c = sample_path();
    std::vector<double> d = identity_delta(c);
    const DeltaLayout layout(c.size());
    for (std::size_t k = 0; k < layout.n_movable(); ++k) {
        d[layout.point_offset(k)] = 7.0 * std::sin(k + 1.0);
        d[layout.point_offset(k) + 1] = -5.0 * std::cos(k + 2.0);
        d[layout.weight_offset(k)] = 0.2 * std::sin(3.0 * k);
    }
    d[layout.lambda_start_index()] = 35.0;
    d[layout.lambda_goal_index()] = 6.0;
    const NurbsCurve m = apply_delta(c, d, wide_bounds(d.size()));
    EXPECT_NEAR((m.front() - c.front()).norm(), 0.0, 1e-12);
    EXPECT_NEAR((m.back() - c.back()).norm(), 0.0, 1e-12);
    EXPECT_NEAR(wrap_angle(angle_of(m.sample(0.0).tangent) - 0.3), 0.0, 1e-12);
    EXPECT_NEAR(wrap_angle(angle_of(m.sample(1.0).tangent) + 0.5), 0.0, 1e-12);
    const auto [ls, lg] = heading_spacings(m);
    EXPECT_NEAR(ls, 35.0, 1e-9);
    EXPECT_NEAR(lg, 6.0, 1e-9);
    EXPECT_NEAR((m.points()[4] - c.points()[4] - Vec2(d[0], d[1])).norm(), 0.0, 1e-12);
}

TEST(Delta, ClipsToBoundsAndWeightLimits) {
    const NurbsCurve c = sample_path();
    std::vector<double> d = identity_delta(c);
    const DeltaLayout layout(c.size());
    DeltaBounds b = wide_bounds(d.size());
    b.upper[0] = 1.0;
    d[0] = 50.0;
    d[layout.weight_offset(0)] = -5.0;
    const NurbsCurve m = apply_delta(c, d, b, WeightLimits{0.1, 3.0});
    EXPECT_NEAR(m.points()[4].x() - c.points()[4].x(), 1.0, 1e-12);
    EXPECT_NEAR(m.weights()[4], 0.1, 1e-12);
    EXPECT_THROW(apply_delta(c, std::vector<double>(3, 0.0), b), std::invalid_argument);
}
