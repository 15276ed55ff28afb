#include "nurbsvo/path_shape.hpp"

#include <algorithm>
#include <stdexcept>

namespace nurbsvo {

NurbsCurve build_path_with_headings(const Vec2& start, const Vec2& goal, const HeadingSpec& spec,
                                    std::size_t n_interior, int degree) {
    if (start == goal) {
        throw std::invalid_argument("build_path_with_headings: start and goal coincide");
    }
    if (!(spec.lambda_start > 0.0) || !(spec.lambda_goal > 0.0)) {
        throw std::invalid_argument("build_path_with_headings: spacing factors must be positive");
    }
    const Vec2 dir_start = unit_from_angle(spec.gamma_init);
    const Vec2 dir_goal = unit_from_angle(spec.gamma_goal);

    std::vector<Vec2> points;
    points.reserve(2 * (kHeadingPoints + 1) + n_interior);
    points.push_back(start);
    for (std::size_t j = 1; j <= kHeadingPoints; ++j) {
        points.push_back(start + static_cast<double>(j) * spec.lambda_start * dir_start);
    }
    const Vec2 inner_start = points.back();
    const Vec2 inner_goal = goal - static_cast<double>(kHeadingPoints) * spec.lambda_goal * dir_goal;
    for (std::size_t i = 1; i <= n_interior; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n_interior + 1);
        points.push_back(inner_start + t * (inner_goal - inner_start));
    }
    for (std::size_t j = kHeadingPoints; j >= 1; --j) {
        points.push_back(goal - static_cast<double>(j) * spec.lambda_goal * dir_goal);
    }
    points.push_back(goal);

    std::vector<double> weights(points.size(), 1.0);
    return NurbsCurve(degree, std::move(points), std::move(weights));
}

DeltaLayout::DeltaLayout(std::size_t n_points) : n_points_(n_points) {
    if (n_points < 2 * (kHeadingPoints + 1)) {
        throw std::invalid_argument("delta layout: curve needs both heading triples and endpoints");
    }
}

std::pair<double, double> heading_spacings(const NurbsCurve& curve) {
    const auto& p = curve.points();
    const std::size_t n = p.size();
    const auto k = static_cast<double>(kHeadingPoints);
    return {(p[kHeadingPoints] - p[0]).norm() / k, (p[n - 1 - kHeadingPoints] - p[n - 1]).norm() / k};
}

std::vector<double> identity_delta(const NurbsCurve& base) {
    const DeltaLayout layout(base.size());
    std::vector<double> delta(layout.dimension(), 0.0);
    const auto [lambda_start, lambda_goal] = heading_spacings(base);
    delta[layout.lambda_start_index()] = lambda_start;
    delta[layout.lambda_goal_index()] = lambda_goal;
    return delta;
}

namespace {

void scale_triple(std::vector<Vec2>& points, std::size_t anchor, int step, double ratio) {
    if (ratio == 1.0 || !std::isfinite(ratio)) {
        return;
    }
    const Vec2 origin = points[anchor];
    for (std::size_t j = 1; j <= kHeadingPoints; ++j) {
        const std::size_t i = static_cast<std::size_t>(static_cast<long>(anchor) + step * static_cast<long>(j));
        points[i] = origin + ratio * (points[i] - origin);
    }
}

}  // namespace

NurbsCurve apply_delta(const NurbsCurve& base, std::span<const double> delta, const DeltaBounds& bounds,
                       const WeightLimits& limits) {
    const DeltaLayout layout(base.size());
    const std::size_t dim = layout.dimension();
    if (delta.size() != dim || bounds.lower.size() != dim || bounds.upper.size() != dim) {
        throw std::invalid_argument("apply_delta: delta dimension does not match the curve layout");
    }
    auto clipped = [&](std::size_t i) { return std::clamp(delta[i], bounds.lower[i], bounds.upper[i]); };

    std::vector<Vec2> points = base.points();
    std::vector<double> weights = base.weights();
    for (std::size_t k = 0; k < layout.n_movable(); ++k) {
        const std::size_t i = layout.first_movable() + k;
        points[i] += Vec2(clipped(layout.point_offset(k)), clipped(layout.point_offset(k) + 1));
        weights[i] = std::clamp(weights[i] + clipped(layout.weight_offset(k)), limits.min, limits.max);
    }

    const auto [lambda_start, lambda_goal] = heading_spacings(base);
    const std::size_t last = base.size() - 1;
    if (lambda_start > 0.0) {
        scale_triple(points, 0, +1, clipped(layout.lambda_start_index()) / lambda_start);
    }
    if (lambda_goal > 0.0) {
        scale_triple(points, last, -1, clipped(layout.lambda_goal_index()) / lambda_goal);
    }
    return NurbsCurve(base.degree(), std::move(points), std::move(weights), base.knots());
}

}  // namespace nurbsvo
