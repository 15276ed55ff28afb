#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "nurbsvo/nurbs.hpp"
#include "nurbsvo/types.hpp"

namespace nurbsvo {

/// Endpoint headings and the spacing factors of the collinear heading points.
struct HeadingSpec {
    double gamma_init = 0.0;
    double gamma_goal = 0.0;
    double lambda_start = 1.0;
    double lambda_goal = 1.0;
};

/// Number of collinear points added after the start and before the goal.
inline constexpr std::size_t kHeadingPoints = 3;

/// Control polygon: start, start + j*lambda_start*dir(gamma_init) for j = 1..3, `n_interior`
/// points evenly spaced between the inner ends of the two heading triples,
/// goal - j*lambda_goal*dir(gamma_goal) for j = 3..1, goal. Unit weights, clamped uniform knots.
NurbsCurve build_path_with_headings(const Vec2& start, const Vec2& goal, const HeadingSpec& spec,
                                    std::size_t n_interior, int degree = 3);

/// Index layout of a plan delta for a curve with `n_points` control points.
///
/// Movable points are those strictly between the two heading triples. The vector is
/// [dx, dy interleaved per movable point | dw per movable point | lambda_start, lambda_goal].
class DeltaLayout {
public:
    explicit DeltaLayout(std::size_t n_points);

    std::size_t n_points() const { return n_points_; }
    std::size_t first_movable() const { return kHeadingPoints + 1; }
    std::size_t n_movable() const { return n_points_ - 2 * (kHeadingPoints + 1); }
    std::size_t dimension() const { return 3 * n_movable() + 2; }

    std::size_t point_offset(std::size_t k) const { return 2 * k; }
    std::size_t weight_offset(std::size_t k) const { return 2 * n_movable() + k; }
    std::size_t lambda_start_index() const { return 3 * n_movable(); }
    std::size_t lambda_goal_index() const { return 3 * n_movable() + 1; }

private:
    std::size_t n_points_;
};

struct DeltaBounds {
    std::vector<double> lower;
    std::vector<double> upper;
};

struct WeightLimits {
    double min = 0.05;
    double max = 10.0;
};

/// Mean spacing of each heading triple: (|P3 - P0| / 3, |P[n-4] - P[n-1]| / 3).
std::pair<double, double> heading_spacings(const NurbsCurve& curve);

/// The delta that reproduces `base` exactly: zero displacements and the current spacings.
std::vector<double> identity_delta(const NurbsCurve& base);

/// Applies a plan delta. Components are clipped to `bounds`; weights are clamped to `limits`;
/// the heading triples are scaled about their endpoint to the candidate spacings. Endpoints and
/// endpoint tangent directions are unchanged.
NurbsCurve apply_delta(const NurbsCurve& base, std::span<const double> delta, const DeltaBounds& bounds,
                       const WeightLimits& limits = {});

}  // namespace nurbsvo
