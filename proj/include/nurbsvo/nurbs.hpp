#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nurbsvo/types.hpp"

namespace nurbsvo {

inline constexpr int kMaxDegree = 7;

/// Clamped, non-decreasing knot vector on [0, 1].
class KnotVector {
public:
    /// Throws std::invalid_argument unless the knots are clamped on [0, 1],
    /// non-decreasing and every interior multiplicity is at most `degree`.
    KnotVector(std::vector<double> knots, int degree);

    static KnotVector clamped_uniform(std::size_t n_points, int degree);

    const std::vector<double>& values() const { return knots_; }
    int degree() const { return degree_; }
    std::size_t size() const { return knots_.size(); }
    double operator[](std::size_t i) const { return knots_[i]; }

    /// Index i with knots[i] <= s < knots[i+1], clamped into [degree, n_points - 1].
    std::size_t find_span(double s, std::size_t n_points) const;
    std::size_t multiplicity(double s) const;
    /// Distinct knot values in increasing order (span breakpoints).
    std::vector<double> breakpoints() const;

private:
    std::vector<double> knots_;
    int degree_;
};

/// Point, first/second parametric derivatives and unsigned curvature at s.
struct CurveSample {
    double s = 0.0;
    Vec2 point = Vec2::Zero();
    Vec2 tangent = Vec2::Zero();
    Vec2 second = Vec2::Zero();
    double curvature = 0.0;
};

/// Planar rational B-spline C(s), s in [0, 1]. Immutable after construction.
class NurbsCurve {
public:
    NurbsCurve(int degree, std::vector<Vec2> points, std::vector<double> weights, KnotVector knots);
    /// Clamped uniform knots.
    NurbsCurve(int degree, std::vector<Vec2> points, std::vector<double> weights);

    int degree() const { return degree_; }
    const std::vector<Vec2>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    const KnotVector& knots() const { return knots_; }
    std::size_t size() const { return points_.size(); }

    const Vec2& front() const { return points_.front(); }
    const Vec2& back() const { return points_.back(); }

    Vec2 evaluate(double s) const;
    /// C(s) and C'(s) only; cheaper than sample().
    std::pair<Vec2, Vec2> evaluate_with_tangent(double s) const;
    CurveSample sample(double s) const;

    /// Rational basis values R_i(s) = N_i(s) w_i / sum_j N_j(s) w_j for all control points.
    std::vector<double> rational_basis(double s) const;

    bool operator==(const NurbsCurve& other) const;

private:
    // Homogeneous derivatives A^(d)(s), W^(d)(s) for d = 0..order.
    void homogeneous(double s, int order, Vec2* a, double* w) const;

    int degree_;
    std::vector<Vec2> points_;
    std::vector<double> weights_;
    KnotVector knots_;
};

/// Length of C over [s0, s1] by adaptive Gauss-Legendre quadrature on each knot span.
double arc_length(const NurbsCurve& curve, double s0, double s1, double rel_tol = 1e-10);

/// Cumulative arc-length table with fixed Gauss-Legendre sub-intervals per knot span.
/// Used where many length/parameter conversions are needed for the same curve.
class ArcLengthTable {
public:
    explicit ArcLengthTable(const NurbsCurve& curve, int subdivisions_per_span = 2);

    double total() const { return cumulative_.back(); }
    double length_at(double s) const;
    /// Parameter whose arc length from 0 equals `length`, clamped to [0, 1].
    double parameter_at(double length) const;
    /// Cubic Hermite inverse of the table without quadrature. Error shrinks with the fourth power of the
    /// sub-interval length.
    double approximate_parameter_at(double length) const;

private:
    double partial(std::size_t interval, double s) const;

    const NurbsCurve* curve_;
    std::vector<double> params_;
    std::vector<double> cumulative_;
    std::vector<double> speeds_;
};

struct Projection {
    double s = 0.0;
    double distance = 0.0;
};

inline constexpr int kProjectionGrid = 64;
inline constexpr double kProjectionWindow = 0.125;

/// Closest point on the curve to q. A hint centers the coarse scan on a window around it.
Projection project_point(const NurbsCurve& curve, const Vec2& q, std::optional<double> hint = std::nullopt);

/// Inserts `s` `times` times (Boehm). Shape is unchanged.
NurbsCurve insert_knot(const NurbsCurve& curve, double s, int times = 1);

/// Inserts knots at the midpoints of the widest spans until the curve has `n_points` control points.
NurbsCurve refine_to_count(const NurbsCurve& curve, std::size_t n_points);

/// Splits at s_cut in (0, 1); both halves are re-parameterized to [0, 1].
std::pair<NurbsCurve, NurbsCurve> split(const NurbsCurve& curve, double s_cut);

struct CurvaturePeak {
    double curvature = 0.0;
    double s = 0.0;
};

/// Golden-section maximization of curvature on [lo, hi], stopping at bracket width `tolerance`.
CurvaturePeak refine_curvature_peak(const NurbsCurve& curve, double lo, double hi, double tolerance = 1e-12);

/// Grid maximum of curvature refined by golden-section search around the grid argmax.
CurvaturePeak max_curvature(const NurbsCurve& curve, int n_samples);

void to_json(nlohmann::json& j, const NurbsCurve& curve);
NurbsCurve curve_from_json(const nlohmann::json& j);

}  // namespace nurbsvo
