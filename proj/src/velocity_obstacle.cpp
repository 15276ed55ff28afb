#include "nurbsvo/velocity_obstacle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nurbsvo {

std::optional<double> time_to_collision(const Vec2& rel_pos, const Vec2& rel_vel, double radius) {
    if (!(radius > 0.0)) {
        throw std::invalid_argument("time_to_collision: radius must be positive");
    }
    // |rel_pos - rel_vel t|^2 = R^2  <=>  a t^2 - 2 b t + c = 0
    const double c = rel_pos.squaredNorm() - radius * radius;
    if (c <= 0.0) {
        return 0.0;
    }
    const double a = rel_vel.squaredNorm();
    const double b = rel_pos.dot(rel_vel);
    if (a == 0.0 || b <= 0.0) {
        return std::nullopt;
    }
    const double disc = b * b - a * c;
    if (disc < 0.0) {
        return std::nullopt;
    }
    // Smaller root, in the cancellation-free form.
    return c / (b + std::sqrt(disc));
}

VoCheck in_truncated_vo(const Vec2& v_u, const Vec2& p_u, const ObstacleState& obstacle, double r_u, double tau) {
    if (!(tau > 0.0)) {
        throw std::invalid_argument("in_truncated_vo: tau must be positive");
    }
    VoCheck out;
    out.time_to_collision = time_to_collision(obstacle.position - p_u, v_u - obstacle.velocity, obstacle.radius + r_u);
    if (out.time_to_collision && *out.time_to_collision <= tau) {
        out.in_vo = true;
        out.depth = std::max(0.0, tau - *out.time_to_collision) / tau;
    }
    return out;
}

double s_tau(const NurbsCurve& curve, double speed, double tau) {
    if (!(speed > 0.0)) {
        throw std::invalid_argument("s_tau: speed must be positive");
    }
    const double target = speed * tau;
    if (arc_length(curve, 0.0, 1.0) <= target) {
        return 1.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (hi - lo > 1e-13) {
        const double mid = 0.5 * (lo + hi);
        if (arc_length(curve, 0.0, mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double path_vo_violation(const NurbsCurve& curve, double speed, std::span<const ObstacleState> obstacles,
                         double r_u, double tau, int n_samples, VoHorizon mode) {
    if (obstacles.empty()) {
        return 0.0;
    }
    const ArcLengthTable table(curve, 4);
    return path_vo_violation(curve, table, speed, obstacles, r_u, tau, n_samples, mode);
}

double path_vo_violation(const NurbsCurve& curve, const ArcLengthTable& table, double speed,
                         std::span<const ObstacleState> obstacles, double r_u, double tau, int n_samples,
                         VoHorizon mode) {
    if (n_samples < 2) {
        throw std::invalid_argument("path_vo_violation: n_samples must be >= 2");
    }
    if (!(speed > 0.0) || !(tau > 0.0)) {
        throw std::invalid_argument("path_vo_violation: speed and tau must be positive");
    }
    if (obstacles.empty()) {
        return 0.0;
    }
    const double horizon_length = std::min(speed * tau, table.total());
    double violation = 0.0;
    for (int j = 0; j < n_samples; ++j) {
        const double length = horizon_length * j / (n_samples - 1);
        const double t = length / speed;
        const double s = table.approximate_parameter_at(length);
        auto [position, tangent] = curve.evaluate_with_tangent(s);
        double norm = tangent.norm();
        if (norm == 0.0) {
            tangent = curve.evaluate(std::min(1.0, s + 1e-6)) - curve.evaluate(std::max(0.0, s - 1e-6));
            norm = tangent.norm();
        }
        const Vec2 v_u = norm > 0.0 ? Vec2(speed * tangent / norm) : Vec2::Zero();
        const double remaining = mode == VoHorizon::rolling ? tau : tau - t;
        for (const ObstacleState& obstacle : obstacles) {
            ObstacleState moved = obstacle;
            moved.position = obstacle.position + t * obstacle.velocity;
            if (remaining > 0.0) {
                violation += in_truncated_vo(v_u, position, moved, r_u, remaining).depth;
            } else if ((moved.position - position).norm() < moved.radius + r_u) {
                violation += 1.0;
            }
        }
    }
    return violation;
}

}  // namespace nurbsvo
