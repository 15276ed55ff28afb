#include "nurbsvo/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nurbsvo {

VehicleLimits::VehicleLimits(double kappa_max) : kappa_max_(kappa_max) {
    if (!(kappa_max > 0.0) || !std::isfinite(kappa_max)) {
        throw std::invalid_argument("vehicle limits: kappa_max must be positive and finite");
    }
}

FieldSample evaluate_field(const NurbsCurve& curve, const Vec2& p, const FieldGains& gains,
                           std::optional<double> hint) {
    FieldSample out;
    out.projection = project_point(curve, p, hint);
    auto [foot, tangent] = curve.evaluate_with_tangent(out.projection.s);
    if (tangent.norm() == 0.0) {
        tangent = curve.evaluate(std::min(1.0, out.projection.s + 1e-6)) -
                  curve.evaluate(std::max(0.0, out.projection.s - 1e-6));
    }
    const Vec2 t_hat = tangent.normalized();
    const Vec2 to_curve = foot - p;
    const double d = to_curve.norm();
    if (d == 0.0) {
        out.direction = t_hat;
        return out;
    }
    const Vec2 n_hat = to_curve / d;
    const double g = (2.0 / std::numbers::pi) * std::atan(gains.beta * d);
    const double h = std::sqrt(std::max(0.0, 1.0 - g * g));
    const Vec2 psi = g * n_hat + h * t_hat;
    // n_hat is orthogonal to t_hat at interior projections; endpoints need renormalizing.
    const double norm = psi.norm();
    out.direction = norm > 1e-12 ? Vec2(psi / norm) : t_hat;
    return out;
}

Vec2 vector_field(const NurbsCurve& curve, const Vec2& p, const FieldGains& gains) {
    return evaluate_field(curve, p, gains).direction;
}

double heading_rate_command(const UavState& state, const Vec2& desired_dir, const VehicleLimits& limits,
                            const FieldGains& gains) {
    const double error = wrap_angle(angle_of(desired_dir) - state.heading);
    const double u_max = limits.max_turn_rate(state.speed);
    return std::clamp(gains.k_heading * error, -u_max, u_max);
}

UavState step_dubins(const UavState& state, double u, double dt, const VehicleLimits& limits) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("step_dubins: dt must be positive");
    }
    const double u_max = limits.max_turn_rate(state.speed);
    u = std::clamp(u, -u_max, u_max);
    UavState next = state;
    if (std::abs(u) < 1e-9) {
        next.position += state.speed * dt * unit_from_angle(state.heading);
        next.heading = wrap_angle(state.heading);
        return next;
    }
    const double radius = state.speed / u;
    const double heading = state.heading + u * dt;
    next.position += radius * Vec2(std::sin(heading) - std::sin(state.heading),
                                   std::cos(state.heading) - std::cos(heading));
    next.heading = wrap_angle(heading);
    return next;
}

}  // namespace nurbsvo
