#pragma once

#include <optional>

#include "nurbsvo/nurbs.hpp"
#include "nurbsvo/types.hpp"

namespace nurbsvo {

/// Constant-speed planar vehicle state.
struct UavState {
    Vec2 position = Vec2::Zero();
    double heading = 0.0;
    double speed = 1.0;
};

class VehicleLimits {
public:
    explicit VehicleLimits(double kappa_max);

    double kappa_max() const { return kappa_max_; }
    double min_turn_radius() const { return 1.0 / kappa_max_; }
    double max_turn_rate(double speed) const { return speed * kappa_max_; }

private:
    double kappa_max_;
};

struct FieldGains {
    /// Convergence sharpness, 1/m.
    double beta = 1.0;
    /// Heading-rate proportional gain, 1/s.
    double k_heading = 2.0;
};

struct FieldSample {
    Vec2 direction = Vec2::UnitX();
    Projection projection;
};

/// Guidance field toward and along the curve: G*N + H*T with G = (2/pi) atan(beta d), H = sqrt(1 - G^2).
FieldSample evaluate_field(const NurbsCurve& curve, const Vec2& p, const FieldGains& gains,
                           std::optional<double> hint = std::nullopt);

/// Unit direction of the guidance field at p.
Vec2 vector_field(const NurbsCurve& curve, const Vec2& p, const FieldGains& gains);

/// Proportional heading-rate command toward `desired_dir`, saturated at speed * kappa_max.
double heading_rate_command(const UavState& state, const Vec2& desired_dir, const VehicleLimits& limits,
                            const FieldGains& gains);

/// Exact constant-turn-rate integration over dt. |u| is clamped to the turn-rate limit.
UavState step_dubins(const UavState& state, double u, double dt, const VehicleLimits& limits);

}  // namespace nurbsvo
