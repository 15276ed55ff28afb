#pragma once

#include <optional>
#include <span>

#include "nurbsvo/nurbs.hpp"
#include "nurbsvo/types.hpp"

namespace nurbsvo {

/// A sensed disc obstacle moving at constant velocity.
struct ObstacleState {
    Vec2 position = Vec2::Zero();
    Vec2 velocity = Vec2::Zero();
    double radius = 0.0;
};

struct VoCheck {
    bool in_vo = false;
    std::optional<double> time_to_collision;
    /// max(0, tau - t*) / tau; 1 when the discs already overlap.
    double depth = 0.0;
};

/// Smallest t >= 0 with |rel_pos - rel_vel * t| = radius; 0 when already inside,
/// nullopt when the relative motion never reaches the disc.
std::optional<double> time_to_collision(const Vec2& rel_pos, const Vec2& rel_vel, double radius);

/// Truncated velocity-obstacle membership of the UAV velocity `v_u` w.r.t. `obstacle` over `tau` seconds.
VoCheck in_truncated_vo(const Vec2& v_u, const Vec2& p_u, const ObstacleState& obstacle, double r_u, double tau);

/// Parameter reached after travelling speed * tau along the curve (1 if the curve is shorter).
double s_tau(const NurbsCurve& curve, double speed, double tau);

/// Horizon used at a path sample reached at time t: `shrinking` tests tau - t (every window ends at
/// tau), `rolling` tests the full tau from the sample.
enum class VoHorizon { shrinking, rolling };

/// Summed VO depth along the first speed*tau meters of the path. Samples are uniform in arc
/// length; each obstacle is propagated to the UAV's arrival time at the sample and tested with the
/// horizon selected by `mode`. Zero iff no sample predicts a collision inside its window.
double path_vo_violation(const NurbsCurve& curve, double speed, std::span<const ObstacleState> obstacles,
                         double r_u, double tau, int n_samples, VoHorizon mode = VoHorizon::shrinking);

/// Same as above with a precomputed arc-length table for `curve`.
double path_vo_violation(const NurbsCurve& curve, const ArcLengthTable& table, double speed,
                         std::span<const ObstacleState> obstacles, double r_u, double tau, int n_samples,
                         VoHorizon mode = VoHorizon::shrinking);

}  // namespace nurbsvo
