#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nurbsvo/types.hpp"
#include "nurbsvo/velocity_obstacle.hpp"

namespace nurbsvo {

/// No-fly disc. Unknown zones are only reported once inside the sensing range.
struct StaticObstacle {
    Vec2 center = Vec2::Zero();
    double radius = 1.0;
    bool known = true;
};

/// Constant-velocity disc hazard; `position` is where it appears at `spawn_time`.
struct DynamicObstacle {
    Vec2 position = Vec2::Zero();
    Vec2 velocity = Vec2::Zero();
    double radius = 1.0;
    double spawn_time = 0.0;
};

enum class ObstacleKind { static_zone, dynamic };

struct CollisionEvent {
    double time = 0.0;
    ObstacleKind kind = ObstacleKind::static_zone;
    std::size_t index = 0;
    double depth = 0.0;
};

/// What the vehicle knows at one instant: exact states of in-range movers and the visible zones.
struct SensedSnapshot {
    double time = 0.0;
    std::vector<ObstacleState> dynamic;
    std::vector<StaticObstacle> statics;
};

class World {
public:
    World() = default;
    World(std::vector<StaticObstacle> statics, std::vector<DynamicObstacle> dynamics, double clock = 0.0);

    const std::vector<StaticObstacle>& statics() const { return statics_; }
    const std::vector<DynamicObstacle>& dynamics() const { return dynamics_; }
    double clock() const { return clock_; }

    bool is_active(std::size_t i) const { return clock_ >= dynamics_[i].spawn_time; }
    /// Current center of dynamic obstacle i (its spawn position while inactive).
    Vec2 dynamic_position(std::size_t i) const;

    void step(double dt);

private:
    std::vector<StaticObstacle> statics_;
    std::vector<DynamicObstacle> dynamics_;
    double clock_ = 0.0;
};

World step_world(World world, double dt);

/// Movers whose center lies within r_view; known zones always, unknown zones once their edge is within r_view.
SensedSnapshot sense(const World& world, const Vec2& uav_pos, double r_view);

/// Deepest penetration of uav_pos into any active hazard inflated by r_u + r_safe (strict inequality).
std::optional<CollisionEvent> check_collision(const World& world, const Vec2& uav_pos, double r_u, double r_safe);

/// min over active hazards of (distance - radius - r_safe - r_u); +inf for an empty world.
double clearance(const World& world, const Vec2& uav_pos, double r_u, double r_safe);

}  // namespace nurbsvo
