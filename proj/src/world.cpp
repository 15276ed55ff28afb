#include "nurbsvo/world.hpp"

#include <limits>
#include <stdexcept>

namespace nurbsvo {

World::World(std::vector<StaticObstacle> statics, std::vector<DynamicObstacle> dynamics, double clock)
    : statics_(std::move(statics)), dynamics_(std::move(dynamics)), clock_(clock) {
    for (const auto& s : statics_) {
        if (!(s.radius > 0.0)) {
            throw std::invalid_argument("world: static obstacle radius must be positive");
        }
    }
    for (const auto& d : dynamics_) {
        if (!(d.radius > 0.0)) {
            throw std::invalid_argument("world: dynamic obstacle radius must be positive");
        }
    }
}

Vec2 World::dynamic_position(std::size_t i) const {
    const DynamicObstacle& d = dynamics_[i];
    if (!is_active(i)) {
        return d.position;
    }
    return d.position + (clock_ - d.spawn_time) * d.velocity;
}

void World::step(double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("world: dt must be positive");
    }
    clock_ += dt;
}

World step_world(World world, double dt) {
    world.step(dt);
    return world;
}

SensedSnapshot sense(const World& world, const Vec2& uav_pos, double r_view) {
    if (!(r_view > 0.0)) {
        throw std::invalid_argument("sense: r_view must be positive");
    }
    SensedSnapshot snapshot;
    snapshot.time = world.clock();
    for (std::size_t i = 0; i < world.dynamics().size(); ++i) {
        if (!world.is_active(i)) {
            continue;
        }
        const Vec2 p = world.dynamic_position(i);
        if ((p - uav_pos).norm() <= r_view) {
            const DynamicObstacle& d = world.dynamics()[i];
            snapshot.dynamic.push_back({p, d.velocity, d.radius});
        }
    }
    for (const StaticObstacle& s : world.statics()) {
        if (s.known || (s.center - uav_pos).norm() - s.radius <= r_view) {
            snapshot.statics.push_back(s);
        }
    }
    return snapshot;
}

std::optional<CollisionEvent> check_collision(const World& world, const Vec2& uav_pos, double r_u, double r_safe) {
    std::optional<CollisionEvent> worst;
    auto consider = [&](ObstacleKind kind, std::size_t index, const Vec2& center, double radius) {
        const double depth = (radius + r_safe + r_u) - (center - uav_pos).norm();
        if (depth > 0.0 && (!worst || depth > worst->depth)) {
            worst = CollisionEvent{world.clock(), kind, index, depth};
        }
    };
    for (std::size_t i = 0; i < world.statics().size(); ++i) {
        consider(ObstacleKind::static_zone, i, world.statics()[i].center, world.statics()[i].radius);
    }
    for (std::size_t i = 0; i < world.dynamics().size(); ++i) {
        if (world.is_active(i)) {
            consider(ObstacleKind::dynamic, i, world.dynamic_position(i), world.dynamics()[i].radius);
        }
    }
    return worst;
}

double clearance(const World& world, const Vec2& uav_pos, double r_u, double r_safe) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : world.statics()) {
        best = std::min(best, (s.center - uav_pos).norm() - s.radius - r_safe - r_u);
    }
    for (std::size_t i = 0; i < world.dynamics().size(); ++i) {
        if (world.is_active(i)) {
            best = std::min(best, (world.dynamic_position(i) - uav_pos).norm() - world.dynamics()[i].radius -
                                      r_safe - r_u);
        }
    }
    return best;
}

}  // namespace nurbsvo
