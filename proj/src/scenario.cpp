#include "nurbsvo/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace nurbsvo {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError(path + ": " + what);
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        fail(path, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(path, "expected a finite number");
    }
    return x;
}

std::uint64_t as_count(const json& v, const std::string& path) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail(path, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

bool as_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) {
        fail(path, "expected true or false");
    }
    return v.get<bool>();
}

Vec2 as_vec2(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2) {
        fail(path, "expected [x, y]");
    }
    return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]")};
}

/// Object reader that tracks consumed keys so that typos surface as errors.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) {
            fail(path_, "expected an object");
        }
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    const json* find(const std::string& key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& require(const std::string& key) {
        const json* v = find(key);
        if (v == nullptr) {
            fail(at(key), "missing required field");
        }
        return *v;
    }

    void number(const std::string& key, double& out) {
        if (const json* v = find(key)) {
            out = as_number(*v, at(key));
        }
    }

    template <typename Int>
    void count(const std::string& key, Int& out) {
        if (const json* v = find(key)) {
            out = static_cast<Int>(as_count(*v, at(key)));
        }
    }

    void flag(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            out = as_bool(*v, at(key));
        }
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.count(item.key())) {
                fail(at(item.key()), "unknown field");
            }
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Waypoint parse_waypoint(const json& j, const std::string& path) {
    Fields f(j, path);
    Waypoint w;
    w.position = as_vec2(f.require("pos"), f.at("pos"));
    w.heading = as_number(f.require("heading"), f.at("heading"));
    f.finish();
    return w;
}

StaticObstacle parse_static(const json& j, const std::string& path) {
    Fields f(j, path);
    StaticObstacle s;
    s.center = as_vec2(f.require("center"), f.at("center"));
    s.radius = as_number(f.require("radius"), f.at("radius"));
    f.flag("known", s.known);
    f.finish();
    return s;
}

DynamicObstacle parse_dynamic(const json& j, const std::string& path) {
    Fields f(j, path);
    DynamicObstacle d;
    d.position = as_vec2(f.require("pos"), f.at("pos"));
    d.velocity = as_vec2(f.require("vel"), f.at("vel"));
    d.radius = as_number(f.require("radius"), f.at("radius"));
    f.number("spawn_time", d.spawn_time);
    f.finish();
    return d;
}

template <typename T, typename Parse>
std::vector<T> parse_list(Fields& f, const std::string& key, Parse parse, bool required) {
    const json* v = required ? &f.require(key) : f.find(key);
    std::vector<T> out;
    if (v == nullptr) {
        return out;
    }
    if (!v->is_array()) {
        fail(f.at(key), "expected an array");
    }
    for (std::size_t i = 0; i < v->size(); ++i) {
        out.push_back(parse((*v)[i], f.at(key) + "[" + std::to_string(i) + "]"));
    }
    return out;
}

void parse_planner(const json& j, Scenario& sc) {
    Fields f(j, "planner");
    PlannerConfig& p = sc.planner;
    f.number("T_s", p.replan_interval);
    f.number("tau", p.vo_horizon);
    f.count("n_interior", p.n_interior);
    f.count("degree", p.degree);
    f.count("seed", sc.seed);
    f.flag("budget_mode", p.budget_mode);
    f.count("budget", p.optimizer.budget);
    f.count("pop_init", p.optimizer.pop_init);
    f.count("pop_min", p.optimizer.pop_min);
    f.count("memory_size", p.optimizer.memory_size);
    f.number("p_best", p.optimizer.p_best);
    f.number("archive_factor", p.optimizer.archive_factor);
    f.number("warm_spread", p.optimizer.warm_spread);
    f.count("offline_budget", p.offline_budget);
    f.count("n_curv_samples", p.n_curv_samples);
    f.count("n_vo_samples", p.n_vo_samples);
    f.count("n_obs_samples", p.n_obs_samples);
    f.number("waypoint_tolerance", p.waypoint_tolerance);
    f.number("deadline_fraction", p.deadline_fraction);
    f.number("point_bound", p.point_bound);
    f.number("weight_bound", p.weight_bound);
    f.number("lambda_min", p.lambda_min);
    f.number("lambda_max", p.lambda_max);
    f.number("weight_min", p.weight_limits.min);
    f.number("weight_max", p.weight_limits.max);
    f.number("beta", p.gains.beta);
    f.number("k_heading", p.gains.k_heading);
    f.flag("enable_vo", p.enable_vo);
    f.flag("enable_curvature", p.enable_curvature);
    f.finish();
}

}  // namespace

void Scenario::validate() const {
    if (waypoints.size() < 2) {
        throw ScenarioError("waypoints: at least two waypoints are required");
    }
    for (std::size_t i = 0; i + 1 < waypoints.size(); ++i) {
        if ((waypoints[i + 1].position - waypoints[i].position).norm() == 0.0) {
            throw ScenarioError("waypoints[" + std::to_string(i + 1) + "]: coincides with the previous waypoint");
        }
    }
    if (!(start.speed > 0.0)) {
        throw ScenarioError("uav.speed: must be positive");
    }
    for (std::size_t i = 0; i < statics.size(); ++i) {
        if (!(statics[i].radius > 0.0)) {
            throw ScenarioError("static_obstacles[" + std::to_string(i) + "].radius: must be positive");
        }
    }
    for (std::size_t i = 0; i < dynamics.size(); ++i) {
        if (!(dynamics[i].radius > 0.0)) {
            throw ScenarioError("dynamic_obstacles[" + std::to_string(i) + "].radius: must be positive");
        }
    }
    if (!(dt() > 0.0) || dt() > planner.replan_interval) {
        throw ScenarioError("sim.dt: must be positive and at most T_s");
    }
    if (sim.max_steps == 0) {
        throw ScenarioError("sim.max_steps: must be positive");
    }
    try {
        planner.validate();
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(std::string("planner: ") + e.what());
    }
}

Scenario scenario_from_json(const nlohmann::json& j) {
    Scenario sc;
    Fields root(j, "");
    if (const json* name = root.find("name")) {
        if (!name->is_string()) {
            fail("name", "expected a string");
        }
        sc.name = name->get<std::string>();
    }
    root.find("description");

    sc.waypoints = parse_list<Waypoint>(root, "waypoints", parse_waypoint, true);
    if (sc.waypoints.size() < 2) {
        fail("waypoints", "at least two waypoints are required");
    }
    sc.start.position = sc.waypoints.front().position;
    sc.start.heading = sc.waypoints.front().heading;

    {
        Fields uav(root.require("uav"), "uav");
        if (const json* v = uav.find("start")) {
            sc.start.position = as_vec2(*v, uav.at("start"));
        }
        uav.number("heading", sc.start.heading);
        sc.start.speed = as_number(uav.require("speed"), uav.at("speed"));
        uav.number("kappa_max", sc.planner.kappa_max);
        uav.number("r_safe", sc.planner.r_safe);
        uav.number("r_view", sc.planner.r_view);
        uav.number("r_u", sc.planner.r_u);
        uav.finish();
    }

    sc.statics = parse_list<StaticObstacle>(root, "static_obstacles", parse_static, false);
    sc.dynamics = parse_list<DynamicObstacle>(root, "dynamic_obstacles", parse_dynamic, false);
    if (const json* p = root.find("planner")) {
        parse_planner(*p, sc);
    }
    if (const json* s = root.find("sim")) {
        Fields sim(*s, "sim");
        sim.number("dt", sc.sim.dt);
        sim.count("max_steps", sc.sim.max_steps);
        sim.finish();
    }
    root.finish();
    sc.validate();
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(path.string() + ": cannot open scenario file");
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buffer.str());
    } catch (const nlohmann::json::parse_error& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
    try {
        Scenario sc = scenario_from_json(j);
        if (sc.name.empty()) {
            sc.name = path.stem().string();
        }
        return sc;
    } catch (const ScenarioError& e) {
        throw ScenarioError(path.string() + ": " + e.what());
    }
}

}  // namespace nurbsvo
