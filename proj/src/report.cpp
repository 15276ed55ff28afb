#include "nurbsvo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nurbsvo {

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", x);
    return buf;
}

double quantize(double x) { return std::strtod(format_number(x).c_str(), nullptr); }

TimingStats timing_stats(std::vector<double> samples) {
    TimingStats stats;
    if (samples.empty()) {
        return stats;
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t n = samples.size();
    stats.median = n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    stats.p95 = samples[std::max<std::size_t>(rank, 1) - 1];
    stats.max = samples.back();
    stats.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);
    return stats;
}

MetricsReport compute_metrics(const SimLog& log) {
    MetricsReport m;
    m.success = log.success();
    m.outcome = to_string(log.outcome);
    m.steps = log.steps.size();
    m.duration = log.steps.empty() ? 0.0 : log.steps.back().t;
    for (std::size_t i = 1; i < log.steps.size(); ++i) {
        const double dx = quantize(log.steps[i].position.x()) - quantize(log.steps[i - 1].position.x());
        const double dy = quantize(log.steps[i].position.y()) - quantize(log.steps[i - 1].position.y());
        m.path_length += std::hypot(dx, dy);
    }
    for (const StepRecord& s : log.steps) {
        const double c = quantize(s.clearance);
        if (std::isfinite(c) && (!m.min_clearance || c < *m.min_clearance)) {
            m.min_clearance = c;
        }
    }
    m.waypoints_reached = log.waypoints_reached.size();
    m.replans = log.replans.size();
    m.replan_errors = log.replan_errors;
    std::vector<double> times;
    for (const ReplanRecord& r : log.replans) {
        times.push_back(r.result.wall_time);
        m.feasible_replans += r.result.feasible ? 1 : 0;
        m.evaluations_total += r.result.evaluations;
        m.evaluations_max = std::max(m.evaluations_max, r.result.evaluations);
    }
    m.replan_time = timing_stats(std::move(times));
    m.collisions = log.collisions;
    return m;
}

namespace {

nlohmann::json timing_json(const TimingStats& t) {
    return {{"median", t.median}, {"p95", t.p95}, {"max", t.max}, {"mean", t.mean}};
}

}  // namespace

nlohmann::json metrics_to_json(const MetricsReport& m) {
    nlohmann::json j;
    j["success"] = m.success;
    j["outcome"] = m.outcome;
    j["steps"] = m.steps;
    j["duration"] = m.duration;
    j["path_length"] = m.path_length;
    j["min_clearance"] = m.min_clearance ? nlohmann::json(*m.min_clearance) : nlohmann::json(nullptr);
    j["waypoints_reached"] = m.waypoints_reached;
    j["replans"] = m.replans;
    j["feasible_replans"] = m.feasible_replans;
    j["replan_errors"] = m.replan_errors;
    j["replan_wall_time"] = timing_json(m.replan_time);
    j["evaluations"] = {{"total", m.evaluations_total}, {"max", m.evaluations_max}};
    nlohmann::json collisions = nlohmann::json::array();
    for (const CollisionEvent& c : m.collisions) {
        collisions.push_back({{"time", c.time},
                              {"kind", c.kind == ObstacleKind::dynamic ? "dynamic" : "static"},
                              {"index", c.index},
                              {"depth", c.depth}});
    }
    j["collisions"] = std::move(collisions);
    return j;
}

std::string trajectory_csv(const SimLog& log) {
    std::string out = "t,x,y,heading,s_anchor,clearance\n";
    for (const StepRecord& s : log.steps) {
        out += format_number(s.t) + ',' + format_number(s.position.x()) + ',' + format_number(s.position.y()) + ',' +
               format_number(s.heading) + ',' + format_number(s.s_anchor) + ',' + format_number(s.clearance) + '\n';
    }
    return out;
}

std::string curves_jsonl(const SimLog& log) {
    std::string out;
    for (const ReplanRecord& r : log.replans) {
        nlohmann::json j;
        j["t"] = r.t;
        j["segment"] = r.segment;
        j["cycle"] = r.cycle;
        j["feasible"] = r.result.feasible;
        j["length"] = r.result.length;
        j["violations"] = {{"obstacle", r.result.violations.obstacle},
                           {"curvature", r.result.violations.curvature},
                           {"vo", r.result.violations.vo}};
        j["evaluations"] = r.result.evaluations;
        j["curve"] = r.result.curve;
        out += j.dump() + '\n';
    }
    return out;
}

namespace {

/// Every logged instant at which dynamic obstacle tracks are drawn.
std::vector<double> track_times(const SimLog& log) {
    std::vector<double> times{0.0};
    const std::size_t stride = std::max<std::size_t>(1, log.steps.size() / 12);
    for (std::size_t i = stride - 1; i < log.steps.size(); i += stride) {
        times.push_back(log.steps[i].t);
    }
    if (!log.steps.empty() && times.back() != log.steps.back().t) {
        times.push_back(log.steps.back().t);
    }
    return times;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", x);
    return buf;
}

}  // namespace

Vec2 SvgFrame::to_canvas(const Vec2& world) const {
    const Vec2 extent = upper - lower;
    const double scale = std::min((width - 2 * margin) / extent.x(), (height - 2 * margin) / extent.y());
    const double ox = margin + 0.5 * ((width - 2 * margin) - scale * extent.x());
    const double oy = margin + 0.5 * ((height - 2 * margin) - scale * extent.y());
    return {ox + scale * (world.x() - lower.x()), height - (oy + scale * (world.y() - lower.y()))};
}

SvgFrame svg_frame(const SimLog& log, const Scenario& scenario) {
    Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
    Vec2 hi = -lo;
    const auto include = [&](const Vec2& p, double r) {
        lo = lo.cwiseMin(p - Vec2::Constant(r));
        hi = hi.cwiseMax(p + Vec2::Constant(r));
    };
    include(scenario.start.position, 0.0);
    for (const Waypoint& w : scenario.waypoints) {
        include(w.position, scenario.planner.waypoint_tolerance);
    }
    for (const StepRecord& s : log.steps) {
        include(s.position, 0.0);
    }
    for (const StaticObstacle& s : scenario.statics) {
        include(s.center, s.radius);
    }
    for (const double t : track_times(log)) {
        const World at = World(scenario.statics, scenario.dynamics, t);
        for (std::size_t i = 0; i < at.dynamics().size(); ++i) {
            if (at.is_active(i)) {
                include(at.dynamic_position(i), at.dynamics()[i].radius);
            }
        }
    }
    const Vec2 pad = 0.05 * (hi - lo).cwiseMax(Vec2::Constant(1.0));
    SvgFrame frame;
    frame.lower = lo - pad;
    frame.upper = hi + pad;
    return frame;
}

std::string render_svg(const SimLog& log, const Scenario& scenario) {
    if (log.steps.empty()) {
        throw std::invalid_argument("render_svg: empty log");
    }
    const SvgFrame frame = svg_frame(log, scenario);
    const Vec2 extent = frame.upper - frame.lower;
    const double scale =
        std::min((frame.width - 2 * frame.margin) / extent.x(), (frame.height - 2 * frame.margin) / extent.y());

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(frame.width) << "\" height=\""
        << fmt(frame.height) << "\" viewBox=\"0 0 " << fmt(frame.width) << ' ' << fmt(frame.height) << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << fmt(frame.width) << "\" height=\"" << fmt(frame.height)
        << "\" fill=\"white\"/>\n";

    svg << "<g id=\"static\">\n";
    for (const StaticObstacle& s : scenario.statics) {
        const Vec2 c = frame.to_canvas(s.center);
        svg << "<circle cx=\"" << fmt(c.x()) << "\" cy=\"" << fmt(c.y()) << "\" r=\"" << fmt(s.radius * scale)
            << "\" fill=\"" << (s.known ? "#d9534f" : "#f0ad4e") << "\" fill-opacity=\"0.5\"/>\n";
    }
    svg << "</g>\n<g id=\"dynamic\">\n";
    const std::vector<double> times = track_times(log);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const World at(scenario.statics, scenario.dynamics, times[k]);
        const double opacity = 0.1 + 0.5 * static_cast<double>(k + 1) / static_cast<double>(times.size());
        for (std::size_t i = 0; i < at.dynamics().size(); ++i) {
            if (!at.is_active(i)) {
                continue;
            }
            const Vec2 c = frame.to_canvas(at.dynamic_position(i));
            svg << "<circle cx=\"" << fmt(c.x()) << "\" cy=\"" << fmt(c.y()) << "\" r=\""
                << fmt(at.dynamics()[i].radius * scale) << "\" fill=\"#5bc0de\" fill-opacity=\"" << fmt(opacity)
                << "\"/>\n";
        }
    }
    svg << "</g>\n<g id=\"waypoints\">\n";
    for (const Waypoint& w : scenario.waypoints) {
        const Vec2 c = frame.to_canvas(w.position);
        svg << "<rect x=\"" << fmt(c.x() - 4) << "\" y=\"" << fmt(c.y() - 4)
            << "\" width=\"8\" height=\"8\" fill=\"#292b2c\"/>\n";
    }
    svg << "</g>\n<polyline id=\"path\" fill=\"none\" stroke=\"#0275d8\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < log.steps.size(); ++i) {
        const Vec2 c = frame.to_canvas(log.steps[i].position);
        svg << (i == 0 ? "" : " ") << fmt(c.x()) << ',' << fmt(c.y());
    }
    svg << "\"/>\n";
    for (const CollisionEvent& e : log.collisions) {
        const Vec2 c = frame.to_canvas(log.steps.back().position);
        svg << "<circle id=\"collision\" cx=\"" << fmt(c.x()) << "\" cy=\"" << fmt(c.y())
            << "\" r=\"6\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"><title>t=" << fmt(e.time)
            << "</title></circle>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

BenchReport bench_replan(const Scenario& scenario, std::size_t replans, std::uint64_t seed) {
    scenario.validate();
    const NurbsCurve path = plan_initial_paths(scenario, seed).front();
    const World world(scenario.statics, scenario.dynamics, 0.0);
    const SensedSnapshot snapshot = sense(world, scenario.start.position, scenario.planner.r_view);

    BenchReport bench;
    bench.replans = replans;
    bench.dimension = DeltaLayout(scenario.planner.path_points()).dimension();
    bench.sensed_obstacles = snapshot.dynamic.size();
    bench.budget_mode = scenario.planner.budget_mode;
    std::vector<double> times;
    std::vector<double> evaluations;
    for (std::size_t i = 0; i < replans; ++i) {
        const ReplanResult r = replan_cycle(path, scenario.start, snapshot, scenario.planner, derive_seed(seed, i));
        times.push_back(r.wall_time);
        evaluations.push_back(static_cast<double>(r.evaluations));
        bench.feasible += r.feasible ? 1 : 0;
    }
    bench.wall_time = timing_stats(std::move(times));
    bench.evaluations = timing_stats(std::move(evaluations));
    return bench;
}

nlohmann::json bench_to_json(const BenchReport& b) {
    return {{"replans", b.replans},
            {"dimension", b.dimension},
            {"sensed_obstacles", b.sensed_obstacles},
            {"budget_mode", b.budget_mode},
            {"wall_time", timing_json(b.wall_time)},
            {"evaluations", timing_json(b.evaluations)},
            {"feasible", b.feasible}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error(path.string() + ": cannot open for writing");
    }
    out << text;
}

}  // namespace nurbsvo
