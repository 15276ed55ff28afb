#include "nurbsvo/cli.hpp"

#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "nurbsvo/mission.hpp"
#include "nurbsvo/report.hpp"
#include "nurbsvo/scenario.hpp"

namespace nurbsvo {

int run(const RunOptions& options, std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_scenario(options.scenario);
        if (options.disable_vo) {
            scenario.planner.enable_vo = false;
        }
        if (options.disable_curvature) {
            scenario.planner.enable_curvature = false;
        }
    } catch (const ScenarioError& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
    const std::uint64_t seed = options.seed.value_or(scenario.seed);

    if (options.mode == RunMode::validate) {
        out << "scenario ok: " << scenario.name << " (" << scenario.waypoints.size() << " waypoints, "
            << scenario.statics.size() << " static, " << scenario.dynamics.size() << " dynamic)\n";
        return kExitOk;
    }

    try {
        std::filesystem::create_directories(options.out);
        if (options.mode == RunMode::bench_replan) {
            if (options.replans == 0) {
                err << "error: --replans must be positive\n";
                return kExitBadInput;
            }
            const BenchReport bench = bench_replan(scenario, options.replans, seed);
            const nlohmann::json j = bench_to_json(bench);
            write_text(options.out / "bench.json", j.dump(2) + '\n');
            out << "bench-replan: " << bench.replans << " cycles, median " << bench.wall_time.median * 1e3
                << " ms, p95 " << bench.wall_time.p95 * 1e3 << " ms, max " << bench.wall_time.max * 1e3 << " ms\n";
            return kExitOk;
        }

        const SimLog log = run_mission(scenario, seed);
        const MetricsReport metrics = compute_metrics(log);
        write_text(options.out / "trajectory.csv", trajectory_csv(log));
        write_text(options.out / "metrics.json", metrics_to_json(metrics).dump(2) + '\n');
        write_text(options.out / "curves.jsonl", curves_jsonl(log));
        if (options.plot) {
            write_text(options.out / "plot.svg", render_svg(log, scenario));
        }
        out << "mission " << metrics.outcome << ": " << metrics.steps << " steps, path " << metrics.path_length
            << " m, " << metrics.replans << " replans\n";
        return metrics.success ? kExitOk : kExitMissionFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitBadInput;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Online NURBS path planning with truncated velocity obstacles"};
    RunOptions options;
    std::string scenario;
    std::string out_dir = options.out.string();
    std::uint64_t seed = 0;
    app.add_option("--scenario", scenario, "Scenario JSON file")->required();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    auto* seed_opt = app.add_option("--seed", seed, "Seed override");
    const std::map<std::string, RunMode> modes{
        {"mission", RunMode::mission}, {"bench-replan", RunMode::bench_replan}, {"validate", RunMode::validate}};
    app.add_option("--mode", options.mode, "mission | bench-replan | validate")
        ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case))
        ->capture_default_str();
    app.add_flag("--disable-vo", options.disable_vo, "Drop the velocity-obstacle constraint");
    app.add_flag("--disable-curvature", options.disable_curvature, "Drop the curvature constraint");
    app.add_flag("--plot", options.plot, "Write plot.svg in mission mode");
    app.add_option("--replans", options.replans, "Cycles in bench-replan mode")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitBadInput;
    }
    options.scenario = scenario;
    options.out = out_dir;
    if (seed_opt->count() > 0) {
        options.seed = seed;
    }
    return run(options, std::cout, std::cerr);
}

}  // namespace nurbsvo
