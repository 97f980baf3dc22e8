// Command-line front end: feasibility checks, single runs with trace export,
// and Monte Carlo experiments over the built-in scenarios.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "approach/config.hpp"
#include "approach/io.hpp"
#include "approach/scenarios.hpp"
#include "approach/simulate.hpp"

namespace {

using namespace approach;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", x);
    return buf;
}

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<long> runs;
    std::optional<long> horizon;
    std::optional<std::string> out;
    std::optional<int> parallel;
};

LoadedExperiment load_config(const CommonFlags& flags) {
    LoadedExperiment loaded;
    if (!flags.config_path.empty()) loaded = load_experiment_text(read_file(flags.config_path));
    auto& cfg = loaded.config;
    if (flags.seed) cfg.base_seed = *flags.seed;
    if (flags.runs) cfg.runs = *flags.runs;
    if (flags.horizon) cfg.horizon = *flags.horizon;
    if (flags.out) cfg.output_dir = *flags.out;
    if (flags.parallel) cfg.parallel = *flags.parallel;
    cfg.validate();
    return loaded;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "experiment config file");
    cmd->add_option("--seed", flags.seed, "override base_seed");
    cmd->add_option("--runs", flags.runs, "override run count");
    cmd->add_option("--horizon", flags.horizon, "override horizon");
    cmd->add_option("--out", flags.out, "override output directory");
    cmd->add_option("--parallel", flags.parallel, "override parallelism (0 = all cores)");
}

int cmd_scenarios(bool dump, const std::string& dump_name) {
    if (dump) {
        const auto sc = build_scenario(dump_name);
        std::cout << serialize_config_tree(scenario_to_tree(sc));
        return 0;
    }
    for (const auto& name : scenario_names()) {
        const auto sc = build_scenario(name);
        std::printf("%-32s %zux%zu game, %s\n", name.c_str(), sc.game.rows(), sc.game.cols(),
                    to_string(sc.expectation).c_str());
    }
    return 0;
}

int cmd_check(const CommonFlags& flags) {
    const auto loaded = load_config(flags);
    const auto& cfg = loaded.config;
    const auto sc = build_configured_scenario(loaded);

    ScenarioCheckOptions opts;
    opts.oracle = sc.oracle(cfg.grid_resolution);
    const auto check = check_scenario(sc.game, sc.target, sc.region, opts);

    std::cout << "scenario:       " << sc.name << "\n";
    std::cout << "safe actions:  ";
    if (check.safe_actions.empty()) std::cout << " (none)";
    for (std::size_t i : check.safe_actions) std::cout << ' ' << sc.game.row_names[i];
    std::cout << "\n";
    std::cout << "C2 (safe action exists): " << (check.c2_holds ? "holds" : "fails") << "\n";
    if (check.c2_holds) {
        std::cout << "safety gap delta:        "
                  << (std::isinf(check.safe_gap) ? "unbounded" : fmt6(check.safe_gap)) << "\n";
        std::cout << "R1(s) inside D:          " << (check.safe_response_in_region ? "yes" : "no") << "\n";
    }
    std::cout << "C1 (target approachable, sampled dual check): " << (check.c1_holds ? "holds" : "fails")
              << "\n";

    nlohmann::json j = scenario_check_to_json(sc, check);
    bool all_pass = check.c1_holds && check.c2_holds;

    if (sc.waypoint_plan.has_value()) {
        const auto report = check_waypoint_conditions(*sc.waypoint_plan, sc.game, sc.target, sc.region,
                                                      sc.oracle(cfg.grid_resolution));
        std::cout << "waypoint plan conditions:\n";
        for (std::size_t ell = 0; ell < report.legs.size(); ++ell) {
            const auto& leg = report.legs[ell];
            std::cout << "  leg " << ell << ": (c2a) ";
            if (!leg.c2a_checked)
                std::cout << "unchecked";
            else
                std::cout << (leg.c2a ? (leg.c2a_absorbed ? "holds (absorbed)" : "holds") : "fails");
            std::cout << ", (c2b) " << (leg.c2b ? "holds" : "fails") << "\n";
        }
        if (report.d1.has_value())
            std::cout << "  (d1) target approachable: " << (*report.d1 ? "holds" : "fails") << "\n";
        else
            std::cout << "  (d1) unchecked\n";
        j["waypoint"] = waypoint_report_to_json(report);
        all_pass = all_pass && report.all_pass();
    }

    std::filesystem::create_directories(cfg.output_dir);
    write_file_atomic(std::filesystem::path(cfg.output_dir) / "check.json", j.dump(2) + "\n");
    std::cout << (all_pass ? "all checks pass" : "some checks fail") << "\n";
    return all_pass ? 0 : 2;
}

int cmd_run(const CommonFlags& flags) {
    const auto loaded = load_config(flags);
    const auto& cfg = loaded.config;
    const auto sc = build_configured_scenario(loaded);
    std::filesystem::create_directories(cfg.output_dir);

    nlohmann::json manifest;
    manifest["schema_version"] = kReportSchemaVersion;
    manifest["config"] = serialize_experiment_config(cfg);
    manifest["scenario"] = sc.name;
    manifest["csv_columns"] = "stage,i,j,g_1..g_n,in_D,dist_A,f";
    std::vector<std::uint64_t> seeds;

    for (long r = 0; r < cfg.runs; ++r) {
        RunOptions opts;
        opts.horizon = cfg.horizon;
        opts.seed = cfg.base_seed + static_cast<std::uint64_t>(r);
        opts.trace_stride = cfg.trace_stride;
        const auto strategy = build_strategy(sc, cfg.strategy);
        const auto adversary = build_adversary(sc, cfg.adversary);
        const auto trace = run(sc.game, strategy, adversary, sc.region, sc.target, opts);
        const auto path =
            std::filesystem::path(cfg.output_dir) / ("run_" + std::to_string(opts.seed) + ".csv");
        write_file_atomic(path, trace_to_csv(trace, sc.game.dim()));
        seeds.push_back(opts.seed);
        std::cout << path.string() << ": " << trace.stages << " stages, "
                  << (trace.stayed_in_region()
                          ? "stayed in D"
                          : "left D at stage " + std::to_string(trace.first_exit_stage))
                  << ", final dist " << fmt6(trace.final_distance) << "\n";
    }
    manifest["seeds"] = seeds;
    write_file_atomic(std::filesystem::path(cfg.output_dir) / "manifest.json", manifest.dump(2) + "\n");
    return 0;
}

int cmd_montecarlo(const CommonFlags& flags) {
    const auto loaded = load_config(flags);
    const auto& cfg = loaded.config;
    const auto sc = build_configured_scenario(loaded);
    std::filesystem::create_directories(cfg.output_dir);

    MonteCarloOptions opts;
    opts.horizon = cfg.horizon;
    opts.runs = cfg.runs;
    opts.base_seed = cfg.base_seed;
    opts.parallelism = cfg.parallel;
    opts.trace_stride = cfg.trace_stride;
    opts.fit_t_min = std::max<long>(10, cfg.horizon / 100);
    if (cfg.strategy.name == "sigma_star") {
        opts.safe_checkpoints = {cfg.horizon / 4, cfg.horizon / 2};
        opts.verify_decomposition = true;
        opts.verify_safe_branch = true;
    }
    opts.verify_certificates = true;

    const auto report = monte_carlo(
        sc.game, [&](std::size_t) { return build_strategy(sc, cfg.strategy); },
        [&](std::size_t) { return build_adversary(sc, cfg.adversary); }, sc.region, sc.target, opts);

    std::cout << "scenario:            " << sc.name << "\n";
    std::cout << "strategy:            " << cfg.strategy.name << "\n";
    std::cout << "adversary:           " << cfg.adversary.name << "\n";
    std::cout << "runs x horizon:      " << cfg.runs << " x " << cfg.horizon << "\n";
    std::cout << "stay-in-region rate: " << fmt6(report.stay_in_region_rate) << "\n";
    if (report.rate_fit.has_value()) {
        std::cout << "rate fit:            slope " << fmt6(report.rate_fit->slope) << ", r2 "
                  << fmt6(report.rate_fit->r2) << " (" << report.rate_fit->points << " points)\n";
    } else {
        std::cout << "rate fit:            unavailable (" << report.rate_fit_error << ")\n";
    }
    for (std::size_t c = 0; c < report.safe_freq.checkpoints.size(); ++c) {
        const auto& ratios = report.safe_freq.ratios[c];
        double mean = 0.0;
        for (double v : ratios) mean += v;
        if (!ratios.empty()) mean /= static_cast<double>(ratios.size());
        std::cout << "f(t)/sqrt(t) at t=" << report.safe_freq.checkpoints[c] << ": mean " << fmt6(mean)
                  << "\n";
    }
    std::cout << "epsilon attainment:\n";
    for (const auto& [eps, stage] : report.epsilon_attainment) {
        std::cout << "  eps " << fmt6(eps) << ": ";
        if (stage < 0)
            std::cout << "not attained\n";
        else
            std::cout << "from stage " << stage << "\n";
    }
    if (report.certificate_count > 0)
        std::cout << "certificates:        " << report.certificate_count << " checked, max violation "
                  << fmt6(report.max_certificate_violation) << "\n";

    write_file_atomic(std::filesystem::path(cfg.output_dir) / "report.json",
                      report_to_json(report, cfg).dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulation and verification for approachability under constraints"};
    app.require_subcommand(1);

    auto* scenarios_cmd = app.add_subcommand("scenarios", "list built-in scenarios");
    std::string dump_name;
    auto* dump_opt = scenarios_cmd->add_option("--dump", dump_name, "print one scenario as a config file");

    CommonFlags check_flags, run_flags, mc_flags;
    auto* check_cmd = app.add_subcommand("check", "evaluate conditions (C1), (C2) and waypoint plans");
    add_common_flags(check_cmd, check_flags);
    auto* run_cmd = app.add_subcommand("run", "simulate runs and write CSV traces");
    add_common_flags(run_cmd, run_flags);
    auto* mc_cmd = app.add_subcommand("montecarlo", "aggregate many runs into a report");
    add_common_flags(mc_cmd, mc_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (scenarios_cmd->parsed()) return cmd_scenarios(!dump_opt->empty(), dump_name);
        if (check_cmd->parsed()) return cmd_check(check_flags);
        if (run_cmd->parsed()) return cmd_run(run_flags);
        if (mc_cmd->parsed()) return cmd_montecarlo(mc_flags);
    } catch (const approach::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
