#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "approach/config.hpp"
#include "approach/simulate.hpp"

namespace approach {

constexpr int kReportSchemaVersion = 1;

// No partial output files: write to a temp sibling, then rename into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline std::string format_machine(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// Columns: stage,i,j,g_1..g_n,in_D,dist_A,f. Rows follow the trace's
// recording stride; flags and safe counts are exact at those stages.
inline std::string trace_to_csv(const RunTrace& trace, std::size_t dim) {
    std::ostringstream out;
    out << "stage,i,j";
    for (std::size_t k = 1; k <= dim; ++k) out << ",g_" << k;
    out << ",in_D,dist_A,f\n";
    for (std::size_t s = 0; s < trace.recorded_stages.size(); ++s) {
        const long stage = trace.recorded_stages[s];
        const auto [i, j] = trace.actions[static_cast<std::size_t>(stage - 1)];
        out << stage << ',' << i << ',' << j;
        for (double g : trace.averages[s]) out << ',' << format_machine(g);
        out << ',' << static_cast<int>(trace.in_region_flags[static_cast<std::size_t>(stage - 1)]);
        out << ',' << format_machine(trace.dist_to_target[s]);
        const long f = trace.safe_count_curve.empty()
                           ? -1
                           : trace.safe_count_curve[static_cast<std::size_t>(stage - 1)];
        out << ',' << f << '\n';
    }
    return out.str();
}

inline nlohmann::json report_to_json(const MonteCarloReport& rep, const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["config"] = serialize_experiment_config(cfg);
    j["runs"] = rep.runs;
    j["stay_in_region_rate"] = rep.stay_in_region_rate;

    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [stage, count] : rep.exit_stage_histogram) hist[std::to_string(stage)] = count;
    j["exit_stage_histogram"] = hist;

    if (rep.rate_fit.has_value()) {
        j["rate_fit"] = {{"slope", rep.rate_fit->slope},
                         {"intercept", rep.rate_fit->intercept},
                         {"r2", rep.rate_fit->r2},
                         {"points", rep.rate_fit->points},
                         {"zeros_excluded", rep.rate_fit->zeros_excluded}};
    } else {
        j["rate_fit"] = nullptr;
        j["rate_fit_error"] = rep.rate_fit_error;
    }

    nlohmann::json freq = nlohmann::json::array();
    for (std::size_t c = 0; c < rep.safe_freq.checkpoints.size(); ++c) {
        nlohmann::json entry;
        entry["stage"] = rep.safe_freq.checkpoints[c];
        entry["f_over_sqrt_t"] = rep.safe_freq.ratios[c];
        entry["doubling_ratio"] = rep.safe_freq.doubling[c];
        freq.push_back(entry);
    }
    j["safe_frequency"] = freq;

    nlohmann::json eps = nlohmann::json::array();
    for (const auto& [level, stage] : rep.epsilon_attainment)
        eps.push_back({{"epsilon", level}, {"attained_at_stage", stage}});
    j["epsilon_attainment"] = eps;

    j["final_distances"] = rep.final_distances;
    j["certificate_count"] = rep.certificate_count;
    if (rep.certificate_count > 0) j["max_certificate_violation"] = rep.max_certificate_violation;
    j["max_decomposition_residual"] = rep.max_decomposition_residual;
    j["safe_branch_violations"] = rep.safe_branch_violations;
    return j;
}

inline nlohmann::json scenario_check_to_json(const Scenario& sc, const ScenarioCheck& check) {
    nlohmann::json j;
    j["schema_version"] = kReportSchemaVersion;
    j["scenario"] = sc.name;
    j["expectation"] = to_string(sc.expectation);
    nlohmann::json safe = nlohmann::json::array();
    for (std::size_t i : check.safe_actions) safe.push_back(sc.game.row_names[i]);
    j["safe_actions"] = safe;
    j["c1_holds"] = check.c1_holds;
    j["c2_holds"] = check.c2_holds;
    j["safe_gap"] = std::isinf(check.safe_gap) ? -1.0 : check.safe_gap;
    j["safe_response_in_region"] = check.safe_response_in_region;
    return j;
}

inline nlohmann::json waypoint_report_to_json(const WaypointConditionReport& report) {
    nlohmann::json legs = nlohmann::json::array();
    for (std::size_t ell = 0; ell < report.legs.size(); ++ell) {
        const auto& leg = report.legs[ell];
        nlohmann::json entry;
        entry["leg"] = ell;
        if (leg.c2a_checked) {
            entry["c2a"] = leg.c2a;
            entry["c2a_degenerate_absorption"] = leg.c2a_absorbed;
        } else {
            entry["c2a"] = "unchecked";
        }
        entry["c2b"] = leg.c2b;
        legs.push_back(entry);
    }
    nlohmann::json j;
    j["legs"] = legs;
    if (report.d1.has_value())
        j["d1"] = *report.d1;
    else
        j["d1"] = "unchecked";
    j["all_pass"] = report.all_pass();
    return j;
}

}  // namespace approach
