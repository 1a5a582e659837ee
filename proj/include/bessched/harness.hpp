#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bessched/config.hpp"
#include "bessched/env.hpp"
#include "bessched/grad_opt.hpp"
#include "bessched/sac.hpp"
#include "bessched/system.hpp"
#include "bessched/uncertainty.hpp"

namespace bessched {

struct OracleResult {
    double best_cost = 0.0;
    Schedule schedule;
    Trajectory trajectory;
};

// Exhaustive reference solver for tiny horizons: enumerates grid power over a
// resolution grid per step, sets battery power by exact balance (p_unc = 0),
// discards SOC or battery-box violations, and keeps the cheapest feasible
// schedule. Cost uses a constant alpha (default 1); with powers fixed, the
// cost is increasing in alpha, so the constant-alpha optimum is the
// variable-alpha optimum at the alpha floor.
OracleResult brute_force_oracle(const ScenarioData& scenario, const BatteryParams& battery,
                                const GridParams& grid, double grid_resolution_kw,
                                double alpha_fixed = 1.0);

enum class SolverChoice { Grad, Sac, Both };
enum class ReportFormat { Json, Csv, Markdown };

struct ExperimentConfig {
    std::string scenario_csv;  // empty selects the synthetic scenario
    std::uint64_t synth_seed = 7;
    int n_steps = 48;
    double dt_hours = 0.5;
    double power_factor = 1.0;
    double price_factor = 1.0;
    std::vector<DistFamily> families = {DistFamily::Normal, DistFamily::Uniform,
                                        DistFamily::Exponential, DistFamily::LogNormal,
                                        DistFamily::Beta};
    SolverChoice solvers = SolverChoice::Both;
    BatteryParams battery;
    GridParams grid;
    GradOptConfig grad;
    EnvConfig env;
    SacConfig sac;
    int repeats = 1;
    std::string out_dir = "out";
    std::uint64_t seed = 0;
};

struct RunRecord {
    std::string solver;  // "grad" | "sac"
    std::string family;
    int repeat = 0;
    std::string label;
    double total_cost_usd = 0.0;  // executed schedule costed at alpha = 1
    double end_soc = 0.0;
    double min_soc = 0.0;
    int soc_violations = 0;
    long iterations = 0;
    bool converged = false;
    double wall_time_s = 0.0;
    std::uint64_t scenario_hash = 0;
    std::uint64_t draw_hash = 0;
    std::string trajectory_file;
    std::string curve_file;  // sac only
};

struct Report {
    std::vector<RunRecord> records;
};

// Paired comparison across the requested uncertainty families: both solvers
// consume the same per-repeat draw. Trajectories and learning curves persist
// under config.out_dir; partial results survive a solver failure.
Report run_comparison(const ExperimentConfig& config);

void emit_report(const Report& report, const std::string& path, ReportFormat format);
Report load_report_json(const std::string& path);

// Hash of a series' exact bytes, for the paired-draw contract.
std::uint64_t hash_series(const std::vector<double>& series);
std::uint64_t hash_draw(const UncertaintyDraw& draw);
std::uint64_t hash_scenario(const ScenarioData& scenario);

void write_trajectory_json(const std::string& path, const Trajectory& trajectory,
                           const Schedule& schedule, const std::string& label);

ExperimentConfig experiment_from(const KvConfig& kv);

}  // namespace bessched
