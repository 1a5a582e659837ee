#pragma once

#include <vector>

#include "bessched/profiles.hpp"

namespace bessched {

struct BatteryParams {
    double capacity_kwh = 20000.0;
    double soc_init = 0.8;
    double soc_min = 0.2;
    double soc_max = 0.8;
    double p_b_min = -1000.0;  // kW, charging limit (negative power charges)
    double p_b_max = 1000.0;   // kW, discharging limit

    void validate() const;
};

struct GridParams {
    double p_g_min = 0.0;     // kW; default 0 forbids export
    double p_g_max = 5000.0;  // kW

    void validate() const;
};

// Decision variables over one horizon: grid power, battery power and the
// per-step penalty multipliers steering the grid/battery trade-off.
struct Schedule {
    std::vector<double> p_g;
    std::vector<double> p_b;
    std::vector<double> alpha_g;
    std::vector<double> alpha_b;

    static Schedule constant_alpha(std::vector<double> p_g, std::vector<double> p_b, double alpha);
};

struct Trajectory {
    std::vector<double> soc;          // length n_steps+1, soc[0] = soc_init
    std::vector<double> residual_kw;  // per step
    std::vector<double> stage_cost;   // $ per step
    double total_cost = 0.0;
    int soc_violations = 0;  // steps whose post-step SOC leaves [soc_min, soc_max]
    double end_soc = 0.0;
    double min_soc = 0.0;
};

// Discharge convention: positive battery power serves load and lowers SOC.
// The result is intentionally not clamped; callers penalize or project.
double soc_step(double soc, double p_b_kw, double capacity_kwh, double dt_hours);

// (demand + uncertainty) minus (grid + battery + PV); zero means balanced.
double balance_residual(double p_g, double p_b, double p_pv, double p_d, double p_unc);

// Per-step cost in $. The battery term uses |p_b| so charging also pays the
// operating cost; energy accounting keeps dollars invariant under dt changes.
double stage_cost(double p_g, double p_b, double c_g, double c_b, double alpha_g, double alpha_b,
                  double dt_hours);

Trajectory simulate_schedule(const ScenarioData& scenario, const Schedule& schedule,
                             const BatteryParams& battery, const std::vector<double>& p_unc);
Trajectory simulate_schedule(const ScenarioData& scenario, const Schedule& schedule,
                             const BatteryParams& battery);

}  // namespace bessched
