#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <vector>

#include "bessched/profiles.hpp"
#include "bessched/system.hpp"
#include "bessched/uncertainty.hpp"

namespace bessched {

enum class StateMode { PerStepUncertainty, EntropyVector };
enum class ObsKind { Power, Price, Passthrough };

struct EnvConfig {
    double alpha_g_fixed = 100.0;
    double alpha_b_fixed = 100.0;
    double alpha_s = 1.5;   // SOC band penalty weight, [1, 2]
    double alpha_l = 1.5;   // lower-half reserve penalty weight, [1, 2]
    double alpha_p = 500.0; // balance penalty weight, [100, 1000]
    double eta = 1.0;       // inner SOC weight
    double beta = 1.0;      // inner balance weight
    double soc_min = 0.2;
    double soc_max = 0.8;
    double power_norm_k = 1000.0;
    double price_norm_k = 100.0;
    StateMode state_mode = StateMode::PerStepUncertainty;
    bool safety_enabled = true;

    void validate() const;
};

struct EnvState {
    int t = 0;
    std::vector<double> obs;
    double soc = 0.0;  // tracked unnormalized
    bool done = false;
};

struct StepInfo {
    double cost = 0.0;          // penalty-weighted normalized cost inside the log
    double stage_cost_usd = 0.0;  // unweighted energy cost of the executed action
    double residual_kw = 0.0;
    double kappa = 0.0;
    double curtailed_kw = 0.0;  // surplus the boxes could not absorb
    bool soc_violation = false;
};

struct Transition {
    EnvState state;
    std::array<double, 2> action{};           // requested, clamped to boxes, kW
    std::array<double, 2> action_executed{};  // post-safety, kW
    double reward = 0.0;
    EnvState next_state;
    StepInfo info;
};

// Scales obs elements onto a uniform range: powers / power_norm_k, prices /
// price_norm_k, SOC and entropy values pass through.
std::vector<double> normalize_obs(const std::vector<double>& raw, const std::vector<ObsKind>& kinds,
                                  const EnvConfig& config);

struct SafetyResult {
    double p_g = 0.0;
    double p_b = 0.0;
    double kappa = 0.0;
};

// Rescales the action pair so grid + battery supply exactly the power the
// balance requires, then clamps to the boxes; clamp residue goes to the grid
// first and the battery second. Whenever the required power fits inside the
// combined boxes the result balances exactly.
SafetyResult safety_project(double p_g, double p_b, double p_pv, double adjusted_demand,
                            const GridParams& grid, const BatteryParams& battery);

class BessEnv {
public:
    BessEnv(ScenarioData scenario, UncertaintyDraw draw, BatteryParams battery, GridParams grid,
            EnvConfig config, std::array<double, 4> entropy_block = {});

    EnvState reset();
    Transition step(const std::array<double, 2>& action_kw);

    int n_steps() const { return scenario_.n_steps; }
    const EnvState& state() const { return state_; }
    const ScenarioData& scenario() const { return scenario_; }
    const UncertaintyDraw& draw() const { return draw_; }
    const BatteryParams& battery() const { return battery_; }
    const GridParams& grid() const { return grid_; }
    const EnvConfig& config() const { return config_; }

    // Hard-constraint audit across the episode so far.
    long box_violation_count() const { return box_violations_; }
    long unbalanced_feasible_count() const { return unbalanced_feasible_; }
    long soc_violation_count() const { return soc_violations_; }

    // Optional JSON-lines trace; one object per step. Not owned.
    void set_trace(std::ostream* sink) { trace_ = sink; }

private:
    std::vector<double> observe(int t, double soc) const;

    ScenarioData scenario_;
    UncertaintyDraw draw_;
    ScenarioData effective_;  // tariffs perturbed by the draw
    BatteryParams battery_;
    GridParams grid_;
    EnvConfig config_;
    std::array<double, 4> entropy_block_{};
    EnvState state_;
    long box_violations_ = 0;
    long unbalanced_feasible_ = 0;
    long soc_violations_ = 0;
    std::ostream* trace_ = nullptr;
};

using Policy = std::function<std::array<double, 2>(const EnvState&)>;

struct RolloutResult {
    double total_reward = 0.0;
    Trajectory trajectory;  // executed actions costed at alpha = 1
    std::vector<Transition> transitions;
};

RolloutResult rollout(const Policy& policy, BessEnv& env);

}  // namespace bessched
