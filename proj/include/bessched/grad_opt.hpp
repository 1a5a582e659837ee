#pragma once

#include <cstdint>
#include <vector>

#include "bessched/profiles.hpp"
#include "bessched/rng.hpp"
#include "bessched/system.hpp"

namespace bessched {

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long step_count = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update, in place.
void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grads,
               double lr);

struct GradOptConfig {
    long n_epochs = 200000;  // desk-scale default; multi-million runs stay config-selectable
    double tol = 1e-5;
    double init_lr = 0.1;
    double d_rate = 0.95;
    long d_steps = 1000;
    double alpha_min = 1.0;
    double alpha_max = 1000.0;
    double alpha_cap = 1000.0;  // bound on alpha_g + alpha_b per step
    double lambda_soc = 10.0;
    double lambda_balance = 10000.0;
    double lambda_alpha = 100.0;
    double lambda_end_soc = 1000.0;
    double power_norm_k = 1000.0;
    double price_norm_k = 100.0;
    long check_every = 100;
    double wall_budget_s = 0.0;  // 0 disables the budget
    int n_restarts = 1;

    void validate() const;
};

// init_lr * d_rate^(epoch / d_steps) with a real-valued exponent.
double lr_at(const GradOptConfig& config, long epoch);

std::vector<double> project_box(std::vector<double> x, const std::vector<double>& lo,
                                const std::vector<double>& hi);

// Decision vector layout used by the penalty loss and the optimizer:
// [p_g (normalized) | p_b (normalized) | alpha_g | alpha_b], each of length n.
struct PenaltyEval {
    double loss = 0.0;
    std::vector<double> grad;  // w.r.t. the normalized decision vector
};

// Penalized objective: normalized energy cost plus quadratic penalties for
// power-box overflow, SOC band departure, balance residual, the alpha_g
// tracking target (tariff mapped affinely onto the alpha range), and the
// end-of-horizon SOC target. Powers are scaled by power_norm_k and prices by
// price_norm_k internally; gradients are exact analytic partials with respect
// to the normalized series.
PenaltyEval penalty_loss(const Schedule& schedule, const ScenarioData& scenario,
                         const std::vector<double>& p_unc, const BatteryParams& battery,
                         const GridParams& grid, const GradOptConfig& config);

struct OptResult {
    Schedule schedule;
    Trajectory trajectory;
    double final_loss = 0.0;
    long iterations_run = 0;
    bool converged = false;
    double wall_time_s = 0.0;
};

OptResult optimize_schedule(const ScenarioData& scenario, const std::vector<double>& p_unc,
                            const BatteryParams& battery, const GridParams& grid,
                            const GradOptConfig& config, Rng& rng);

// Rescales the pair proportionally when its sum exceeds cap, then restores the
// lower bound. Exposed for direct testing.
void apply_alpha_cap(double& alpha_g, double& alpha_b, double cap, double alpha_min);

}  // namespace bessched
