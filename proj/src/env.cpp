#include "bessched/env.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "bessched/errors.hpp"

namespace bessched {

namespace {
constexpr double kBalanceEps = 1e-9;     // kW; treats |p_g + p_b| below this as zero
constexpr double kResidualTol = 1e-6;    // kW; audit tolerance for a balanced step
constexpr double kCostFloor = 1e-3;      // keeps the log defined at zero cost
}  // namespace

void EnvConfig::validate() const {
    if (!(alpha_s >= 1.0 && alpha_s <= 2.0)) throw ValidationError("alpha_s must be in [1, 2]");
    if (!(alpha_l >= 1.0 && alpha_l <= 2.0)) throw ValidationError("alpha_l must be in [1, 2]");
    if (!(alpha_p >= 100.0 && alpha_p <= 1000.0))
        throw ValidationError("alpha_p must be in [100, 1000]");
    if (!(soc_min < soc_max)) throw ValidationError("require soc_min < soc_max");
    if (!(power_norm_k > 0.0) || !(price_norm_k > 0.0))
        throw ValidationError("normalization constants must be > 0");
}

std::vector<double> normalize_obs(const std::vector<double>& raw, const std::vector<ObsKind>& kinds,
                                  const EnvConfig& config) {
    if (raw.size() != kinds.size()) throw LengthMismatch("normalize_obs raw vs kinds");
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        switch (kinds[i]) {
            case ObsKind::Power: out[i] = raw[i] / config.power_norm_k; break;
            case ObsKind::Price: out[i] = raw[i] / config.price_norm_k; break;
            case ObsKind::Passthrough: out[i] = raw[i]; break;
        }
    }
    return out;
}

SafetyResult safety_project(double p_g, double p_b, double p_pv, double adjusted_demand,
                            const GridParams& grid, const BatteryParams& battery) {
    const double required = adjusted_demand - p_pv;
    const double supplied = p_g + p_b;
    SafetyResult r;
    if (std::abs(supplied) > kBalanceEps) {
        r.kappa = required / supplied;
        r.p_g = std::clamp(r.kappa * p_g, grid.p_g_min, grid.p_g_max);
        r.p_b = std::clamp(r.kappa * p_b, battery.p_b_min, battery.p_b_max);
        // Clamp residue: grid absorbs what it can, battery takes the rest.
        r.p_g = std::clamp(r.p_g + (required - r.p_g - r.p_b), grid.p_g_min, grid.p_g_max);
        r.p_b = std::clamp(r.p_b + (required - r.p_g - r.p_b), battery.p_b_min, battery.p_b_max);
    } else {
        r.kappa = 0.0;
        r.p_g = std::clamp(required, grid.p_g_min, grid.p_g_max);
        r.p_b = std::clamp(required - r.p_g, battery.p_b_min, battery.p_b_max);
    }
    return r;
}

BessEnv::BessEnv(ScenarioData scenario, UncertaintyDraw draw, BatteryParams battery,
                 GridParams grid, EnvConfig config, std::array<double, 4> entropy_block)
    : scenario_(std::move(scenario)),
      draw_(std::move(draw)),
      battery_(battery),
      grid_(grid),
      config_(config),
      entropy_block_(entropy_block) {
    scenario_.validate();
    battery_.validate();
    grid_.validate();
    config_.validate();
    const auto n = static_cast<std::size_t>(scenario_.n_steps);
    if (draw_.p_unc.size() != n || draw_.u_cg.size() != n || draw_.u_cb.size() != n)
        throw LengthMismatch("uncertainty draw vs scenario");
    effective_ = perturbed_scenario(scenario_, draw_);
    reset();
}

std::vector<double> BessEnv::observe(int t, double soc) const {
    std::vector<double> raw = {scenario_.p_pv[t], scenario_.p_d[t], effective_.c_g[t],
                               effective_.c_b[t]};
    std::vector<ObsKind> kinds = {ObsKind::Power, ObsKind::Power, ObsKind::Price, ObsKind::Price};
    if (config_.state_mode == StateMode::PerStepUncertainty) {
        raw.push_back(draw_.p_unc[t]);
        kinds.push_back(ObsKind::Power);
    } else {
        for (double h : entropy_block_) {
            raw.push_back(h);
            kinds.push_back(ObsKind::Passthrough);
        }
    }
    raw.push_back(soc);
    kinds.push_back(ObsKind::Passthrough);
    return normalize_obs(raw, kinds, config_);
}

EnvState BessEnv::reset() {
    state_.t = 0;
    state_.soc = battery_.soc_init;
    state_.done = false;
    state_.obs = observe(0, state_.soc);
    box_violations_ = 0;
    unbalanced_feasible_ = 0;
    soc_violations_ = 0;
    return state_;
}

Transition BessEnv::step(const std::array<double, 2>& action_kw) {
    if (state_.done) throw EpisodeFinished();
    const int t = state_.t;

    Transition tr;
    tr.state = state_;
    tr.action = {std::clamp(action_kw[0], grid_.p_g_min, grid_.p_g_max),
                 std::clamp(action_kw[1], battery_.p_b_min, battery_.p_b_max)};

    const double adjusted_demand = scenario_.p_d[t] + draw_.p_unc[t];
    const double required = adjusted_demand - scenario_.p_pv[t];
    if (config_.safety_enabled) {
        SafetyResult s = safety_project(tr.action[0], tr.action[1], scenario_.p_pv[t],
                                        adjusted_demand, grid_, battery_);
        tr.action_executed = {s.p_g, s.p_b};
        tr.info.kappa = s.kappa;
    } else {
        tr.action_executed = tr.action;
        tr.info.kappa = 1.0;
    }

    const double p_g = tr.action_executed[0];
    const double p_b = tr.action_executed[1];
    tr.info.residual_kw =
        balance_residual(p_g, p_b, scenario_.p_pv[t], scenario_.p_d[t], draw_.p_unc[t]);
    if (tr.info.residual_kw < -kResidualTol) tr.info.curtailed_kw = -tr.info.residual_kw;

    // Audit the hard constraints: boxes always, balance whenever feasible.
    if (p_g < grid_.p_g_min - kResidualTol || p_g > grid_.p_g_max + kResidualTol ||
        p_b < battery_.p_b_min - kResidualTol || p_b > battery_.p_b_max + kResidualTol)
        ++box_violations_;
    const bool feasible = required >= grid_.p_g_min + battery_.p_b_min - kResidualTol &&
                          required <= grid_.p_g_max + battery_.p_b_max + kResidualTol;
    if (config_.safety_enabled && feasible && std::abs(tr.info.residual_kw) > kResidualTol)
        ++unbalanced_feasible_;

    const double dt = scenario_.dt_hours;
    const double cg_n = effective_.c_g[t] / config_.price_norm_k;
    const double cb_n = effective_.c_b[t] / config_.price_norm_k;
    tr.info.cost = config_.alpha_g_fixed * (p_g / config_.power_norm_k) * cg_n * dt +
                   config_.alpha_b_fixed * std::abs(p_b / config_.power_norm_k) * cb_n * dt;
    tr.info.stage_cost_usd = stage_cost(p_g, p_b, effective_.c_g[t], effective_.c_b[t], 1.0, 1.0, dt);

    const double soc_next = soc_step(state_.soc, p_b, battery_.capacity_kwh, dt);
    // Penalties score the post-action SOC so the reserve term covers the end
    // of the day.
    const double s_p = config_.eta * (std::max(0.0, config_.soc_min - soc_next) +
                                      std::max(0.0, soc_next - config_.soc_max));
    const double s_lh = config_.eta * std::max(0.0, 0.5 - soc_next);
    const double residual_n = std::abs(tr.info.residual_kw) / config_.power_norm_k;
    tr.reward = -std::log(tr.info.cost + kCostFloor) - config_.alpha_s * s_p -
                config_.alpha_l * s_lh - config_.alpha_p * config_.beta * residual_n;

    tr.info.soc_violation = soc_next < config_.soc_min || soc_next > config_.soc_max;
    if (tr.info.soc_violation) ++soc_violations_;

    state_.t = t + 1;
    state_.soc = soc_next;
    state_.done = state_.t == scenario_.n_steps;
    state_.obs = observe(state_.done ? t : state_.t, soc_next);
    tr.next_state = state_;

    if (trace_) {
        *trace_ << "{\"t\":" << t << ",\"p_g\":" << p_g << ",\"p_b\":" << p_b
                << ",\"reward\":" << tr.reward << ",\"cost\":" << tr.info.cost
                << ",\"residual_kw\":" << tr.info.residual_kw << ",\"soc\":" << soc_next
                << ",\"kappa\":" << tr.info.kappa << "}\n";
    }
    return tr;
}

RolloutResult rollout(const Policy& policy, BessEnv& env) {
    RolloutResult out;
    EnvState s = env.reset();
    const int n = env.n_steps();
    std::vector<double> p_g(n), p_b(n);
    out.transitions.reserve(n);
    while (!s.done) {
        Transition tr = env.step(policy(s));
        p_g[tr.state.t] = tr.action_executed[0];
        p_b[tr.state.t] = tr.action_executed[1];
        out.total_reward += tr.reward;
        s = tr.next_state;
        out.transitions.push_back(std::move(tr));
    }
    Schedule executed = Schedule::constant_alpha(std::move(p_g), std::move(p_b), 1.0);
    out.trajectory = simulate_schedule(perturbed_scenario(env.scenario(), env.draw()), executed,
                                       env.battery(), env.draw().p_unc);
    return out;
}

}  // namespace bessched
