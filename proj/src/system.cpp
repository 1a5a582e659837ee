#include "bessched/system.hpp"

#include <algorithm>
#include <cmath>

#include "bessched/errors.hpp"

namespace bessched {

void BatteryParams::validate() const {
    if (!(capacity_kwh > 0.0)) throw ValidationError("battery capacity must be > 0");
    if (!(0.0 <= soc_min && soc_min < soc_max && soc_max <= 1.0))
        throw ValidationError("require 0 <= soc_min < soc_max <= 1");
    if (!(soc_min <= soc_init && soc_init <= soc_max))
        throw ValidationError("soc_init must lie in [soc_min, soc_max]");
    if (!(p_b_min <= 0.0 && 0.0 <= p_b_max))
        throw ValidationError("battery power box must contain 0 (p_b_min <= 0 <= p_b_max)");
}

void GridParams::validate() const {
    if (!(p_g_min <= p_g_max)) throw ValidationError("require p_g_min <= p_g_max");
}

Schedule Schedule::constant_alpha(std::vector<double> p_g, std::vector<double> p_b, double alpha) {
    Schedule s;
    std::size_t n = p_g.size();
    s.p_g = std::move(p_g);
    s.p_b = std::move(p_b);
    s.alpha_g.assign(n, alpha);
    s.alpha_b.assign(n, alpha);
    return s;
}

double soc_step(double soc, double p_b_kw, double capacity_kwh, double dt_hours) {
    return soc - dt_hours * p_b_kw / capacity_kwh;
}

double balance_residual(double p_g, double p_b, double p_pv, double p_d, double p_unc) {
    return (p_d + p_unc) - (p_g + p_b + p_pv);
}

double stage_cost(double p_g, double p_b, double c_g, double c_b, double alpha_g, double alpha_b,
                  double dt_hours) {
    return alpha_g * c_g * p_g * dt_hours + alpha_b * c_b * std::abs(p_b) * dt_hours;
}

Trajectory simulate_schedule(const ScenarioData& scenario, const Schedule& schedule,
                             const BatteryParams& battery, const std::vector<double>& p_unc) {
    const int n = scenario.n_steps;
    auto check = [n](const std::vector<double>& v, const char* name) {
        if (static_cast<int>(v.size()) != n) throw LengthMismatch(name);
    };
    check(schedule.p_g, "schedule.p_g");
    check(schedule.p_b, "schedule.p_b");
    check(schedule.alpha_g, "schedule.alpha_g");
    check(schedule.alpha_b, "schedule.alpha_b");
    check(p_unc, "p_unc");
    battery.validate();

    Trajectory tr;
    tr.soc.resize(n + 1);
    tr.residual_kw.resize(n);
    tr.stage_cost.resize(n);
    tr.soc[0] = battery.soc_init;
    tr.min_soc = battery.soc_init;

    for (int t = 0; t < n; ++t) {
        tr.residual_kw[t] =
            balance_residual(schedule.p_g[t], schedule.p_b[t], scenario.p_pv[t], scenario.p_d[t], p_unc[t]);
        tr.stage_cost[t] = stage_cost(schedule.p_g[t], schedule.p_b[t], scenario.c_g[t],
                                      scenario.c_b[t], schedule.alpha_g[t], schedule.alpha_b[t],
                                      scenario.dt_hours);
        tr.total_cost += tr.stage_cost[t];
        tr.soc[t + 1] = soc_step(tr.soc[t], schedule.p_b[t], battery.capacity_kwh, scenario.dt_hours);
        if (tr.soc[t + 1] < battery.soc_min || tr.soc[t + 1] > battery.soc_max) ++tr.soc_violations;
        tr.min_soc = std::min(tr.min_soc, tr.soc[t + 1]);
    }
    tr.end_soc = tr.soc[n];
    return tr;
}

Trajectory simulate_schedule(const ScenarioData& scenario, const Schedule& schedule,
                             const BatteryParams& battery) {
    return simulate_schedule(scenario, schedule, battery,
                             std::vector<double>(scenario.n_steps, 0.0));
}

}  // namespace bessched
