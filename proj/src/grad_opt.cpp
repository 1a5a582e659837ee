#include "bessched/grad_opt.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cmath>
#include <limits>

#include "bessched/errors.hpp"

namespace bessched {

void adam_step(AdamState& state, std::vector<double>& params, const std::vector<double>& grads,
               double lr) {
    const std::size_t n = params.size();
    if (state.m.size() != n || state.v.size() != n || grads.size() != n)
        throw LengthMismatch("adam_step state/params/grads");
    state.step_count += 1;
    const double b1 = state.beta1, b2 = state.beta2;
    const double bc1 = 1.0 - std::pow(b1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(b2, static_cast<double>(state.step_count));
    for (std::size_t i = 0; i < n; ++i) {
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * grads[i];
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * grads[i] * grads[i];
        double m_hat = state.m[i] / bc1;
        double v_hat = state.v[i] / bc2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
}

void GradOptConfig::validate() const {
    if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
    if (!(d_rate > 0.0 && d_rate <= 1.0)) throw ValidationError("d_rate must be in (0, 1]");
    if (!(alpha_min < alpha_max)) throw ValidationError("require alpha_min < alpha_max");
    if (!(init_lr > 0.0)) throw ValidationError("init_lr must be > 0");
    if (d_steps <= 0) throw ValidationError("d_steps must be > 0");
    if (check_every <= 0) throw ValidationError("check_every must be > 0");
    if (n_restarts < 1) throw ValidationError("n_restarts must be >= 1");
    if (!(power_norm_k > 0.0) || !(price_norm_k > 0.0))
        throw ValidationError("normalization constants must be > 0");
}

double lr_at(const GradOptConfig& config, long epoch) {
    return config.init_lr *
           std::pow(config.d_rate, static_cast<double>(epoch) / static_cast<double>(config.d_steps));
}

std::vector<double> project_box(std::vector<double> x, const std::vector<double>& lo,
                                const std::vector<double>& hi) {
    if (lo.size() != x.size() || hi.size() != x.size()) throw LengthMismatch("project_box bounds");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (lo[i] > hi[i]) throw BoundOrder();
        x[i] = std::clamp(x[i], lo[i], hi[i]);
    }
    return x;
}

void apply_alpha_cap(double& alpha_g, double& alpha_b, double cap, double alpha_min) {
    double sum = alpha_g + alpha_b;
    if (sum <= cap || sum <= 0.0) return;
    double f = cap / sum;
    alpha_g = std::max(alpha_g * f, alpha_min);
    alpha_b = std::max(alpha_b * f, alpha_min);
}

PenaltyEval penalty_loss(const Schedule& schedule, const ScenarioData& scenario,
                         const std::vector<double>& p_unc, const BatteryParams& battery,
                         const GridParams& grid, const GradOptConfig& config) {
    const int n = scenario.n_steps;
    auto check = [n](const std::vector<double>& v, const char* name) {
        if (static_cast<int>(v.size()) != n) throw LengthMismatch(name);
    };
    check(schedule.p_g, "schedule.p_g");
    check(schedule.p_b, "schedule.p_b");
    check(schedule.alpha_g, "schedule.alpha_g");
    check(schedule.alpha_b, "schedule.alpha_b");
    check(p_unc, "p_unc");

    const double kp = config.power_norm_k;
    const double kc = config.price_norm_k;
    const double dt = scenario.dt_hours;
    const double soc_lo = battery.soc_min;
    const double soc_hi = battery.soc_max;
    // Per-unit SOC drawn down by one normalized unit of battery power.
    const double q = kp * dt / battery.capacity_kwh;
    const double g_max_n = grid.p_g_max / kp;
    const double b_max_n = battery.p_b_max / kp;

    // Tracking target: tariff mapped affinely onto [alpha_min, alpha_max].
    double c_lo = scenario.c_g[0], c_hi = scenario.c_g[0];
    for (double c : scenario.c_g) {
        c_lo = std::min(c_lo, c);
        c_hi = std::max(c_hi, c);
    }
    const double c_span = c_hi - c_lo;

    std::vector<double> gn(n), bn(n), cgn(n), cbn(n), alpha_target(n);
    for (int t = 0; t < n; ++t) {
        gn[t] = schedule.p_g[t] / kp;
        bn[t] = schedule.p_b[t] / kp;
        cgn[t] = scenario.c_g[t] / kc;
        cbn[t] = scenario.c_b[t] / kc;
        alpha_target[t] = c_span > 1e-12
                              ? config.alpha_min + (scenario.c_g[t] - c_lo) / c_span *
                                                       (config.alpha_max - config.alpha_min)
                              : config.alpha_min;
    }

    std::vector<double> soc(n + 1);
    soc[0] = battery.soc_init;
    for (int t = 0; t < n; ++t) soc[t + 1] = soc[t] - q * bn[t];

    PenaltyEval out;
    out.grad.assign(4 * static_cast<std::size_t>(n), 0.0);
    double* d_g = out.grad.data();
    double* d_b = out.grad.data() + n;
    double* d_ag = out.grad.data() + 2 * n;
    double* d_ab = out.grad.data() + 3 * n;

    double loss = 0.0;
    for (int t = 0; t < n; ++t) {
        const double ag = schedule.alpha_g[t];
        const double ab = schedule.alpha_b[t];

        // Normalized energy cost.
        const double abs_b = std::abs(bn[t]);
        loss += dt * (ag * cgn[t] * gn[t] + ab * cbn[t] * abs_b);
        d_g[t] += dt * ag * cgn[t];
        d_b[t] += dt * ab * cbn[t] * (bn[t] > 0.0 ? 1.0 : (bn[t] < 0.0 ? -1.0 : 0.0));
        d_ag[t] += dt * cgn[t] * gn[t];
        d_ab[t] += dt * cbn[t] * abs_b;

        // Upper-side power overflow, weighted by the multipliers themselves.
        const double g_over = std::max(gn[t] - g_max_n, 0.0);
        loss += ag * g_over * g_over;
        d_g[t] += 2.0 * ag * g_over;
        d_ag[t] += g_over * g_over;

        const double b_over = std::max(bn[t] - b_max_n, 0.0);
        loss += ab * b_over * b_over;
        d_b[t] += 2.0 * ab * b_over;
        d_ab[t] += b_over * b_over;

        // Balance residual (normalized powers).
        const double r = (scenario.p_d[t] + p_unc[t] - scenario.p_pv[t]) / kp - gn[t] - bn[t];
        loss += config.lambda_balance * r * r;
        d_g[t] += -2.0 * config.lambda_balance * r;
        d_b[t] += -2.0 * config.lambda_balance * r;

        // alpha_g tracking.
        const double da = ag - alpha_target[t];
        loss += config.lambda_alpha * da * da;
        d_ag[t] += 2.0 * config.lambda_alpha * da;
    }

    // SOC band and end-of-horizon terms. psi[j] = d(penalties)/d(soc_j).
    std::vector<double> psi(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) {
        const double below = std::max(soc_lo - soc[j], 0.0);
        const double above = std::max(soc[j] - soc_hi, 0.0);
        loss += config.lambda_soc * (below * below + above * above);
        psi[j] = config.lambda_soc * (-2.0 * below + 2.0 * above);
    }
    const double end_short = std::max(soc_hi - soc[n], 0.0);
    loss += config.lambda_end_soc * end_short * end_short;
    psi[n] += config.lambda_end_soc * (-2.0 * end_short);

    // d soc_j / d bn_t = -q for j > t; accumulate suffix sums of psi.
    double suffix = 0.0;
    for (int t = n - 1; t >= 0; --t) {
        suffix += psi[t + 1];
        d_b[t] += -q * suffix;
    }

    out.loss = loss;
    return out;
}

namespace {

Schedule schedule_from_vector(const std::vector<double>& x, int n, double kp) {
    Schedule s;
    s.p_g.assign(x.begin(), x.begin() + n);
    s.p_b.assign(x.begin() + n, x.begin() + 2 * n);
    s.alpha_g.assign(x.begin() + 2 * n, x.begin() + 3 * n);
    s.alpha_b.assign(x.begin() + 3 * n, x.begin() + 4 * n);
    for (int t = 0; t < n; ++t) {
        s.p_g[t] *= kp;
        s.p_b[t] *= kp;
    }
    return s;
}

struct RestartOutcome {
    std::vector<double> best_x;
    double best_loss = std::numeric_limits<double>::infinity();
    long iterations = 0;
    bool converged = false;
};

}  // namespace

OptResult optimize_schedule(const ScenarioData& scenario, const std::vector<double>& p_unc,
                            const BatteryParams& battery, const GridParams& grid,
                            const GradOptConfig& config, Rng& rng) {
    config.validate();
    battery.validate();
    grid.validate();
    scenario.validate();
    if (p_unc.size() != static_cast<std::size_t>(scenario.n_steps)) throw LengthMismatch("p_unc");

    const int n = scenario.n_steps;
    const double kp = config.power_norm_k;
    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed_s = [&t_start] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    const double g_lo = grid.p_g_min / kp, g_hi = grid.p_g_max / kp;
    const double b_lo = battery.p_b_min / kp, b_hi = battery.p_b_max / kp;

    RestartOutcome winner;
    for (int restart = 0; restart < config.n_restarts; ++restart) {
        std::vector<double> x(4 * static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            if (restart == 0) {
                x[t] = 0.5 * (g_lo + g_hi);
                x[n + t] = 0.5 * (b_lo + b_hi);
                x[2 * n + t] = config.alpha_min;
                x[3 * n + t] = config.alpha_min;
            } else {
                x[t] = rng.uniform(g_lo, g_hi);
                x[n + t] = rng.uniform(b_lo, b_hi);
                x[2 * n + t] = rng.uniform(config.alpha_min, config.alpha_max);
                x[3 * n + t] = rng.uniform(config.alpha_min, config.alpha_max);
            }
        }

        AdamState power_state(2 * static_cast<std::size_t>(n));
        AdamState alpha_state(2 * static_cast<std::size_t>(n));
        std::vector<double> power_grad(2 * n), alpha_grad(2 * n);
        std::vector<double> power_vars(2 * n), alpha_vars(2 * n);

        RestartOutcome run;
        run.best_x = x;
        double loss_prev = std::numeric_limits<double>::infinity();
        double min_loss_seen = std::numeric_limits<double>::infinity();

        for (long epoch = 0; epoch < config.n_epochs; ++epoch) {
            Schedule sched = schedule_from_vector(x, n, kp);
            PenaltyEval eval = penalty_loss(sched, scenario, p_unc, battery, grid, config);

            if (eval.loss < run.best_loss) {
                run.best_loss = eval.loss;
                run.best_x = x;
            }
            // Best-so-far is non-increasing by construction; guard regressions.
            assert(run.best_loss <= min_loss_seen + 1e-12);
            min_loss_seen = std::min(min_loss_seen, run.best_loss);

            const double lr = lr_at(config, epoch);
            std::copy(x.begin(), x.begin() + 2 * n, power_vars.begin());
            std::copy(eval.grad.begin(), eval.grad.begin() + 2 * n, power_grad.begin());
            adam_step(power_state, power_vars, power_grad, lr);

            std::copy(x.begin() + 2 * n, x.end(), alpha_vars.begin());
            std::copy(eval.grad.begin() + 2 * n, eval.grad.end(), alpha_grad.begin());
            adam_step(alpha_state, alpha_vars, alpha_grad, lr);

            for (int t = 0; t < n; ++t) {
                x[t] = std::clamp(power_vars[t], g_lo, g_hi);
                x[n + t] = std::clamp(power_vars[n + t], b_lo, b_hi);
                double ag = std::clamp(alpha_vars[t], config.alpha_min, config.alpha_max);
                double ab = std::clamp(alpha_vars[n + t], config.alpha_min, config.alpha_max);
                apply_alpha_cap(ag, ab, config.alpha_cap, config.alpha_min);
                x[2 * n + t] = ag;
                x[3 * n + t] = ab;
            }

            run.iterations = epoch + 1;
            if ((epoch + 1) % config.check_every == 0) {
                if (std::abs(eval.loss - loss_prev) < config.tol) {
                    run.converged = true;
                    break;
                }
                loss_prev = eval.loss;
                if (config.wall_budget_s > 0.0 && elapsed_s() > config.wall_budget_s)
                    throw Timeout(config.wall_budget_s);
            }
        }

        if (run.best_loss < winner.best_loss) winner = std::move(run);
    }

    OptResult result;
    result.schedule = schedule_from_vector(winner.best_x, n, kp);
    result.trajectory = simulate_schedule(scenario, result.schedule, battery, p_unc);
    result.final_loss = winner.best_loss;
    result.iterations_run = winner.iterations;
    result.converged = winner.converged;
    result.wall_time_s = elapsed_s();
    return result;
}

}  // namespace bessched
