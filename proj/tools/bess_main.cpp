// Command-line front end: synthetic scenario emission, the gradient solver,
// SAC training/evaluation, paired comparisons and the tiny-horizon oracle.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "bessched/config.hpp"
#include "bessched/errors.hpp"
#include "bessched/harness.hpp"

using namespace bessched;

namespace {

struct GlobalArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out_dir = "out";
};

KvConfig load_config(const GlobalArgs& g) {
    KvConfig kv = g.config_path.empty() ? KvConfig{} : KvConfig::from_file(g.config_path);
    if (g.seed_set) kv.set("seed", std::to_string(g.seed));
    return kv;
}

ScenarioData scenario_from_config(const KvConfig& kv) {
    std::string csv = kv.get_str("scenario.csv", "");
    double dt = kv.get_double("scenario.dt_hours", 0.5);
    ScenarioData s = csv.empty()
                         ? synth_scenario(static_cast<std::uint64_t>(
                                              kv.get_long("scenario.synth_seed", 7)),
                                          static_cast<int>(kv.get_long("scenario.n_steps", 48)), dt)
                         : load_scenario_csv(csv, dt);
    return scale_profile(s, kv.get_double("scenario.power_factor", 1.0),
                         kv.get_double("scenario.price_factor", 1.0));
}

EnvFactory make_factory(const ScenarioData& scenario, const DistSpec& spec,
                        const BatteryParams& battery, const GridParams& grid,
                        const EnvConfig& env_cfg) {
    return [scenario, spec, battery, grid, env_cfg](std::uint64_t seed) {
        Rng r(seed);
        UncertaintyDraw d = draw_scenario_uncertainty(scenario, spec, r);
        return BessEnv(scenario, d, battery, grid, env_cfg);
    };
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Day-ahead battery and grid set-point scheduling toolkit"};
    app.require_subcommand(1);

    GlobalArgs g;
    app.add_option("--config", g.config_path, "flat key=value config file");
    auto* seed_opt = app.add_option("--seed", g.seed, "base random seed");
    app.add_option("--out", g.out_dir, "output directory");

    // synth
    auto* synth = app.add_subcommand("synth", "emit a synthetic scenario CSV");
    std::uint64_t synth_seed = 7;
    int synth_steps = 48;
    double synth_dt = 0.5;
    std::string synth_out = "scenario.csv";
    synth->add_option("--synth-seed", synth_seed, "generator seed");
    synth->add_option("--steps", synth_steps, "steps per day");
    synth->add_option("--dt", synth_dt, "hours per step");
    synth->add_option("--file", synth_out, "output CSV path");

    // optimize
    auto* optimize = app.add_subcommand("optimize", "run the gradient solver");

    // train
    auto* train_cmd = app.add_subcommand("train", "train the SAC agent");
    std::string checkpoint_out = "checkpoint.json";
    std::string trace_path;
    train_cmd->add_option("--checkpoint", checkpoint_out, "checkpoint output path");
    train_cmd->add_option("--trace", trace_path, "JSON-lines transition trace (first episode env)");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "evaluate a checkpoint");
    std::string checkpoint_in = "checkpoint.json";
    int eval_episodes = 20;
    eval_cmd->add_option("--checkpoint", checkpoint_in, "checkpoint to load")->required();
    eval_cmd->add_option("--episodes", eval_episodes, "evaluation episodes");

    // compare
    auto* compare = app.add_subcommand("compare", "paired gradient-vs-SAC comparison");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "tiny-horizon exhaustive enumeration");
    double oracle_res = 100.0;
    oracle_cmd->add_option("--resolution", oracle_res, "grid power resolution, kW");

    for (CLI::App* sub : {synth, optimize, train_cmd, eval_cmd, compare, oracle_cmd})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);
    g.seed_set = seed_opt->count() > 0;

    try {
        KvConfig kv = load_config(g);
        std::filesystem::create_directories(g.out_dir);

        if (*synth) {
            ScenarioData s = synth_scenario(synth_seed, synth_steps, synth_dt);
            emit_scenario_csv(s, synth_out);
            std::cout << "wrote " << synth_out << " (" << s.n_steps << " steps)\n";
        } else if (*optimize) {
            ScenarioData scenario = scenario_from_config(kv);
            DistSpec spec = dist_spec_from(kv);
            Rng rng(static_cast<std::uint64_t>(kv.get_long("seed", 0)));
            UncertaintyDraw draw = draw_scenario_uncertainty(scenario, spec, rng);
            ScenarioData effective = perturbed_scenario(scenario, draw);
            OptResult res = optimize_schedule(effective, draw.p_unc, battery_from(kv),
                                              grid_from(kv), grad_config_from(kv), rng);
            auto out_path = std::filesystem::path(g.out_dir) / "optimize_trajectory.json";
            write_trajectory_json(out_path.string(), res.trajectory, res.schedule, scenario.label);
            std::printf("converged=%d iterations=%ld final_loss=%.6g total_cost=%.2f end_soc=%.3f "
                        "wall_s=%.2f\n",
                        res.converged ? 1 : 0, res.iterations_run, res.final_loss,
                        res.trajectory.total_cost, res.trajectory.end_soc, res.wall_time_s);
            std::cout << "trajectory: " << out_path.string() << '\n';
        } else if (*train_cmd) {
            ScenarioData scenario = scenario_from_config(kv);
            DistSpec spec = dist_spec_from(kv);
            SacConfig sac_cfg = sac_config_from(kv);
            if (g.seed_set) sac_cfg.seed = g.seed;
            EnvFactory factory =
                make_factory(scenario, spec, battery_from(kv), grid_from(kv), env_config_from(kv));
            TrainResult result = train(factory, sac_cfg);
            save_checkpoint(checkpoint_out, result.agent, sac_cfg);
            auto curve_path = std::filesystem::path(g.out_dir) / "learning_curve.csv";
            write_learning_curve_csv(curve_path.string(), result.curve);
            if (!trace_path.empty()) {
                std::ofstream trace(trace_path);
                BessEnv env = factory(sac_cfg.seed);
                env.set_trace(&trace);
                Policy policy = [&result, &env](const EnvState& s) {
                    std::vector<double> u = policy_mean_action(result.agent.actor, s.obs);
                    return scale_action({u[0], u[1]}, env.grid(), env.battery());
                };
                rollout(policy, env);
            }
            const EvalPoint& last = result.curve.back();
            std::printf("trained %ld steps; final eval mean reward %.3f, mean cost %.2f, "
                        "end SOC %.3f\n",
                        last.env_step, last.mean_reward, last.mean_cost_usd, last.mean_end_soc);
            std::cout << "checkpoint: " << checkpoint_out << "\ncurve: " << curve_path.string()
                      << '\n';
        } else if (*eval_cmd) {
            ScenarioData scenario = scenario_from_config(kv);
            DistSpec spec = dist_spec_from(kv);
            AgentParams agent = load_checkpoint(checkpoint_in);
            Rng rng(static_cast<std::uint64_t>(kv.get_long("seed", 0)) ^ 0xe5a1ull);
            EnvFactory factory =
                make_factory(scenario, spec, battery_from(kv), grid_from(kv), env_config_from(kv));
            EvalReport report = evaluate(agent, factory, eval_episodes, rng);
            nlohmann::json j = {{"mean_reward", report.mean_reward},
                                {"mean_cost_usd", report.mean_cost_usd},
                                {"mean_end_soc", report.mean_end_soc},
                                {"episodes", nlohmann::json::array()}};
            for (const EvalEpisode& e : report.episodes)
                j["episodes"].push_back({{"reward", e.total_reward},
                                         {"cost_usd", e.total_cost_usd},
                                         {"min_soc", e.min_soc},
                                         {"end_soc", e.end_soc},
                                         {"soc_violations", e.soc_violations}});
            std::cout << j.dump(2) << '\n';
        } else if (*compare) {
            ExperimentConfig cfg = experiment_from(kv);
            cfg.out_dir = g.out_dir;
            if (g.seed_set) cfg.seed = g.seed;
            Report report = run_comparison(cfg);
            const std::filesystem::path dir(cfg.out_dir);
            emit_report(report, (dir / "report.json").string(), ReportFormat::Json);
            emit_report(report, (dir / "report.csv").string(), ReportFormat::Csv);
            emit_report(report, (dir / "report.md").string(), ReportFormat::Markdown);
            std::cout << "wrote " << (dir / "report.{json,csv,md}").string() << " with "
                      << report.records.size() << " records\n";
        } else if (*oracle_cmd) {
            ScenarioData scenario = scenario_from_config(kv);
            OracleResult res =
                brute_force_oracle(scenario, battery_from(kv), grid_from(kv), oracle_res);
            nlohmann::json j = {{"best_cost", res.best_cost},
                                {"p_g", res.schedule.p_g},
                                {"p_b", res.schedule.p_b},
                                {"end_soc", res.trajectory.end_soc}};
            std::cout << j.dump(2) << '\n';
        }
        return 0;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
