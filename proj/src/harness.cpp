#include "bessched/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "bessched/errors.hpp"

namespace bessched {

namespace {

constexpr double kSocSlack = 1e-9;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace

std::uint64_t hash_series(const std::vector<double>& series) {
    return fnv1a(1469598103934665603ull, series.data(), series.size() * sizeof(double));
}

std::uint64_t hash_draw(const UncertaintyDraw& draw) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto* s : {&draw.u_pv, &draw.u_d, &draw.u_cg, &draw.u_cb, &draw.p_unc})
        h = fnv1a(h, s->data(), s->size() * sizeof(double));
    return h;
}

std::uint64_t hash_scenario(const ScenarioData& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto* v : {&s.p_pv, &s.p_d, &s.c_g, &s.c_b})
        h = fnv1a(h, v->data(), v->size() * sizeof(double));
    h = fnv1a(h, &s.dt_hours, sizeof(double));
    return h;
}

OracleResult brute_force_oracle(const ScenarioData& scenario, const BatteryParams& battery,
                                const GridParams& grid, double grid_resolution_kw,
                                double alpha_fixed) {
    scenario.validate();
    battery.validate();
    grid.validate();
    if (scenario.n_steps > 6) throw ValidationError("oracle horizon limited to 6 steps");
    if (!(grid_resolution_kw > 0.0)) throw ValidationError("grid resolution must be > 0");

    const int n = scenario.n_steps;
    std::vector<double> grid_points;
    for (double v = grid.p_g_min; v < grid.p_g_max + 1e-9; v += grid_resolution_kw)
        grid_points.push_back(std::min(v, grid.p_g_max));
    if (grid_points.back() < grid.p_g_max - 1e-9) grid_points.push_back(grid.p_g_max);

    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<double> best_pg;

    std::vector<double> pg(n, 0.0);
    std::vector<double> soc(n + 1, battery.soc_init);
    double cost_so_far = 0.0;

    // Depth-first enumeration with an admissible prune (stage costs are >= 0).
    std::function<void(int, double)> descend = [&](int t, double partial_cost) {
        if (partial_cost >= best_cost) return;
        if (t == n) {
            best_cost = partial_cost;
            best_pg = pg;
            return;
        }
        const double net = scenario.p_d[t] - scenario.p_pv[t];
        for (double g : grid_points) {
            const double b = net - g;
            if (b < battery.p_b_min - 1e-9 || b > battery.p_b_max + 1e-9) continue;
            const double soc_next = soc_step(soc[t], b, battery.capacity_kwh, scenario.dt_hours);
            if (soc_next < battery.soc_min - kSocSlack || soc_next > battery.soc_max + kSocSlack)
                continue;
            const double c = stage_cost(g, b, scenario.c_g[t], scenario.c_b[t], alpha_fixed,
                                        alpha_fixed, scenario.dt_hours);
            pg[t] = g;
            soc[t + 1] = soc_next;
            descend(t + 1, partial_cost + c);
        }
    };
    descend(0, cost_so_far);

    if (!std::isfinite(best_cost)) throw NoFeasiblePoint();

    std::vector<double> pb(n);
    for (int t = 0; t < n; ++t) pb[t] = scenario.p_d[t] - scenario.p_pv[t] - best_pg[t];
    OracleResult out;
    out.best_cost = best_cost;
    out.schedule = Schedule::constant_alpha(best_pg, pb, alpha_fixed);
    out.trajectory = simulate_schedule(scenario, out.schedule, battery);
    return out;
}

void write_trajectory_json(const std::string& path, const Trajectory& trajectory,
                           const Schedule& schedule, const std::string& label) {
    nlohmann::json j = {
        {"label", label},
        {"p_g", schedule.p_g},
        {"p_b", schedule.p_b},
        {"alpha_g", schedule.alpha_g},
        {"alpha_b", schedule.alpha_b},
        {"soc", trajectory.soc},
        {"residual_kw", trajectory.residual_kw},
        {"stage_cost", trajectory.stage_cost},
        {"total_cost", trajectory.total_cost},
        {"end_soc", trajectory.end_soc},
        {"min_soc", trajectory.min_soc},
        {"soc_violations", trajectory.soc_violations},
    };
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trajectory: " + path);
    out << j.dump(2) << '\n';
    if (!out) throw IoError("short write to " + path);
}

namespace {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t family, std::uint64_t repeat,
                       std::uint64_t salt) {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint64_t v : {base, family, repeat, salt}) h = fnv1a(h, &v, sizeof(v));
    return h;
}

RunRecord grad_run(const ExperimentConfig& cfg, const ScenarioData& scenario,
                   const UncertaintyDraw& draw, const std::string& family, int repeat) {
    ScenarioData effective = perturbed_scenario(scenario, draw);
    Rng rng(mix_seed(cfg.seed, std::hash<std::string>{}(family), repeat, 0x67726164));
    const auto t0 = std::chrono::steady_clock::now();
    OptResult res = optimize_schedule(effective, draw.p_unc, cfg.battery, cfg.grid, cfg.grad, rng);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Report the executed schedule's plain energy cost so solvers compare on
    // the same scale regardless of their internal weighting.
    Schedule flat = Schedule::constant_alpha(res.schedule.p_g, res.schedule.p_b, 1.0);
    Trajectory costed = simulate_schedule(effective, flat, cfg.battery, draw.p_unc);

    RunRecord rec;
    rec.solver = "grad";
    rec.family = family;
    rec.repeat = repeat;
    rec.label = scenario.label;
    rec.total_cost_usd = costed.total_cost;
    rec.end_soc = costed.end_soc;
    rec.min_soc = costed.min_soc;
    rec.soc_violations = costed.soc_violations;
    rec.iterations = res.iterations_run;
    rec.converged = res.converged;
    rec.wall_time_s = wall;
    rec.scenario_hash = hash_scenario(scenario);
    rec.draw_hash = hash_draw(draw);
    rec.trajectory_file = family + "_grad_r" + std::to_string(repeat) + "_trajectory.json";
    write_trajectory_json((std::filesystem::path(cfg.out_dir) / rec.trajectory_file).string(),
                          costed, res.schedule, rec.label);
    return rec;
}

RunRecord sac_run(const ExperimentConfig& cfg, const ScenarioData& scenario, const DistSpec& spec,
                  const UncertaintyDraw& draw, const std::string& family, int repeat) {
    EnvFactory factory = [&cfg, &scenario, spec](std::uint64_t seed) {
        Rng r(seed);
        UncertaintyDraw d = draw_scenario_uncertainty(scenario, spec, r);
        return BessEnv(scenario, d, cfg.battery, cfg.grid, cfg.env);
    };

    SacConfig sac_cfg = cfg.sac;
    sac_cfg.seed = mix_seed(cfg.seed, std::hash<std::string>{}(family), repeat, 0x736163);

    const auto t0 = std::chrono::steady_clock::now();
    TrainResult trained = train(factory, sac_cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // Deterministic evaluation on the pinned draw both solvers share.
    BessEnv env(scenario, draw, cfg.battery, cfg.grid, cfg.env);
    Policy policy = [&trained, &env](const EnvState& s) {
        std::vector<double> u = policy_mean_action(trained.agent.actor, s.obs);
        return scale_action({u[0], u[1]}, env.grid(), env.battery());
    };
    RolloutResult rolled = rollout(policy, env);

    RunRecord rec;
    rec.solver = "sac";
    rec.family = family;
    rec.repeat = repeat;
    rec.label = scenario.label;
    rec.total_cost_usd = rolled.trajectory.total_cost;
    rec.end_soc = rolled.trajectory.end_soc;
    rec.min_soc = rolled.trajectory.min_soc;
    rec.soc_violations = rolled.trajectory.soc_violations;
    rec.iterations = sac_cfg.total_steps;
    rec.converged = true;
    rec.wall_time_s = wall;
    rec.scenario_hash = hash_scenario(scenario);
    rec.draw_hash = hash_draw(draw);
    rec.trajectory_file = family + "_sac_r" + std::to_string(repeat) + "_trajectory.json";
    rec.curve_file = family + "_sac_r" + std::to_string(repeat) + "_curve.csv";

    Schedule executed;
    executed.p_g.reserve(rolled.transitions.size());
    executed.p_b.reserve(rolled.transitions.size());
    for (const Transition& tr : rolled.transitions) {
        executed.p_g.push_back(tr.action_executed[0]);
        executed.p_b.push_back(tr.action_executed[1]);
    }
    executed.alpha_g.assign(executed.p_g.size(), 1.0);
    executed.alpha_b.assign(executed.p_g.size(), 1.0);
    const std::filesystem::path out_dir(cfg.out_dir);
    write_trajectory_json((out_dir / rec.trajectory_file).string(), rolled.trajectory, executed,
                          rec.label);
    write_learning_curve_csv((out_dir / rec.curve_file).string(), trained.curve);
    return rec;
}

}  // namespace

Report run_comparison(const ExperimentConfig& cfg) {
    if (cfg.repeats < 1) throw ValidationError("repeat count must be >= 1");
    ScenarioData scenario = cfg.scenario_csv.empty()
                                ? synth_scenario(cfg.synth_seed, cfg.n_steps, cfg.dt_hours)
                                : load_scenario_csv(cfg.scenario_csv, cfg.dt_hours);
    scenario = scale_profile(scenario, cfg.power_factor, cfg.price_factor);

    std::filesystem::create_directories(cfg.out_dir);

    Report report;
    for (std::size_t fi = 0; fi < cfg.families.size(); ++fi) {
        const DistFamily family = cfg.families[fi];
        const std::string fname = family_name(family);
        const DistSpec spec = DistSpec::defaults(family);
        for (int repeat = 0; repeat < cfg.repeats; ++repeat) {
            // One draw per repeat, shared by both solvers.
            Rng draw_rng(mix_seed(cfg.seed, fi, repeat, 0x64726177));
            UncertaintyDraw draw = draw_scenario_uncertainty(scenario, spec, draw_rng);

            try {
                if (cfg.solvers != SolverChoice::Sac)
                    report.records.push_back(grad_run(cfg, scenario, draw, fname, repeat));
                if (cfg.solvers != SolverChoice::Grad)
                    report.records.push_back(sac_run(cfg, scenario, spec, draw, fname, repeat));
            } catch (const SolverError& e) {
                // Keep what already succeeded; surface the failure.
                std::cerr << "solver failure on " << fname << " repeat " << repeat << ": "
                          << e.what() << '\n';
                emit_report(report, (std::filesystem::path(cfg.out_dir) / "report.partial.json").string(),
                            ReportFormat::Json);
                throw;
            }
        }
    }
    return report;
}

namespace {

nlohmann::json record_to_json(const RunRecord& r) {
    return {
        {"solver", r.solver},
        {"family", r.family},
        {"repeat", r.repeat},
        {"label", r.label},
        {"total_cost_usd", r.total_cost_usd},
        {"end_soc", r.end_soc},
        {"min_soc", r.min_soc},
        {"soc_violations", r.soc_violations},
        {"iterations", r.iterations},
        {"converged", r.converged},
        {"wall_time_s", r.wall_time_s},
        {"scenario_hash", r.scenario_hash},
        {"draw_hash", r.draw_hash},
        {"trajectory_file", r.trajectory_file},
        {"curve_file", r.curve_file},
    };
}

RunRecord record_from_json(const nlohmann::json& j) {
    RunRecord r;
    r.solver = j.at("solver").get<std::string>();
    r.family = j.at("family").get<std::string>();
    r.repeat = j.at("repeat").get<int>();
    r.label = j.at("label").get<std::string>();
    r.total_cost_usd = j.at("total_cost_usd").get<double>();
    r.end_soc = j.at("end_soc").get<double>();
    r.min_soc = j.at("min_soc").get<double>();
    r.soc_violations = j.at("soc_violations").get<int>();
    r.iterations = j.at("iterations").get<long>();
    r.converged = j.at("converged").get<bool>();
    r.wall_time_s = j.at("wall_time_s").get<double>();
    r.scenario_hash = j.at("scenario_hash").get<std::uint64_t>();
    r.draw_hash = j.at("draw_hash").get<std::uint64_t>();
    r.trajectory_file = j.at("trajectory_file").get<std::string>();
    r.curve_file = j.at("curve_file").get<std::string>();
    return r;
}

}  // namespace

void emit_report(const Report& report, const std::string& path, ReportFormat format) {
    if (report.records.empty()) throw ValidationError("refusing to emit an empty report");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path);

    if (format == ReportFormat::Json) {
        nlohmann::json j = nlohmann::json::array();
        for (const RunRecord& r : report.records) j.push_back(record_to_json(r));
        out << j.dump(2) << '\n';
    } else if (format == ReportFormat::Csv) {
        out << "solver,family,repeat,label,total_cost_usd,end_soc,min_soc,soc_violations,"
               "iterations,converged,wall_time_s,scenario_hash,draw_hash,trajectory_file,"
               "curve_file\n";
        char buf[512];
        for (const RunRecord& r : report.records) {
            std::snprintf(buf, sizeof(buf),
                          "%s,%s,%d,%s,%.6f,%.6f,%.6f,%d,%ld,%d,%.6f,%llu,%llu,%s,%s",
                          r.solver.c_str(), r.family.c_str(), r.repeat, r.label.c_str(),
                          r.total_cost_usd, r.end_soc, r.min_soc, r.soc_violations, r.iterations,
                          r.converged ? 1 : 0, r.wall_time_s,
                          static_cast<unsigned long long>(r.scenario_hash),
                          static_cast<unsigned long long>(r.draw_hash), r.trajectory_file.c_str(),
                          r.curve_file.c_str());
            out << buf << '\n';
        }
    } else {
        // Two metrics per family and solver: end SOC and wall time.
        std::vector<std::string> families;
        for (const RunRecord& r : report.records)
            if (std::find(families.begin(), families.end(), r.family) == families.end())
                families.push_back(r.family);
        out << "| solver | repeat |";
        for (const auto& f : families) out << ' ' << f << " end SOC | " << f << " time (s) |";
        out << '\n';
        out << "|---|---|";
        for (std::size_t i = 0; i < families.size(); ++i) out << "---|---|";
        out << '\n';
        for (const char* solver : {"grad", "sac"}) {
            std::vector<int> repeats;
            for (const RunRecord& r : report.records)
                if (r.solver == solver &&
                    std::find(repeats.begin(), repeats.end(), r.repeat) == repeats.end())
                    repeats.push_back(r.repeat);
            for (int rep : repeats) {
                out << "| " << solver << " | " << rep << " |";
                for (const auto& f : families) {
                    const RunRecord* found = nullptr;
                    for (const RunRecord& r : report.records)
                        if (r.solver == solver && r.repeat == rep && r.family == f) found = &r;
                    if (found) {
                        char buf[96];
                        std::snprintf(buf, sizeof(buf), " %.3f | %.2f |", found->end_soc,
                                      found->wall_time_s);
                        out << buf;
                    } else {
                        out << " - | - |";
                    }
                }
                out << '\n';
            }
        }
    }
    if (!out) throw IoError("short write to " + path);
}

Report load_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open report: " + path);
    nlohmann::json j;
    in >> j;
    Report report;
    for (const auto& item : j) report.records.push_back(record_from_json(item));
    return report;
}

ExperimentConfig experiment_from(const KvConfig& kv) {
    ExperimentConfig cfg;
    cfg.scenario_csv = kv.get_str("scenario.csv", cfg.scenario_csv);
    cfg.synth_seed = static_cast<std::uint64_t>(
        kv.get_long("scenario.synth_seed", static_cast<long>(cfg.synth_seed)));
    cfg.n_steps = static_cast<int>(kv.get_long("scenario.n_steps", cfg.n_steps));
    cfg.dt_hours = kv.get_double("scenario.dt_hours", cfg.dt_hours);
    cfg.power_factor = kv.get_double("scenario.power_factor", cfg.power_factor);
    cfg.price_factor = kv.get_double("scenario.price_factor", cfg.price_factor);

    std::string fams = kv.get_str("compare.families", "all");
    if (fams != "all") {
        cfg.families.clear();
        std::stringstream ss(fams);
        std::string name;
        while (std::getline(ss, name, ','))
            if (!name.empty()) cfg.families.push_back(family_from_name(name));
        if (cfg.families.empty()) throw ValidationError("compare.families selects nothing");
    }
    std::string solver = kv.get_str("compare.solvers", "both");
    if (solver == "grad") cfg.solvers = SolverChoice::Grad;
    else if (solver == "sac") cfg.solvers = SolverChoice::Sac;
    else if (solver == "both") cfg.solvers = SolverChoice::Both;
    else throw ValidationError("compare.solvers must be grad, sac or both");
    cfg.repeats = static_cast<int>(kv.get_long("compare.repeats", cfg.repeats));

    cfg.battery = battery_from(kv);
    cfg.grid = grid_from(kv);
    cfg.grad = grad_config_from(kv);
    cfg.env = env_config_from(kv);
    cfg.sac = sac_config_from(kv);
    cfg.out_dir = kv.get_str("out.dir", cfg.out_dir);
    cfg.seed = static_cast<std::uint64_t>(kv.get_long("seed", static_cast<long>(cfg.seed)));
    return cfg;
}

}  // namespace bessched
