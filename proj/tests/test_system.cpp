#include <doctest.h>

#include <cmath>
#include <vector>

#include "bessched/errors.hpp"
#include "bessched/profiles.hpp"
#include "bessched/rng.hpp"
#include "bessched/system.hpp"

using namespace bessched;

TEST_CASE("soc_step follows the discharge convention, unclamped") {
    CHECK(soc_step(0.8, 0.0, 20000.0, 0.5) == 0.8);
    CHECK(soc_step(0.8, 1000.0, 20000.0, 0.5) == doctest::Approx(0.775));
    CHECK(soc_step(0.5, -1000.0, 20000.0, 0.5) == doctest::Approx(0.525));
    // Large discharge may push below zero; the caller handles it.
    CHECK(soc_step(0.1, 5000.0, 10000.0, 1.0) == doctest::Approx(-0.4));
}

TEST_CASE("balance_residual") {
    CHECK(balance_residual(0, 0, 0, 0, 0) == 0.0);
    CHECK(balance_residual(100, 50, 10, 160, 0) == 0.0);
    CHECK(balance_residual(100, 50, 10, 200, 10) == doctest::Approx(50.0));

    SUBCASE("shifting power between grid and battery leaves the residual fixed") {
        Rng rng(5);
        for (int i = 0; i < 50; ++i) {
            double pg = rng.uniform(0, 5000), pb = rng.uniform(-1000, 1000);
            double pv = rng.uniform(0, 2000), pd = rng.uniform(500, 3000);
            double pu = rng.uniform(-200, 200), x = rng.uniform(-500, 500);
            CHECK(balance_residual(pg + x, pb - x, pv, pd, pu) ==
                  doctest::Approx(balance_residual(pg, pb, pv, pd, pu)).epsilon(1e-12));
        }
    }
}

TEST_CASE("stage_cost charging pays the battery term too") {
    CHECK(stage_cost(0, 0, 0, 0, 0, 0, 0.5) == 0.0);
    CHECK(stage_cost(100, 0, 0.2, 0.05, 1.0, 1.0, 0.5) == doctest::Approx(10.0));
    CHECK(stage_cost(0, -200, 0.0, 0.05, 1.0, 2.0, 0.5) == doctest::Approx(10.0));

    SUBCASE("positively homogeneous in prices") {
        Rng rng(6);
        for (int i = 0; i < 50; ++i) {
            double pg = rng.uniform(0, 5000), pb = rng.uniform(-1000, 1000);
            double cg = rng.uniform(0, 0.5), cb = rng.uniform(0, 0.1);
            double ag = rng.uniform(1, 1000), ab = rng.uniform(1, 1000);
            double base = stage_cost(pg, pb, cg, cb, ag, ab, 0.5);
            CHECK(stage_cost(pg, pb, 2 * cg, 2 * cb, ag, ab, 0.5) == doctest::Approx(2 * base));
        }
    }
}

namespace {

ScenarioData zero_scenario(int n = 48, double dt = 0.5) {
    ScenarioData s;
    s.n_steps = n;
    s.dt_hours = dt;
    s.p_pv.assign(n, 0.0);
    s.p_d.assign(n, 0.0);
    s.c_g.assign(n, 0.0);
    s.c_b.assign(n, 0.0);
    s.label = "zero";
    return s;
}

}  // namespace

TEST_CASE("simulate_schedule on the zero scenario") {
    ScenarioData s = zero_scenario();
    Schedule sched = Schedule::constant_alpha(std::vector<double>(48, 0.0),
                                              std::vector<double>(48, 0.0), 1.0);
    BatteryParams batt;
    Trajectory tr = simulate_schedule(s, sched, batt);
    CHECK(tr.total_cost == 0.0);
    CHECK(tr.end_soc == batt.soc_init);
    for (double r : tr.residual_kw) CHECK(r == 0.0);
    CHECK(tr.soc_violations == 0);
}

TEST_CASE("simulate_schedule counts violations under a linear drawdown") {
    ScenarioData s = zero_scenario();
    Schedule sched = Schedule::constant_alpha(std::vector<double>(48, 0.0),
                                              std::vector<double>(48, 1000.0), 1.0);
    BatteryParams batt;  // capacity 20000, soc_init 0.8
    Trajectory tr = simulate_schedule(s, sched, batt);
    CHECK(tr.end_soc == doctest::Approx(0.8 - 48 * 0.025));
    CHECK(tr.end_soc < 0.0);
    CHECK(tr.soc_violations > 0);
    CHECK(tr.min_soc == doctest::Approx(tr.end_soc));
}

TEST_CASE("simulate_schedule rejects mismatched series") {
    ScenarioData s = zero_scenario();
    Schedule sched = Schedule::constant_alpha(std::vector<double>(47, 0.0),
                                              std::vector<double>(47, 0.0), 1.0);
    BatteryParams batt;
    CHECK_THROWS_AS(simulate_schedule(s, sched, batt), LengthMismatch);
}

TEST_CASE("simulate_schedule totals match a straight-line recomputation") {
    ScenarioData s = synth_scenario(7);
    BatteryParams batt;
    // A hand-shaped feasible schedule: battery covers a slice of demand during
    // the evening block, grid covers the rest.
    Schedule sched;
    sched.p_g.resize(48);
    sched.p_b.resize(48);
    sched.alpha_g.assign(48, 3.0);
    sched.alpha_b.assign(48, 2.0);
    for (int t = 0; t < 48; ++t) {
        double tau = t * 0.5;
        sched.p_b[t] = (tau >= 17.0 && tau < 21.0) ? 400.0 : 0.0;
        sched.p_g[t] = std::max(0.0, s.p_d[t] - s.p_pv[t] - sched.p_b[t]);
    }
    std::vector<double> p_unc(48, 25.0);
    Trajectory tr = simulate_schedule(s, sched, batt, p_unc);

    // Independent spreadsheet-style pass over the same inputs.
    double total = 0.0, soc = batt.soc_init;
    int violations = 0;
    for (int t = 0; t < 48; ++t) {
        total += sched.alpha_g[t] * s.c_g[t] * sched.p_g[t] * 0.5 +
                 sched.alpha_b[t] * s.c_b[t] * std::abs(sched.p_b[t]) * 0.5;
        double expect_res = (s.p_d[t] + 25.0) - (sched.p_g[t] + sched.p_b[t] + s.p_pv[t]);
        CHECK(tr.residual_kw[t] == doctest::Approx(expect_res).epsilon(1e-12));
        soc = soc - 0.5 * sched.p_b[t] / batt.capacity_kwh;
        CHECK(tr.soc[t + 1] == doctest::Approx(soc).epsilon(1e-12));
        if (soc < batt.soc_min || soc > batt.soc_max) ++violations;
    }
    CHECK(tr.total_cost == doctest::Approx(total).epsilon(1e-9));
    CHECK(tr.soc_violations == violations);
    CHECK(tr.end_soc == doctest::Approx(soc).epsilon(1e-12));
}

TEST_CASE("SOC telescopes to the closed-form drawdown") {
    ScenarioData s = synth_scenario(3);
    BatteryParams batt;
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        Schedule sched;
        sched.p_g.resize(48);
        sched.p_b.resize(48);
        sched.alpha_g.assign(48, 1.0);
        sched.alpha_b.assign(48, 1.0);
        double sum_pb = 0.0;
        for (int t = 0; t < 48; ++t) {
            sched.p_g[t] = rng.uniform(0, 5000);
            sched.p_b[t] = rng.uniform(-1000, 1000);
            sum_pb += sched.p_b[t];
        }
        Trajectory tr = simulate_schedule(s, sched, batt);
        double closed_form = batt.soc_init - (s.dt_hours / batt.capacity_kwh) * sum_pb;
        CHECK(std::abs(tr.soc[48] - closed_form) <= 1e-9);
    }
}

TEST_CASE("total_cost equals an independently recomputed stage sum") {
    ScenarioData s = synth_scenario(4);
    BatteryParams batt;
    Rng rng(18);
    for (int i = 0; i < 100; ++i) {
        Schedule sched;
        sched.p_g.resize(48);
        sched.p_b.resize(48);
        sched.alpha_g.resize(48);
        sched.alpha_b.resize(48);
        for (int t = 0; t < 48; ++t) {
            sched.p_g[t] = rng.uniform(0, 5000);
            sched.p_b[t] = rng.uniform(-1000, 1000);
            sched.alpha_g[t] = rng.uniform(1, 1000);
            sched.alpha_b[t] = rng.uniform(1, 1000);
        }
        Trajectory tr = simulate_schedule(s, sched, batt);
        double total = 0.0;
        for (int t = 0; t < 48; ++t)
            total += sched.alpha_g[t] * s.c_g[t] * sched.p_g[t] * s.dt_hours +
                     sched.alpha_b[t] * s.c_b[t] * std::abs(sched.p_b[t]) * s.dt_hours;
        CHECK(tr.total_cost == doctest::Approx(total).epsilon(1e-9));
    }
}

TEST_CASE("parameter validation") {
    BatteryParams b;
    b.soc_min = 0.9;
    CHECK_THROWS_AS(b.validate(), ValidationError);
    b = BatteryParams{};
    b.p_b_min = 10.0;
    CHECK_THROWS_AS(b.validate(), ValidationError);
    GridParams g;
    g.p_g_min = 10.0;
    g.p_g_max = 0.0;
    CHECK_THROWS_AS(g.validate(), ValidationError);
}
