#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "bessched/errors.hpp"
#include "bessched/profiles.hpp"
#include "bessched/rng.hpp"

using namespace bessched;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

std::string write_csv(const std::string& name, int rows, int demand_override_row = -1,
                      const std::string& override_value = "") {
    std::string path = temp_path(name);
    std::ofstream out(path);
    out << "t_index,p_pv_kw,p_d_kw,c_g_per_kwh,c_b_per_kwh\n";
    for (int t = 0; t < rows; ++t) {
        std::string demand = std::to_string(1000.0 + t);
        if (t == demand_override_row) demand = override_value;
        out << t << ",12.5," << demand << ",0.25,0.05\n";
    }
    return path;
}

}  // namespace

TEST_CASE("load_scenario_csv reads a well-formed 48-row file") {
    auto path = write_csv("scenario_ok.csv", 48);
    ScenarioData s = load_scenario_csv(path, 0.5);
    CHECK(s.n_steps == 48);
    CHECK(s.dt_hours == 0.5);
    CHECK(s.p_d[0] == doctest::Approx(1000.0));
    CHECK(s.p_d[47] == doctest::Approx(1047.0));
    CHECK(s.c_g[10] == doctest::Approx(0.25));
    s.validate();
}

TEST_CASE("load_scenario_csv rejects a negative demand cell with its location") {
    auto path = write_csv("scenario_neg.csv", 48, 3, "-5");
    try {
        load_scenario_csv(path, 0.5);
        FAIL("expected NegativeValue");
    } catch (const NegativeValue& e) {
        CHECK(e.row == 3);
        CHECK(e.column == "p_d");
    }
}

TEST_CASE("load_scenario_csv rejects horizon mismatches") {
    auto path = write_csv("scenario_short.csv", 24);
    CHECK_THROWS_AS(load_scenario_csv(path, 0.5), HorizonMismatch);
}

TEST_CASE("load_scenario_csv rejects missing columns and junk cells") {
    std::string path = temp_path("scenario_missing.csv");
    {
        std::ofstream out(path);
        out << "t_index,p_pv_kw,p_d_kw,c_g_per_kwh\n0,0,1,0.2\n";
    }
    CHECK_THROWS_AS(load_scenario_csv(path, 0.5), MissingColumn);

    auto junk = write_csv("scenario_junk.csv", 48, 5, "abc");
    try {
        load_scenario_csv(junk, 0.5);
        FAIL("expected NonNumericCell");
    } catch (const NonNumericCell& e) {
        CHECK(e.row == 5);
        CHECK(e.column == "p_d");
    }

    auto nan_cell = write_csv("scenario_nan.csv", 48, 7, "nan");
    CHECK_THROWS_AS(load_scenario_csv(nan_cell, 0.5), NonNumericCell);
}

TEST_CASE("load_scenario_csv enforces ascending t_index") {
    std::string path = temp_path("scenario_tindex.csv");
    {
        std::ofstream out(path);
        out << "t_index,p_pv_kw,p_d_kw,c_g_per_kwh,c_b_per_kwh\n";
        out << "0,0,1,0.2,0.05\n2,0,1,0.2,0.05\n";
    }
    CHECK_THROWS_AS(load_scenario_csv(path, 12.0), ValidationError);
}

TEST_CASE("scale_profile") {
    ScenarioData s = synth_scenario(11);

    SUBCASE("identity factors leave the scenario untouched") {
        ScenarioData t = scale_profile(s, 1.0, 1.0);
        CHECK(t.p_d == s.p_d);
        CHECK(t.c_g == s.c_g);
    }
    SUBCASE("power factor scales the power series only") {
        ScenarioData t = scale_profile(s, 0.001, 1.0);
        CHECK(t.p_d[0] == doctest::Approx(s.p_d[0] * 0.001));
        CHECK(t.p_pv[20] == doctest::Approx(s.p_pv[20] * 0.001));
        CHECK(t.c_g == s.c_g);
    }
    SUBCASE("non-positive factors are rejected") {
        CHECK_THROWS_AS(scale_profile(s, 0.0, 1.0), NonPositiveFactor);
        CHECK_THROWS_AS(scale_profile(s, 1.0, -2.0), NonPositiveFactor);
    }
    SUBCASE("scaling up then down restores the series") {
        ScenarioData t = scale_profile(scale_profile(s, 3.0, 7.0), 1.0 / 3.0, 1.0 / 7.0);
        for (int i = 0; i < s.n_steps; ++i) {
            CHECK(t.p_d[i] == doctest::Approx(s.p_d[i]).epsilon(1e-12));
            CHECK(t.c_g[i] == doctest::Approx(s.c_g[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("synth_scenario is deterministic and respects its documented shape") {
    ScenarioData a = synth_scenario(7);
    ScenarioData b = synth_scenario(7);
    CHECK(a.p_pv == b.p_pv);
    CHECK(a.p_d == b.p_d);
    CHECK(a.c_g == b.c_g);
    CHECK(a.c_b == b.c_b);

    for (std::uint64_t seed : {0ull, 1ull, 7ull, 42ull, 12345ull})
        CHECK(synth_scenario(seed).p_pv[0] == 0.0);

    double d_min = 1e18, pv_max = 0.0;
    for (int t = 0; t < a.n_steps; ++t) {
        d_min = std::min(d_min, a.p_d[t]);
        pv_max = std::max(pv_max, a.p_pv[t]);
    }
    CHECK(d_min >= 500.0);
    CHECK(pv_max <= 2000.0);
    for (double c : a.c_g) {
        CHECK(c >= 0.05);
        CHECK(c <= 0.50);
    }

    CHECK_THROWS_AS(synth_scenario(7, 24, 0.5), HorizonMismatch);
}

TEST_CASE("synth_scenario satisfies every scenario invariant across seeds") {
    Rng rng(99);
    for (int i = 0; i < 100; ++i) {
        ScenarioData s = synth_scenario(rng.split());
        CHECK_NOTHROW(s.validate());
    }
}

TEST_CASE("CSV round-trip reproduces the scenario up to formatting") {
    ScenarioData s = synth_scenario(21);
    auto p1 = temp_path("roundtrip1.csv");
    auto p2 = temp_path("roundtrip2.csv");
    emit_scenario_csv(s, p1);
    ScenarioData r = load_scenario_csv(p1, s.dt_hours);
    for (int t = 0; t < s.n_steps; ++t) {
        CHECK(std::abs(r.p_pv[t] - s.p_pv[t]) <= 5e-7);
        CHECK(std::abs(r.p_d[t] - s.p_d[t]) <= 5e-7);
        CHECK(std::abs(r.c_g[t] - s.c_g[t]) <= 5e-7);
        CHECK(std::abs(r.c_b[t] - s.c_b[t]) <= 5e-7);
    }

    // A second emission of the re-loaded data is byte-identical.
    emit_scenario_csv(r, p2);
    std::ifstream f1(p1), f2(p2);
    std::string s1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string s2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(s1 == s2);
}
