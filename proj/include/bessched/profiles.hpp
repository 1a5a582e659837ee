#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bessched {

// One day of scheduling inputs. Units are fixed repo-wide: power in kW,
// energy in kWh, prices in $/kWh, SOC dimensionless in [0,1].
struct ScenarioData {
    int n_steps = 0;
    double dt_hours = 0.0;
    std::vector<double> p_pv;  // PV output, kW
    std::vector<double> p_d;   // demand, kW
    std::vector<double> c_g;   // grid tariff, $/kWh
    std::vector<double> c_b;   // battery operating cost, $/kWh
    std::string label;

    // Throws ValidationError when any series is malformed: wrong length,
    // negative or non-finite entries, or n_steps * dt_hours != 24 h.
    void validate() const;
};

// CSV schema (one header row): t_index,p_pv_kw,p_d_kw,c_g_per_kwh,c_b_per_kwh
// with t_index ascending 0..n_steps-1.
ScenarioData load_scenario_csv(const std::string& path, double dt_hours);
void emit_scenario_csv(const ScenarioData& s, const std::string& path);

ScenarioData scale_profile(const ScenarioData& s, double power_factor, double price_factor);

// Deterministic synthetic day: half-sine PV bump (zero in the first and last
// six hours), double-peak demand in [500, 3000] kW, piecewise tariff with an
// elevated evening block in [0.05, 0.50] $/kWh, constant battery cost.
ScenarioData synth_scenario(std::uint64_t seed, int n_steps = 48, double dt_hours = 0.5);

}  // namespace bessched
