#include "bessched/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bessched/errors.hpp"
#include "bessched/rng.hpp"

namespace bessched {

namespace {

constexpr double kHorizonHours = 24.0;
constexpr double kHorizonTol = 1e-9;

// Short series names used in error reports; the CSV headers carry units.
const char* kSeriesNames[4] = {"p_pv", "p_d", "c_g", "c_b"};
const char* kCsvHeaders[5] = {"t_index", "p_pv_kw", "p_d_kw", "c_g_per_kwh", "c_b_per_kwh"};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ' || cell.back() == '\t'))
            cell.pop_back();
        std::size_t i = 0;
        while (i < cell.size() && (cell[i] == ' ' || cell[i] == '\t')) ++i;
        out.push_back(cell.substr(i));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_cell(const std::string& cell, int row, const std::string& col) {
    if (cell.empty()) throw NonNumericCell(row, col);
    char* end = nullptr;
    double v = std::strtod(cell.c_str(), &end);
    if (end != cell.c_str() + cell.size() || !std::isfinite(v)) throw NonNumericCell(row, col);
    return v;
}

}  // namespace

void ScenarioData::validate() const {
    if (n_steps <= 0) throw ValidationError("scenario must have at least one step");
    if (!(dt_hours > 0.0)) throw ValidationError("dt_hours must be > 0");
    if (std::abs(n_steps * dt_hours - kHorizonHours) > kHorizonTol)
        throw HorizonMismatch(n_steps, dt_hours);
    const std::vector<double>* series[4] = {&p_pv, &p_d, &c_g, &c_b};
    for (int k = 0; k < 4; ++k) {
        if (static_cast<int>(series[k]->size()) != n_steps)
            throw LengthMismatch(std::string(kSeriesNames[k]) + " has " +
                                 std::to_string(series[k]->size()) + " entries, expected " +
                                 std::to_string(n_steps));
        for (int t = 0; t < n_steps; ++t) {
            double v = (*series[k])[t];
            if (!std::isfinite(v)) throw NonNumericCell(t, kSeriesNames[k]);
            if (v < 0.0) throw NegativeValue(t, kSeriesNames[k]);
        }
    }
}

ScenarioData load_scenario_csv(const std::string& path, double dt_hours) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw HorizonMismatch(0, dt_hours);
    auto header = split_csv_line(line);

    int col_of[5];
    for (int k = 0; k < 5; ++k) {
        auto it = std::find(header.begin(), header.end(), kCsvHeaders[k]);
        if (it == header.end()) throw MissingColumn(kCsvHeaders[k]);
        col_of[k] = static_cast<int>(it - header.begin());
    }

    ScenarioData s;
    s.dt_hours = dt_hours;
    s.label = std::filesystem::path(path).stem().string();

    int row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) < static_cast<int>(header.size()))
            throw NonNumericCell(row, "t_index");

        double t_index = parse_cell(cells[col_of[0]], row, "t_index");
        if (t_index != static_cast<double>(row))
            throw ValidationError("t_index must ascend 0..n-1; row " + std::to_string(row) +
                                  " carries " + cells[col_of[0]]);

        double vals[4];
        for (int k = 0; k < 4; ++k) {
            vals[k] = parse_cell(cells[col_of[k + 1]], row, kSeriesNames[k]);
            if (vals[k] < 0.0) throw NegativeValue(row, kSeriesNames[k]);
        }
        s.p_pv.push_back(vals[0]);
        s.p_d.push_back(vals[1]);
        s.c_g.push_back(vals[2]);
        s.c_b.push_back(vals[3]);
        ++row;
    }

    s.n_steps = row;
    if (row == 0 || std::abs(row * dt_hours - kHorizonHours) > kHorizonTol)
        throw HorizonMismatch(row, dt_hours);
    s.validate();
    return s;
}

void emit_scenario_csv(const ScenarioData& s, const std::string& path) {
    s.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file: " + path);
    out << kCsvHeaders[0];
    for (int k = 1; k < 5; ++k) out << ',' << kCsvHeaders[k];
    out << '\n';
    char buf[160];
    for (int t = 0; t < s.n_steps; ++t) {
        std::snprintf(buf, sizeof(buf), "%d,%.6f,%.6f,%.6f,%.6f", t, s.p_pv[t], s.p_d[t], s.c_g[t],
                      s.c_b[t]);
        out << buf << '\n';
    }
    if (!out) throw IoError("short write to " + path);
}

ScenarioData scale_profile(const ScenarioData& s, double power_factor, double price_factor) {
    if (!(power_factor > 0.0) || !(price_factor > 0.0)) throw NonPositiveFactor();
    ScenarioData out = s;
    for (auto& v : out.p_pv) v *= power_factor;
    for (auto& v : out.p_d) v *= power_factor;
    for (auto& v : out.c_g) v *= price_factor;
    for (auto& v : out.c_b) v *= price_factor;
    return out;
}

ScenarioData synth_scenario(std::uint64_t seed, int n_steps, double dt_hours) {
    if (n_steps <= 0 || std::abs(n_steps * dt_hours - kHorizonHours) > kHorizonTol)
        throw HorizonMismatch(n_steps, dt_hours);

    Rng rng(seed);
    const double pv_peak = rng.uniform(1200.0, 1900.0);      // <= 2000 kW by construction
    const double demand_base = rng.uniform(800.0, 1100.0);
    const double morning_amp = rng.uniform(300.0, 700.0);
    const double evening_amp = rng.uniform(500.0, 900.0);
    const double tariff_off = rng.uniform(0.07, 0.11);
    const double tariff_day = rng.uniform(0.15, 0.22);
    const double tariff_peak = rng.uniform(0.30, 0.45);

    ScenarioData s;
    s.n_steps = n_steps;
    s.dt_hours = dt_hours;
    s.label = "synth-" + std::to_string(seed);
    s.p_pv.resize(n_steps);
    s.p_d.resize(n_steps);
    s.c_g.resize(n_steps);
    s.c_b.assign(n_steps, 0.05);

    for (int t = 0; t < n_steps; ++t) {
        // Profiles sampled at the step start, so hour 0 always has zero PV.
        double tau = t * dt_hours;
        double pv = 0.0;
        if (tau > 6.0 && tau < 18.0) pv = pv_peak * std::sin(M_PI * (tau - 6.0) / 12.0);
        s.p_pv[t] = std::max(0.0, pv);
    }
    for (int t = 0; t < n_steps; ++t) {
        double tau = t * dt_hours;
        double morning = morning_amp * std::exp(-0.5 * std::pow((tau - 8.0) / 1.6, 2));
        double evening = evening_amp * std::exp(-0.5 * std::pow((tau - 19.0) / 2.2, 2));
        double d = demand_base + morning + evening + rng.uniform(-40.0, 40.0);
        s.p_d[t] = std::clamp(d, 500.0, 3000.0);
    }
    for (int t = 0; t < n_steps; ++t) {
        double tau = t * dt_hours;
        double level = tariff_off;
        if (tau >= 7.0 && tau < 17.0) level = tariff_day;
        else if (tau >= 17.0 && tau < 21.0) level = tariff_peak;
        s.c_g[t] = std::clamp(level + rng.uniform(-0.01, 0.01), 0.05, 0.50);
    }

    s.validate();
    return s;
}

}  // namespace bessched
