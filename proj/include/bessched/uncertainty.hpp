#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "bessched/profiles.hpp"
#include "bessched/rng.hpp"

namespace bessched {

enum class DistFamily { Normal, Uniform, Exponential, LogNormal, Beta };

std::string family_name(DistFamily f);
DistFamily family_from_name(const std::string& name);

// Parameters of one perturbation family. Only the fields of the active family
// matter; defaults(f) fills the 10%-envelope values used throughout.
// The factor f multiplies the base value: perturbation = f * x.
//   Normal:      f ~ N(mu, sigma)
//   Uniform:     f ~ U(a, b)
//   Exponential: f ~ Exp(rate) - shift
//   LogNormal:   f ~ LN(mu, sigma) - shift
//   Beta:        f ~ (Beta(alpha, beta) - shift) * scale
struct DistSpec {
    DistFamily family = DistFamily::Uniform;
    double mu = 0.0;
    double sigma = 0.10;
    double a = -0.10;
    double b = 0.10;
    double rate = 10.0;   // mean 0.10 before the shift
    double shift = 0.10;
    double alpha = 2.0;
    double beta = 2.0;
    double scale = 0.10;

    static DistSpec defaults(DistFamily f);
    void validate() const;
};

// One multiplicative perturbation factor.
double sample_factor(const DistSpec& spec, Rng& rng);
// factor * x.
double sample_perturbation(const DistSpec& spec, double x, Rng& rng);

struct UncertaintyDraw {
    std::vector<double> u_pv;   // kW
    std::vector<double> u_d;    // kW
    std::vector<double> u_cg;   // $/kWh, floored so c_g + u_cg >= 0
    std::vector<double> u_cb;   // $/kWh, floored so c_b + u_cb >= 0
    std::vector<double> p_unc;  // kW, u_d - u_pv
};

UncertaintyDraw draw_scenario_uncertainty(const ScenarioData& scenario, const DistSpec& spec,
                                          Rng& rng);

// Scenario with the draw's tariff perturbations applied in place. Demand and
// PV stay nominal; their mismatch enters the balance through p_unc instead.
ScenarioData perturbed_scenario(const ScenarioData& scenario, const UncertaintyDraw& draw);

std::pair<std::vector<double>, std::vector<double>> envelope(const std::vector<double>& series,
                                                             double frac);

// Shannon entropy over an equal-width histogram of the empirical range.
// Degenerate all-equal samples carry zero entropy.
double entropy_bits(const std::vector<double>& samples, int n_bins);

// One entropy value per scenario variable (PV, demand, grid tariff, battery
// cost), each from a pool of n_samples perturbation factors.
std::array<double, 4> entropy_state_vector(const ScenarioData& scenario, const DistSpec& spec,
                                           int n_samples, int n_bins, Rng& rng);

}  // namespace bessched
