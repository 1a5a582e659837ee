#include "bessched/uncertainty.hpp"

#include <algorithm>
#include <cmath>

#include "bessched/errors.hpp"

namespace bessched {

std::string family_name(DistFamily f) {
    switch (f) {
        case DistFamily::Normal: return "normal";
        case DistFamily::Uniform: return "uniform";
        case DistFamily::Exponential: return "exponential";
        case DistFamily::LogNormal: return "lognormal";
        case DistFamily::Beta: return "beta";
    }
    return "uniform";
}

DistFamily family_from_name(const std::string& name) {
    if (name == "normal" || name == "gauss") return DistFamily::Normal;
    if (name == "uniform") return DistFamily::Uniform;
    if (name == "exponential" || name == "exp") return DistFamily::Exponential;
    if (name == "lognormal" || name == "log") return DistFamily::LogNormal;
    if (name == "beta") return DistFamily::Beta;
    throw InvalidSpec("unknown family name: " + name);
}

DistSpec DistSpec::defaults(DistFamily f) {
    DistSpec s;
    s.family = f;
    switch (f) {
        case DistFamily::Normal:
            s.mu = 0.0;
            s.sigma = 0.10;
            break;
        case DistFamily::Uniform:
            s.a = -0.10;
            s.b = 0.10;
            break;
        case DistFamily::Exponential:
            s.rate = 10.0;  // mean 0.10, so the 0.10 shift centers the factor
            s.shift = 0.10;
            break;
        case DistFamily::LogNormal:
            s.mu = 0.0;
            s.sigma = 0.10;
            s.shift = 1.10;
            break;
        case DistFamily::Beta:
            s.alpha = 2.0;
            s.beta = 2.0;
            s.scale = 0.10;
            s.shift = 0.5;
            break;
    }
    return s;
}

void DistSpec::validate() const {
    switch (family) {
        case DistFamily::Normal:
        case DistFamily::LogNormal:
            if (!(sigma > 0.0)) throw InvalidSpec("sigma must be > 0");
            if (!std::isfinite(mu) || !std::isfinite(shift)) throw InvalidSpec("non-finite parameter");
            break;
        case DistFamily::Uniform:
            if (!(b > a)) throw InvalidSpec("uniform requires b > a");
            break;
        case DistFamily::Exponential:
            if (!(rate > 0.0)) throw InvalidSpec("rate must be > 0");
            if (!std::isfinite(shift)) throw InvalidSpec("non-finite shift");
            break;
        case DistFamily::Beta:
            if (!(alpha > 0.0) || !(beta > 0.0)) throw InvalidSpec("beta shapes must be > 0");
            if (!std::isfinite(scale) || !std::isfinite(shift)) throw InvalidSpec("non-finite parameter");
            break;
    }
}

double sample_factor(const DistSpec& spec, Rng& rng) {
    spec.validate();
    switch (spec.family) {
        case DistFamily::Normal: return rng.normal(spec.mu, spec.sigma);
        case DistFamily::Uniform: return rng.uniform(spec.a, spec.b);
        case DistFamily::Exponential: return rng.exponential(spec.rate) - spec.shift;
        case DistFamily::LogNormal: return rng.lognormal(spec.mu, spec.sigma) - spec.shift;
        case DistFamily::Beta: return (rng.beta(spec.alpha, spec.beta) - spec.shift) * spec.scale;
    }
    return 0.0;
}

double sample_perturbation(const DistSpec& spec, double x, Rng& rng) {
    if (!std::isfinite(x)) throw ValidationError("base value must be finite");
    return sample_factor(spec, rng) * x;
}

UncertaintyDraw draw_scenario_uncertainty(const ScenarioData& scenario, const DistSpec& spec,
                                          Rng& rng) {
    spec.validate();
    scenario.validate();
    const int n = scenario.n_steps;
    UncertaintyDraw d;
    d.u_pv.resize(n);
    d.u_d.resize(n);
    d.u_cg.resize(n);
    d.u_cb.resize(n);
    d.p_unc.resize(n);
    for (int t = 0; t < n; ++t) {
        d.u_pv[t] = sample_factor(spec, rng) * scenario.p_pv[t];
        d.u_d[t] = sample_factor(spec, rng) * scenario.p_d[t];
        // Tariff perturbations are floored so perturbed prices stay >= 0.
        d.u_cg[t] = std::max(sample_factor(spec, rng) * scenario.c_g[t], -scenario.c_g[t]);
        d.u_cb[t] = std::max(sample_factor(spec, rng) * scenario.c_b[t], -scenario.c_b[t]);
        d.p_unc[t] = d.u_d[t] - d.u_pv[t];
    }
    return d;
}

ScenarioData perturbed_scenario(const ScenarioData& scenario, const UncertaintyDraw& draw) {
    if (draw.u_cg.size() != static_cast<std::size_t>(scenario.n_steps) ||
        draw.u_cb.size() != static_cast<std::size_t>(scenario.n_steps))
        throw LengthMismatch("uncertainty draw vs scenario");
    ScenarioData out = scenario;
    for (int t = 0; t < scenario.n_steps; ++t) {
        out.c_g[t] = std::max(0.0, scenario.c_g[t] + draw.u_cg[t]);
        out.c_b[t] = std::max(0.0, scenario.c_b[t] + draw.u_cb[t]);
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> envelope(const std::vector<double>& series,
                                                             double frac) {
    if (frac < 0.0) throw NegativeFraction();
    std::vector<double> lo(series.size()), hi(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        lo[i] = series[i] * (1.0 - frac);
        hi[i] = series[i] * (1.0 + frac);
    }
    return {std::move(lo), std::move(hi)};
}

double entropy_bits(const std::vector<double>& samples, int n_bins) {
    if (samples.empty()) throw EmptySamples();
    if (n_bins < 1) throw ValidationError("n_bins must be >= 1");

    auto [mn_it, mx_it] = std::minmax_element(samples.begin(), samples.end());
    double mn = *mn_it, mx = *mx_it;
    if (mn == mx) return 0.0;

    std::vector<std::size_t> counts(n_bins, 0);
    const double inv_width = n_bins / (mx - mn);
    for (double v : samples) {
        int idx = static_cast<int>((v - mn) * inv_width);
        ++counts[std::clamp(idx, 0, n_bins - 1)];
    }
    double h = 0.0;
    const double inv_n = 1.0 / static_cast<double>(samples.size());
    for (std::size_t c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) * inv_n;
        h -= p * std::log2(p);
    }
    return h;
}

std::array<double, 4> entropy_state_vector(const ScenarioData& /*scenario*/, const DistSpec& spec,
                                           int n_samples, int n_bins, Rng& rng) {
    if (n_samples < 100) throw ValidationError("entropy_state_vector requires n_samples >= 100");
    std::array<double, 4> out{};
    std::vector<double> pool(n_samples);
    for (int v = 0; v < 4; ++v) {
        for (int i = 0; i < n_samples; ++i) pool[i] = sample_factor(spec, rng);
        out[v] = entropy_bits(pool, n_bins);
    }
    return out;
}

}  // namespace bessched
