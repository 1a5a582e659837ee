#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "bessched/errors.hpp"
#include "bessched/profiles.hpp"
#include "bessched/uncertainty.hpp"

using namespace bessched;

namespace {

const DistFamily kAllFamilies[5] = {DistFamily::Normal, DistFamily::Uniform,
                                    DistFamily::Exponential, DistFamily::LogNormal,
                                    DistFamily::Beta};

// Analytic mean and standard deviation of the default factor per family. The
// lognormal default shift of 1.10 leaves a small negative mean,
// exp(sigma^2/2) - 1.10; the others are centered.
struct Moments {
    double mean;
    double sd;
};

Moments default_moments(DistFamily f) {
    switch (f) {
        case DistFamily::Normal: return {0.0, 0.10};
        case DistFamily::Uniform: return {0.0, 0.20 / std::sqrt(12.0)};
        case DistFamily::Exponential: return {0.0, 0.10};
        case DistFamily::LogNormal: {
            double m = std::exp(0.005) - 1.10;
            double var = (std::exp(0.01) - 1.0) * std::exp(0.01);
            return {m, std::sqrt(var)};
        }
        case DistFamily::Beta: return {0.0, std::sqrt(4.0 / (16.0 * 5.0)) * 0.10};
    }
    return {0.0, 0.0};
}

}  // namespace

TEST_CASE("sample_perturbation is multiplicative: zero base gives zero") {
    Rng rng(1);
    for (DistFamily f : kAllFamilies) {
        DistSpec spec = DistSpec::defaults(f);
        for (int i = 0; i < 10; ++i) CHECK(sample_perturbation(spec, 0.0, rng) == 0.0);
    }
}

TEST_CASE("uniform perturbations stay inside the 10% support") {
    DistSpec spec = DistSpec::defaults(DistFamily::Uniform);
    Rng rng(2);
    for (int i = 0; i < 10000; ++i) {
        double u = sample_perturbation(spec, 1000.0, rng);
        CHECK(u >= -100.0);
        CHECK(u <= 100.0);
    }
}

TEST_CASE("normal perturbation sample mean stays in the Monte-Carlo band") {
    DistSpec spec = DistSpec::defaults(DistFamily::Normal);
    Rng rng(3);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += sample_perturbation(spec, 1000.0, rng);
    CHECK(std::abs(sum / n) <= 1.5);  // 3 sigma / sqrt(N) with headroom
}

TEST_CASE("every family's factor mean matches its analytic value") {
    const int n = 100000;
    for (DistFamily f : kAllFamilies) {
        DistSpec spec = DistSpec::defaults(f);
        Moments m = default_moments(f);
        Rng rng(4);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) sum += sample_factor(spec, rng);
        double band = 3.0 * m.sd / std::sqrt(static_cast<double>(n));
        INFO(family_name(f));
        CHECK(std::abs(sum / n - m.mean) <= band);
    }
}

TEST_CASE("invalid specs are rejected") {
    DistSpec s = DistSpec::defaults(DistFamily::Normal);
    s.sigma = 0.0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = DistSpec::defaults(DistFamily::Uniform);
    s.b = s.a;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = DistSpec::defaults(DistFamily::Exponential);
    s.rate = -1.0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    s = DistSpec::defaults(DistFamily::Beta);
    s.alpha = 0.0;
    CHECK_THROWS_AS(s.validate(), InvalidSpec);
    CHECK_THROWS_AS(family_from_name("cauchy"), InvalidSpec);
}

TEST_CASE("draw_scenario_uncertainty") {
    ScenarioData s = synth_scenario(7);

    SUBCASE("all-zero scenario draws all-zero perturbations") {
        ScenarioData z = s;
        z.p_pv.assign(48, 0.0);
        z.p_d.assign(48, 0.0);
        z.c_g.assign(48, 0.0);
        z.c_b.assign(48, 0.0);
        Rng rng(5);
        UncertaintyDraw d = draw_scenario_uncertainty(z, DistSpec::defaults(DistFamily::Normal), rng);
        for (int t = 0; t < 48; ++t) {
            CHECK(d.u_pv[t] == 0.0);
            CHECK(d.u_d[t] == 0.0);
            CHECK(d.u_cg[t] == 0.0);
            CHECK(d.u_cb[t] == 0.0);
            CHECK(d.p_unc[t] == 0.0);
        }
    }

    SUBCASE("identical seeds give identical draws") {
        Rng a(6), b(6);
        UncertaintyDraw da = draw_scenario_uncertainty(s, DistSpec::defaults(DistFamily::Beta), a);
        UncertaintyDraw db = draw_scenario_uncertainty(s, DistSpec::defaults(DistFamily::Beta), b);
        CHECK(da.u_pv == db.u_pv);
        CHECK(da.u_d == db.u_d);
        CHECK(da.u_cg == db.u_cg);
        CHECK(da.u_cb == db.u_cb);
        CHECK(da.p_unc == db.p_unc);
    }

    SUBCASE("p_unc is the demand-minus-PV mismatch and respects the envelope") {
        double d_max = *std::max_element(s.p_d.begin(), s.p_d.end());
        double pv_max = *std::max_element(s.p_pv.begin(), s.p_pv.end());
        Rng rng(7);
        UncertaintyDraw d = draw_scenario_uncertainty(s, DistSpec::defaults(DistFamily::Uniform), rng);
        for (int t = 0; t < 48; ++t) {
            CHECK(d.p_unc[t] == doctest::Approx(d.u_d[t] - d.u_pv[t]).epsilon(1e-15));
            CHECK(std::abs(d.p_unc[t]) <= 0.1 * (d_max + pv_max));
        }
    }

    SUBCASE("perturbed tariffs are floored at zero") {
        DistSpec hostile = DistSpec::defaults(DistFamily::Uniform);
        hostile.a = -3.0;
        hostile.b = -2.0;  // factor always <= -2, raw perturbed price would go negative
        Rng rng(8);
        UncertaintyDraw d = draw_scenario_uncertainty(s, hostile, rng);
        ScenarioData p = perturbed_scenario(s, d);
        for (int t = 0; t < 48; ++t) {
            CHECK(p.c_g[t] == 0.0);
            CHECK(p.c_b[t] == 0.0);
        }
    }
}

TEST_CASE("envelope") {
    std::vector<double> series = {100.0};
    auto [lo0, hi0] = envelope(series, 0.0);
    CHECK(lo0 == series);
    CHECK(hi0 == series);
    auto [lo, hi] = envelope(series, 0.1);
    CHECK(lo[0] == doctest::Approx(90.0));
    CHECK(hi[0] == doctest::Approx(110.0));
    CHECK_THROWS_AS(envelope(series, -0.1), NegativeFraction);
}

TEST_CASE("uniform draws stay inside the 10% envelope of the demand profile") {
    ScenarioData s = synth_scenario(7);
    auto [lo, hi] = envelope(s.p_d, 0.1);
    DistSpec spec = DistSpec::defaults(DistFamily::Uniform);
    Rng rng(9);
    for (int rep = 0; rep < 200; ++rep) {
        UncertaintyDraw d = draw_scenario_uncertainty(s, spec, rng);
        for (int t = 0; t < 48; ++t) {
            double perturbed = s.p_d[t] + d.u_d[t];
            CHECK(perturbed >= lo[t] - 1e-9);
            CHECK(perturbed <= hi[t] + 1e-9);
        }
    }
}

TEST_CASE("entropy_bits") {
    CHECK(entropy_bits(std::vector<double>(100, 3.25), 10) == 0.0);
    CHECK(entropy_bits({0.0, 0.0, 1.0, 1.0}, 2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(entropy_bits({}, 10), EmptySamples);
    CHECK_THROWS_AS(entropy_bits({1.0}, 0), ValidationError);

    SUBCASE("one million uniform draws approach the analytic bin entropy") {
        Rng rng(10);
        std::vector<double> samples(1000000);
        for (auto& v : samples) v = rng.uniform(-0.1, 0.1);
        CHECK(std::abs(entropy_bits(samples, 10) - std::log2(10.0)) <= 0.02);
    }

    SUBCASE("permutation invariance") {
        Rng rng(11);
        std::vector<double> samples(2000);
        for (auto& v : samples) v = rng.normal(0, 1);
        double h1 = entropy_bits(samples, 16);
        std::reverse(samples.begin(), samples.end());
        std::rotate(samples.begin(), samples.begin() + 700, samples.end());
        CHECK(entropy_bits(samples, 16) == h1);
    }

    SUBCASE("never exceeds log2(n_bins)") {
        Rng rng(12);
        for (int bins : {1, 2, 3, 8, 10, 64}) {
            std::vector<double> samples(500);
            for (auto& v : samples) v = rng.lognormal(0, 0.5);
            CHECK(entropy_bits(samples, bins) <= std::log2(static_cast<double>(bins)) + 1e-12);
        }
    }

    SUBCASE("affine shift leaves the histogram unchanged") {
        Rng rng(13);
        std::vector<double> samples(5000), shifted(5000);
        for (int i = 0; i < 5000; ++i) {
            samples[i] = rng.uniform(-2.0, 5.0);
            shifted[i] = samples[i] + 123.456;
        }
        CHECK(entropy_bits(shifted, 12) == doctest::Approx(entropy_bits(samples, 12)).epsilon(1e-9));
    }
}

TEST_CASE("entropy_state_vector") {
    ScenarioData s = synth_scenario(7);

    SUBCASE("zero-variance factor gives zero entropy everywhere") {
        DistSpec point = DistSpec::defaults(DistFamily::Beta);
        point.scale = 0.0;  // (Beta - shift) * 0 is a point mass
        Rng rng(14);
        auto h = entropy_state_vector(s, point, 1000, 10, rng);
        for (double v : h) CHECK(v == 0.0);
    }

    SUBCASE("deterministic under a fixed seed") {
        Rng a(15), b(15);
        auto ha = entropy_state_vector(s, DistSpec::defaults(DistFamily::Normal), 2000, 10, a);
        auto hb = entropy_state_vector(s, DistSpec::defaults(DistFamily::Normal), 2000, 10, b);
        CHECK(ha == hb);
    }

    SUBCASE("uniform carries at least as much binned entropy as normal") {
        Rng a(16), b(16);
        auto hu = entropy_state_vector(s, DistSpec::defaults(DistFamily::Uniform), 20000, 10, a);
        auto hn = entropy_state_vector(s, DistSpec::defaults(DistFamily::Normal), 20000, 10, b);
        for (int i = 0; i < 4; ++i) CHECK(hu[i] >= hn[i]);
    }

    SUBCASE("sample floor enforced") {
        Rng rng(17);
        CHECK_THROWS_AS(entropy_state_vector(s, DistSpec::defaults(DistFamily::Normal), 50, 10, rng),
                        ValidationError);
    }
}
