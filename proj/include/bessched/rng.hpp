#pragma once

#include <cstdint>
#include <random>

namespace bessched {

// Seeded random source. Every stochastic routine takes one of these by
// reference; nothing in the library touches a global generator. Distributions
// are constructed per call so the draw sequence depends only on the seed and
// the call order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double unit() { return std::uniform_real_distribution<double>(0.0, 1.0)(gen_); }
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
    double normal(double mu, double sigma) { return std::normal_distribution<double>(mu, sigma)(gen_); }
    double exponential(double rate) { return std::exponential_distribution<double>(rate)(gen_); }
    double lognormal(double mu, double sigma) { return std::lognormal_distribution<double>(mu, sigma)(gen_); }

    // Beta(a, b) as the two-gamma ratio.
    double beta(double a, double b) {
        std::gamma_distribution<double> ga(a, 1.0);
        std::gamma_distribution<double> gb(b, 1.0);
        double x = ga(gen_);
        double y = gb(gen_);
        return x / (x + y);
    }

    // Integer in [0, n).
    std::uint64_t integer(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(gen_);
    }

    // Child seed for spawning an independent stream.
    std::uint64_t split() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace bessched
