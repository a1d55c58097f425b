#pragma once

#include <cmath>
#include <cstdint>

namespace ggc {

namespace detail {

// SplitMix64 finalizer; full-avalanche 64-bit mix.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based generator: the k-th output is a pure function of
/// (seed, stream, k), so independently derived substreams give
/// reproducible parallel Monte-Carlo regardless of worker layout.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(detail::mix64(detail::mix64(seed) ^ detail::mix64(~stream))) {}

    std::uint64_t next_u64() {
        const std::uint64_t v = detail::mix64(key_ ^ detail::mix64(counter_));
        ++counter_;
        return v;
    }

    /// Uniform in (0, 1); never returns exactly 0 so log() is safe.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential() { return -std::log(uniform()); }

    /// Box-Muller; draws two uniforms per normal, no caching, so the
    /// draw count per variate is fixed.
    void normal_pair(double& z0, double& z1) {
        const double r = std::sqrt(2.0 * exponential());
        const double theta = 2.0 * M_PI * uniform();
        z0 = r * std::cos(theta);
        z1 = r * std::sin(theta);
    }

    double normal() {
        double z0, z1;
        normal_pair(z0, z1);
        return z0;
    }

    /// Gamma(shape, rate) via Marsaglia-Tsang; shape < 1 boosted.
    double gamma(double shape, double rate) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            const double x = normal();
            const double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            const double v = t * t * t;
            const double u = uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v))
                return d * v / rate;
        }
    }

    double lognormal(double mu, double sigma) {
        return std::exp(mu + sigma * normal());
    }

    /// One-sided stable with Laplace transform exp(-s^r), 0 < r < 1
    /// (Kanter's construction). r = 1 is the point mass at 1.
    double positive_stable(double r) {
        if (r >= 1.0) return 1.0;
        const double theta = M_PI * uniform();
        const double w = exponential();
        const double a = std::sin(r * theta) / std::pow(std::sin(theta), 1.0 / r);
        const double b = std::sin((1.0 - r) * theta) / w;
        return a * std::pow(b, (1.0 - r) / r);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ggc
