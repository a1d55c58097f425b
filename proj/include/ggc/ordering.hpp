#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ggc/channels.hpp"
#include "ggc/measures.hpp"
#include "ggc/metrics.hpp"

namespace ggc {

/// Grid-based stochastic-order verdict. "holds_on_grid" is the honest
/// claim: the inequality was checked at every grid point, nothing more.
struct OrderVerdict {
    struct Counterexample {
        double point;  // grid s or rho where the inequality failed
        double left;
        double right;
        double margin;  // amount by which the inequality failed
    };
    bool holds_on_grid = true;
    std::optional<Counterexample> counterexample;
    std::vector<double> grid;
};

inline std::vector<double> default_order_grid() { return geometric_grid(1e-3, 1e3, 200); }

/// Laplace-transform order ch1 <=_Lt ch2, i.e. phi1(rho) >= phi2(rho)
/// on the grid. Deterministic paths use a relative tolerance; sampled
/// paths require a 4-standard-error separation before declaring a
/// violation (ties hold).
inline OrderVerdict lt_order_check(const ChannelModel& ch1, const ChannelModel& ch2,
                                   std::vector<double> rho_grid = default_order_grid(),
                                   McFallback mc = {}) {
    LtEvaluator phi1(ch1, mc);
    McFallback mc2 = mc;
    mc2.seed = mc.seed + 1;  // independent fallback sample for channel 2
    LtEvaluator phi2(ch2, mc2);
    OrderVerdict v;
    v.grid = std::move(rho_grid);
    for (double rho : v.grid) {
        const auto e1 = phi1.estimate(rho);
        const auto e2 = phi2.estimate(rho);
        const double tol = 1e-9 * std::max(std::abs(e1.value), std::abs(e2.value));
        const double sep = 4.0 * std::hypot(e1.se, e2.se);
        const double deficit = e2.value - e1.value;  // positive when order violated
        if (deficit > tol + sep) {
            const double margin = deficit - tol - sep;
            if (!v.counterexample || margin > v.counterexample->margin)
                v.counterexample = {rho, e1.value, e2.value, margin};
            v.holds_on_grid = false;
        }
    }
    return v;
}

/// Shannon-transform order mu1 <=_S mu2: the exponent integral
/// log(1 + rho/u) d(mu) of measure 1 does not exceed measure 2's on
/// the grid.
inline OrderVerdict shannon_order_check(const ThorinMeasure& mu1, const ThorinMeasure& mu2,
                                        std::vector<double> rho_grid = default_order_grid()) {
    OrderVerdict v;
    v.grid = std::move(rho_grid);
    for (double rho : v.grid) {
        const double l = laplace_exponent(mu1, rho);
        const double r = laplace_exponent(mu2, rho);
        if (!std::isfinite(l) || !std::isfinite(r))
            throw MeasureError("shannon_order_check: divergent Shannon transform");
        const double tol = 1e-9 * std::max(std::abs(l), std::abs(r));
        if (l > r + tol) {
            const double margin = l - r - tol;
            if (!v.counterexample || margin > v.counterexample->margin)
                v.counterexample = {rho, l, r, margin};
            v.holds_on_grid = false;
        }
    }
    return v;
}

inline OrderVerdict shannon_order_check(const ChannelModel& ch1, const ChannelModel& ch2,
                                        std::vector<double> rho_grid = default_order_grid()) {
    auto m1 = thorin_of(ch1);
    auto m2 = thorin_of(ch2);
    if (!m1 || !m2) throw ChannelError("shannon_order_check requires known Thorin measures");
    return shannon_order_check(*m1, *m2, std::move(rho_grid));
}

/// Duality property: for GGC channels with known Thorin measures the
/// LT-order verdict and the Shannon-order verdict must agree (in both
/// directions). Returns true when they do.
inline bool duality_check(const ChannelModel& ch1, const ChannelModel& ch2,
                          std::vector<double> rho_grid = default_order_grid()) {
    auto m1 = thorin_of(ch1);
    auto m2 = thorin_of(ch2);
    if (!m1 || !m2) throw ChannelError("duality_check requires known Thorin measures");
    const bool lt12 = lt_order_check(ch1, ch2, rho_grid).holds_on_grid;
    const bool lt21 = lt_order_check(ch2, ch1, rho_grid).holds_on_grid;
    const bool sh12 = shannon_order_check(*m1, *m2, rho_grid).holds_on_grid;
    const bool sh21 = shannon_order_check(*m2, *m1, rho_grid).holds_on_grid;
    return lt12 == sh12 && lt21 == sh21;
}

/// Gamma-mixture transfer: m1 <= m2 and A <=_Lt B imply
/// A * Gamma(m1, 1) <=_Lt B * Gamma(m2, 1). Premises are verified,
/// then the conclusion is checked by a Rao-Blackwellized Monte-Carlo
/// transform comparison (conditional LT (1 + s a)^-m per draw) with
/// the 4-SE rule.
inline OrderVerdict mixture_lt_order(double m1, double m2, const ChannelModel& mixer_a,
                                     const ChannelModel& mixer_b,
                                     std::vector<double> rho_grid = default_order_grid(),
                                     McFallback mc = {}) {
    if (!(m1 > 0.0) || !(m2 > 0.0) || m1 > m2)
        throw std::invalid_argument("mixture_lt_order requires 0 < m1 <= m2");
    if (!lt_order_check(mixer_a, mixer_b, rho_grid, mc).holds_on_grid)
        throw std::invalid_argument("mixture_lt_order premise A <=_Lt B failed on grid");
    CounterRng rng_a(mc.seed, 10);
    CounterRng rng_b(mc.seed, 11);
    const auto xs_a = sample(mixer_a, rng_a, mc.n);
    const auto xs_b = sample(mixer_b, rng_b, mc.n);
    auto mix_lt = [](const std::vector<double>& xs, double m, double s) {
        double acc = 0.0, acc2 = 0.0;
        for (double a : xs) {
            const double e = std::exp(-m * std::log1p(s * a));
            acc += e;
            acc2 += e * e;
        }
        const double n = static_cast<double>(xs.size());
        const double mean = acc / n;
        const double var = std::max(0.0, acc2 / n - mean * mean);
        return LtEvaluator::Estimate{mean, std::sqrt(var / n)};
    };
    OrderVerdict v;
    v.grid = std::move(rho_grid);
    for (double rho : v.grid) {
        const auto ea = mix_lt(xs_a, m1, rho);
        const auto eb = mix_lt(xs_b, m2, rho);
        const double sep = 4.0 * std::hypot(ea.se, eb.se);
        const double deficit = eb.value - ea.value;
        if (deficit > sep) {
            const double margin = deficit - sep;
            if (!v.counterexample || margin > v.counterexample->margin)
                v.counterexample = {rho, ea.value, eb.value, margin};
            v.holds_on_grid = false;
        }
    }
    return v;
}

/// Convex-order benchmark channel: the unit-mean Gamma with the same
/// diversity order.
inline ChannelModel nakagami_benchmark(double diversity) {
    if (!(diversity > 0.0) || !std::isfinite(diversity))
        throw ChannelError("nakagami_benchmark requires finite positive diversity");
    return ChannelModel(Nakagami{diversity});
}

enum class BenchmarkMetric { ser_dpsk, ser_mpsk, capacity };

/// metric(channel) - metric(Nakagami(D)). Convex metrics (SER) must be
/// >= 0 up to Monte-Carlo error; concave metrics (capacity) <= 0.
inline double benchmark_gap(const ChannelModel& channel, BenchmarkMetric metric, double rho,
                            int mpsk_order = 4, McFallback mc = {}) {
    if (class_of(channel).is_ggc == Tri::no)
        throw ChannelError("benchmark_gap: the benchmark bound only covers GGC channels");
    const double d = diversity_of(channel);
    if (std::isinf(d)) throw ChannelError("benchmark_gap requires finite diversity");
    const ChannelModel bench = nakagami_benchmark(d);
    switch (metric) {
        case BenchmarkMetric::ser_dpsk:
            return avg_ser_dpsk(channel, rho, mc) - avg_ser_dpsk(bench, rho);
        case BenchmarkMetric::ser_mpsk:
            return avg_ser_mpsk(channel, rho, mpsk_order, mc) -
                   avg_ser_mpsk(bench, rho, mpsk_order);
        case BenchmarkMetric::capacity:
            return ergodic_capacity(channel, rho, mc) - ergodic_capacity(bench, rho);
    }
    return 0.0;  // unreachable
}

}  // namespace ggc
