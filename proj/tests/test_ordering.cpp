#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ggc/ordering.hpp"
#include "ggc/systems.hpp"

using namespace ggc;

TEST_CASE("LT order: gamma shape/rate example and reflexivity") {
    // (1 + s/2)^2 >= 1 + s algebraically, so Gamma(1,1) <=_Lt Gamma(2,2).
    const ChannelModel g11(GammaChannel{1.0, 1.0});
    const ChannelModel g22(GammaChannel{2.0, 2.0});
    CHECK(lt_order_check(g11, g22).holds_on_grid);
    CHECK(lt_order_check(g11, g11).holds_on_grid);
    CHECK(lt_order_check(g22, g22).holds_on_grid);
}

TEST_CASE("LT order: strict violation reports a counterexample") {
    const ChannelModel n2(Nakagami{2.0});
    const ChannelModel n1(Nakagami{1.0});
    const auto v = lt_order_check(n2, n1);
    REQUIRE_FALSE(v.holds_on_grid);
    REQUIRE(v.counterexample.has_value());
    // at the witness point the left transform is genuinely below the right
    CHECK(v.counterexample->left < v.counterexample->right);
    CHECK(v.counterexample->margin > 0.0);
    // and the reverse direction holds
    CHECK(lt_order_check(n1, n2).holds_on_grid);
}

TEST_CASE("LT order is transitive on zoo triples") {
    const ChannelModel a(Nakagami{1.0});
    const ChannelModel b(Nakagami{2.0});
    const ChannelModel c(Nakagami{4.0});
    REQUIRE(lt_order_check(a, b).holds_on_grid);
    REQUIRE(lt_order_check(b, c).holds_on_grid);
    CHECK(lt_order_check(a, c).holds_on_grid);
}

TEST_CASE("Shannon order on measures") {
    const ThorinMeasure m11({{1.0, 1.0}});
    const ThorinMeasure m12({{1.0, 2.0}});
    CHECK(shannon_order_check(m11, m11).holds_on_grid);
    CHECK(shannon_order_check(m11, m12).holds_on_grid);      // more mass, same rate
    CHECK_FALSE(shannon_order_check(m12, m11).holds_on_grid);
    // duality cross-check of the (2,2) vs (1,1) atom pair at equal mean
    const ThorinMeasure m22({{2.0, 2.0}});
    const bool sh = shannon_order_check(m11, m22).holds_on_grid;
    const bool lt = lt_order_check(ChannelModel(GammaChannel{1.0, 1.0}),
                                   ChannelModel(GammaChannel{2.0, 2.0}))
                        .holds_on_grid;
    CHECK(sh == lt);
}

TEST_CASE("equal-mass gLt dominance implies Shannon dominance on atom pairs") {
    // same total mass, rates shifted up -> both orders agree
    const ThorinMeasure lo({{1.0, 1.5}});
    const ThorinMeasure hi({{2.0, 1.5}});
    // exp dominance: integral e^(-rho u) mu_hi(du) <= ... mu_lo(du) pointwise
    for (double rho : geometric_grid(1e-2, 1e2, 20))
        REQUIRE(1.5 * std::exp(-rho * 1.0) >= 1.5 * std::exp(-rho * 2.0));
    CHECK(shannon_order_check(hi, lo).holds_on_grid);
}

TEST_CASE("duality holds across GGC pairs with known measures") {
    const std::vector<std::pair<ChannelModel, ChannelModel>> pairs = {
        {ChannelModel(GammaChannel{1.0, 1.0}), ChannelModel(GammaChannel{2.0, 2.0})},
        {ChannelModel(Hoyt{0.5}), rayleigh()},
        {ChannelModel(Nakagami{2.0}), ChannelModel(Nakagami{4.0})},
        {ChannelModel(Hoyt{0.25}), ChannelModel(Hoyt{0.75})},
        {mrc({rayleigh(), rayleigh()}), ChannelModel(Nakagami{2.0})},
        {ChannelModel(Nakagami{2.0}), ChannelModel(Nakagami{2.0})},
    };
    for (const auto& [a, b] : pairs) CHECK(duality_check(a, b));
    CHECK_THROWS_AS(duality_check(rayleigh(), ChannelModel(Lognormal{0.0, 1.0})),
                    ChannelError);
}

TEST_CASE("gamma-mixture transfer holds for verified premises") {
    const ChannelModel one(Nakagami{1.0}, 1.0);  // placeholder for identical mixers
    // identical mixers, increasing shape
    CHECK(mixture_lt_order(1.0, 2.0, one, one, default_order_grid(), {11, 100'000})
              .holds_on_grid);
    // lognormal mixers on both sides
    const ChannelModel ln(Lognormal{-0.5, 1.0});
    CHECK(mixture_lt_order(1.0, 2.0, ln, ln, default_order_grid(), {12, 100'000})
              .holds_on_grid);
    // ordered gamma mixers at equal shape
    CHECK(mixture_lt_order(2.0, 2.0, ChannelModel(GammaChannel{1.0, 1.0}),
                           ChannelModel(GammaChannel{2.0, 2.0}), default_order_grid(),
                           {13, 100'000})
              .holds_on_grid);
    // violated premises are rejected up front
    CHECK_THROWS_AS(mixture_lt_order(2.0, 1.0, one, one), std::invalid_argument);
    CHECK_THROWS_AS(mixture_lt_order(1.0, 2.0, ChannelModel(GammaChannel{2.0, 2.0}),
                                     ChannelModel(GammaChannel{1.0, 1.0})),
                    std::invalid_argument);
}

TEST_CASE("Nakagami benchmark lower-bounds convex metrics") {
    CHECK(diversity_of(nakagami_benchmark(2.5)) == 2.5);
    // the benchmark of the benchmark is itself: gap is exactly zero
    CHECK(benchmark_gap(ChannelModel(Nakagami{2.0}), BenchmarkMetric::ser_dpsk, 10.0) == 0.0);
    // Hoyt (D=1, unit mean): SER above the Rayleigh benchmark at every grid rho
    for (double rho : geometric_grid(1e-2, 1e3, 30))
        CHECK(benchmark_gap(ChannelModel(Hoyt{0.5}), BenchmarkMetric::ser_dpsk, rho) >= 0.0);
    // MRC of distinct gammas at unit mean, exact LT path
    const ChannelModel sys = normalize_unit_power(
        mrc({ChannelModel(GammaChannel{1.0, 1.0}), ChannelModel(GammaChannel{2.0, 2.0})}));
    for (double rho : geometric_grid(1e-2, 1e3, 30))
        CHECK(benchmark_gap(sys, BenchmarkMetric::ser_dpsk, rho) >= -1e-15);
    // concave metric: capacity gap of a sampled GGC composite is <= +noise
    const ChannelModel comp =
        composite(ChannelModel(GammaChannel{2.0, 2.0}), ChannelModel(Lognormal{-0.5, 1.0}));
    const double cap_gap =
        benchmark_gap(comp, BenchmarkMetric::capacity, 10.0, 4, {21, 400'000});
    CHECK(cap_gap <= 0.01);  // generous 4-SE style allowance for the MC transform
    CHECK_THROWS_AS(benchmark_gap(ChannelModel(Lognormal{0.0, 1.0}),
                                  BenchmarkMetric::ser_dpsk, 10.0),
                    ChannelError);
    // the bound does not cover non-GGC channels, even with finite diversity
    CHECK_THROWS_AS(benchmark_gap(normalize_unit_power(ChannelModel(GenGamma{2.0, 2.0, 1.0})),
                                  BenchmarkMetric::capacity, 10.0),
                    ChannelError);
}

TEST_CASE("fig1 system: MRC-Pareto DPSK SER dominates its benchmark (MC, 4 SE)") {
    const ChannelModel sys = normalize_unit_power(
        mrc({ChannelModel(Pareto{1.0, 1.0, 1.25}), ChannelModel(Pareto{1.0, 1.0, 1.25})}));
    const ChannelModel bench = system_benchmark(sys);
    REQUIRE(diversity_of(bench) == 2.5);
    const double rho = 100.0;  // 20 dB
    const McFallback mc{31, 400'000};
    const LtEvaluator phi(sys, mc);
    const auto est = phi.estimate(rho);
    const double sys_ser = 0.5 * est.value;
    const double bench_ser = avg_ser_dpsk(bench, rho);
    CHECK(sys_ser >= bench_ser - 4.0 * 0.5 * est.se);
}
