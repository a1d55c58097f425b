#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ggc/metrics.hpp"
#include "ggc/simkit.hpp"
#include "ggc/systems.hpp"

using namespace ggc;

TEST_CASE("MRC of two Rayleigh branches is the (1,2) atom") {
    const ChannelModel sys = mrc({rayleigh(), rayleigh()});
    const auto mu = thorin_of(sys);
    REQUIRE(mu.has_value());
    REQUIRE(mu->atoms().size() == 1);
    CHECK(mu->atoms()[0].rate == 1.0);
    CHECK(mu->atoms()[0].mass == 2.0);
    CHECK(diversity_of(sys) == 2.0);
    for (double rho : {1.0, 10.0, 100.0})
        CHECK_THAT(avg_ser_dpsk(sys, rho),
                   Catch::Matchers::WithinRel(0.5 * std::pow(1.0 + rho, -2.0), 1e-12));
}

TEST_CASE("single-branch MRC is the branch itself") {
    const ChannelModel br(Nakagami{2.0});
    const ChannelModel sys = mrc({br});
    CHECK(std::holds_alternative<Nakagami>(sys.family));
    CHECK(diversity_of(sys) == 2.0);
}

TEST_CASE("MRC transform is the product of branch transforms, and matches MC") {
    const ChannelModel sys =
        mrc({ChannelModel(GammaChannel{1.0, 1.0}), ChannelModel(GammaChannel{2.0, 2.0})});
    const auto mu = thorin_of(sys);
    for (double s : {0.5, 3.0}) {
        const double want = std::pow(1.0 + s, -1.0) * std::pow(1.0 + s / 2.0, -2.0);
        CHECK_THAT(*lt_of(sys, s), Catch::Matchers::WithinRel(want, 1e-12));
        CHECK_THAT(lt_eval(*mu, s), Catch::Matchers::WithinRel(want, 1e-9));
    }
    // MC DPSK SER against the exact LT value within 4 SE
    CounterRng rng(71, 0);
    const double rho = 10.0;
    double m1 = 0.0, m2 = 0.0;
    const std::size_t n = 200'000;
    for (std::size_t i = 0; i < n; ++i) {
        const double p = 0.5 * std::exp(-rho * sample_one(sys, rng));
        m1 += p;
        m2 += p * p;
    }
    m1 /= static_cast<double>(n);
    m2 /= static_cast<double>(n);
    const double se = std::sqrt((m2 - m1 * m1) / static_cast<double>(n));
    CHECK_THAT(avg_ser_dpsk(sys, rho), Catch::Matchers::WithinAbs(m1, 4.0 * se));
}

TEST_CASE("MRC diversity additivity shows up in the simulated slope") {
    const ChannelModel sys = mrc({rayleigh(), rayleigh(), rayleigh()});
    REQUIRE(diversity_of(sys) == 3.0);
    SimConfig cfg;
    cfg.seed = 72;
    // the estimator's relative error grows like rho^(D/2)/sqrt(n), so a
    // D = 3 slope fit needs a low window and a deep sample budget
    cfg.samples_per_point = 2'000'000;
    cfg.rho_db_grid = {10.0, 12.5, 15.0};
    const SerCurve curve = simulate_ser(sys, cfg);
    const double slope = estimate_diversity(curve, 10.0, 15.0);
    CHECK_THAT(slope, Catch::Matchers::WithinAbs(3.0, 0.3));  // within 10% of D
}

TEST_CASE("composite factors are normalized to unit mean before multiplying") {
    const ChannelModel sys =
        composite(ChannelModel(Nakagami{2.0}), ChannelModel(Lognormal{0.7, 1.0}));
    CHECK_THAT(*mean_of(sys), Catch::Matchers::WithinRel(1.0, 1e-9));
    // sampler mean agrees within 3 SE
    CounterRng rng(73, 0);
    double m1 = 0.0, m2 = 0.0;
    const std::size_t n = 400'000;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = sample_one(sys, rng);
        m1 += x;
        m2 += x * x;
    }
    m1 /= static_cast<double>(n);
    m2 /= static_cast<double>(n);
    const double se = std::sqrt((m2 - m1 * m1) / static_cast<double>(n));
    CHECK_THAT(m1, Catch::Matchers::WithinAbs(1.0, 3.0 * se));
}

TEST_CASE("composite class and diversity rules") {
    // Rayleigh x lognormal: GGC (GGC x HCM closure), D = 1
    const ChannelModel rl = composite(rayleigh(), ChannelModel(Lognormal{-0.5, 1.0}));
    CHECK(class_of(rl).is_ggc == Tri::yes);
    CHECK(diversity_of(rl) == 1.0);
    // gamma x gamma: finite D through the min rule
    const ChannelModel gk =
        composite(ChannelModel(GammaChannel{2.0, 2.0}), ChannelModel(GammaChannel{3.0, 3.0}));
    CHECK(class_of(gk).is_ggc == Tri::yes);
    CHECK(diversity_of(gk) == 2.0);
}

TEST_CASE("composite diversity matches a simulated slope fit") {
    // D = 1 for Rayleigh x lognormal, checked against the slope oracle.
    const ChannelModel rl = composite(rayleigh(), ChannelModel(Lognormal{-0.5, 1.0}));
    SimConfig cfg;
    cfg.seed = 74;
    cfg.samples_per_point = 400'000;
    cfg.rho_db_grid = {20.0, 22.5, 25.0, 27.5, 30.0};
    const SerCurve curve = simulate_ser(rl, cfg);
    CHECK_THAT(estimate_diversity(curve, 20.0, 30.0), Catch::Matchers::WithinAbs(1.0, 0.1));
}

TEST_CASE("system benchmark returns the matching Nakagami channel") {
    const ChannelModel fig1 = normalize_unit_power(
        mrc({ChannelModel(Pareto{1.0, 1.0, 1.25}), ChannelModel(Pareto{1.0, 1.0, 1.25})}));
    const ChannelModel bench = system_benchmark(fig1);
    REQUIRE(std::holds_alternative<Nakagami>(bench.family));
    CHECK(std::get<Nakagami>(bench.family).m == 2.5);
    CHECK(std::get<Nakagami>(system_benchmark(mrc({rayleigh(), rayleigh(), rayleigh()})).family)
              .m == 3.0);
    CHECK(std::get<Nakagami>(
              system_benchmark(composite(rayleigh(), ChannelModel(Lognormal{-0.5, 1.0})))
                  .family)
              .m == 1.0);
    CHECK_THROWS_AS(system_benchmark(ChannelModel(Lognormal{0.0, 1.0})), ChannelError);
}
