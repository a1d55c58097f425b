#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ggc/measures.hpp"

using namespace ggc;

TEST_CASE("atom bookkeeping: mass, mean, log-moment") {
    const ThorinMeasure mu({{2.0, 3.0}, {0.5, 1.0}});
    CHECK_THAT(thorin_mass(mu), Catch::Matchers::WithinRel(4.0, 1e-15));
    CHECK_THAT(mean_from_thorin(mu), Catch::Matchers::WithinRel(3.0 / 2.0 + 1.0 / 0.5, 1e-15));
    CHECK_THAT(log_moment(mu),
               Catch::Matchers::WithinRel(3.0 * std::log(2.0) + std::log(0.5), 1e-15));
}

TEST_CASE("atoms at equal rates merge; invalid atoms are rejected") {
    const ThorinMeasure mu({{1.0, 0.5}, {1.0, 0.25}, {2.0, 1.0}});
    REQUIRE(mu.atoms().size() == 2);
    CHECK(mu.atoms()[0].rate == 1.0);
    CHECK(mu.atoms()[0].mass == 0.75);
    CHECK_THROWS_AS(ThorinMeasure({{-1.0, 1.0}}), MeasureError);
    CHECK_THROWS_AS(ThorinMeasure({{1.0, 0.0}}), MeasureError);
}

TEST_CASE("exponent of an atom measure reproduces the gamma transform") {
    // Gamma(k, theta): gamma(s) = k log(1 + s/theta)
    const double k = 2.5, theta = 1.5;
    const ThorinMeasure mu({{theta, k}});
    for (double s : {0.0, 0.3, 2.0, 50.0}) {
        CHECK_THAT(laplace_exponent(mu, s),
                   Catch::Matchers::WithinAbs(k * std::log1p(s / theta), 1e-14));
        CHECK_THAT(lt_eval(mu, s),
                   Catch::Matchers::WithinRel(std::pow(1.0 + s / theta, -k), 1e-12));
    }
}

TEST_CASE("continuous stable density: transform exact, mass infinite") {
    // Thorin density (r sin(r pi) / pi) u^(r-1) generates exp(-s^r).
    for (double r : {0.25, 0.5}) {
        const double c = r * std::sin(r * M_PI) / M_PI;
        const ThorinMeasure mu({}, [=](double u) { return c * std::pow(u, r - 1.0); });
        for (double s : {1e-3, 0.5, 7.0, 1e3})
            CHECK_THAT(lt_eval(mu, s),
                       Catch::Matchers::WithinRel(std::exp(-std::pow(s, r)), 1e-8));
        CHECK(std::isinf(thorin_mass(mu)));
    }
}

TEST_CASE("integrability guard rejects a non-decaying Thorin density") {
    // Constant density: the exponent integral diverges logarithmically.
    CHECK_THROWS_AS(ThorinMeasure({}, [](double) { return 1.0; }), MeasureError);
}

TEST_CASE("h(0+) from the measure matches the gamma density constant") {
    // Gamma(k, theta) density constant at 0+: theta^k / Gamma(k).
    for (double k : {0.5, 1.0, 2.0, 4.0}) {
        for (double theta : {0.7, 2.0}) {
            const ThorinMeasure mu({{theta, k}});
            CHECK_THAT(h_zero(mu), Catch::Matchers::WithinRel(
                                       std::pow(theta, k) / std::tgamma(k), 1e-12));
        }
    }
}

TEST_CASE("measure addition is transform multiplication") {
    const ThorinMeasure a({{1.0, 2.0}});
    const ThorinMeasure b({{3.0, 0.5}});
    const ThorinMeasure sum = add(a, b);
    for (double s : {0.1, 1.0, 10.0})
        CHECK_THAT(lt_eval(sum, s),
                   Catch::Matchers::WithinRel(lt_eval(a, s) * lt_eval(b, s), 1e-12));
    CHECK_THAT(thorin_mass(sum), Catch::Matchers::WithinRel(2.5, 1e-15));
}

TEST_CASE("scaling a variable rescales its transform argument") {
    const double c = 3.5;
    const ThorinMeasure mu({{2.0, 2.0}, {5.0, 1.0}});
    const ThorinMeasure scaled = scale_rv(mu, c);
    for (double s : {0.2, 1.0, 8.0})
        CHECK_THAT(lt_eval(scaled, s), Catch::Matchers::WithinRel(lt_eval(mu, c * s), 1e-12));
    CHECK_THAT(mean_from_thorin(scaled),
               Catch::Matchers::WithinRel(c * mean_from_thorin(mu), 1e-12));
    CHECK_THAT(thorin_mass(scaled), Catch::Matchers::WithinRel(thorin_mass(mu), 1e-15));
    // continuous part: stable law is strictly stable, cX has transform exp(-c^r s^r)
    const double r = 0.5, cc = r * std::sin(r * M_PI) / M_PI;
    const ThorinMeasure stable({}, [=](double u) { return cc * std::pow(u, r - 1.0); });
    const ThorinMeasure stable2 = scale_rv(stable, 2.0);
    for (double s : {0.5, 4.0})
        CHECK_THAT(lt_eval(stable2, s),
                   Catch::Matchers::WithinRel(std::exp(-std::pow(2.0 * s, r)), 1e-8));
}

TEST_CASE("Bernstein evaluation reproduces the Frullani identity") {
    // density m e^(-m s)/s integrates (1 - e^(-sx)) to m log(1 + x/m)
    const double m = 2.0;
    const LevyMeasure tau{[m](double s) { return m * std::exp(-m * s) / s; }};
    for (double x : {0.0, 0.1, 1.0, 25.0})
        CHECK_THAT(bernstein_eval(tau, x),
                   Catch::Matchers::WithinAbs(m * std::log1p(x / m), 1e-9));
    // drift and linear parts pass through untouched
    const LevyMeasure affine{[](double s) { return std::exp(-s); }, 2.0, 3.0};
    CHECK_THAT(bernstein_eval(affine, 1.0),
               Catch::Matchers::WithinAbs(2.0 + 3.0 + 1.0 / 2.0, 1e-9));
}

TEST_CASE("complete monotonicity test separates c.m. from non-c.m. functions") {
    CHECK(is_completely_monotone([](double x) { return std::exp(-x); }).pass);
    CHECK(is_completely_monotone([](double x) { return 1.0 / (1.0 + x); }).pass);
    CHECK(is_completely_monotone([](double x) { return std::pow(x, -0.3); }).pass);
    const auto bad = is_completely_monotone([](double x) { return 2.0 + std::sin(x); });
    REQUIRE_FALSE(bad.pass);
    REQUIRE(bad.witness.has_value());
    CHECK(bad.witness->violation > 0.0);
    // monotone increasing fails at the first difference already
    const auto inc = is_completely_monotone([](double x) { return x; });
    CHECK_FALSE(inc.pass);
}

TEST_CASE("Thorin-Bernstein test accepts gamma-type and rejects shifted-exponential densities") {
    const LevyMeasure gamma_type{[](double s) { return 2.0 * std::exp(-2.0 * s) / s; }};
    CHECK(is_thorin_bernstein(gamma_type).pass);
    // s tau(s) = s e^-s is not completely monotone
    const LevyMeasure not_tb{[](double s) { return std::exp(-s); }};
    CHECK_FALSE(is_thorin_bernstein(not_tb).pass);
}
