#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ggc/measures.hpp"
#include "ggc/quadrature.hpp"
#include "ggc/rng.hpp"
#include "ggc/special.hpp"

namespace ggc {

class ChannelError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class Tri { yes, no, unknown };

/// Distribution-class membership. Containment HCM < GGC < ID is a
/// structural invariant.
struct ClassTags {
    bool is_id = true;
    Tri is_ggc = Tri::unknown;
    Tri is_hcm = Tri::unknown;
};

struct ChannelModel;

struct Nakagami {
    double m;
};
/// Gamma(shape, rate) channel power; Nakagami-m is shape = rate = m.
struct GammaChannel {
    double shape;
    double rate;
};
struct Hoyt {
    double q;
};
struct Rician {
    double k;
};
struct Lognormal {
    double mu;
    double sigma;
};
/// Density c1 x^(eps-1) exp(-c2 x^r); equals Gamma(eps/r, c2)^(1/r).
struct GenGamma {
    double eps;
    double r;
    double c2;
};
/// Density |r| x^(k1 r - 1) (1 + x^r)^(-k1-k2) / B(k2, k1);
/// equals (Gamma(k1,1)/Gamma(k2,1))^(1/r).
struct Pareto {
    double k1;
    double k2;
    double r;
};
/// One-sided stable, Laplace transform exp(-s^r).
struct PositiveStable {
    double r;
};
struct GenGammaProduct {
    std::vector<GenGamma> factors;
};
/// Multipath x shadowing product; parts[0] multipath, parts[1] shadow.
struct Composite {
    std::vector<ChannelModel> parts;
};
/// Maximum ratio combining view: power is the sum of branch powers.
struct Mrc {
    std::vector<ChannelModel> branches;
};

using ChannelFamily =
    std::variant<Nakagami, GammaChannel, Hoyt, Rician, Lognormal, GenGamma, Pareto,
                 PositiveStable, GenGammaProduct, Composite, Mrc>;

/// Immutable channel description: a family plus a linear power scale
/// (X = scale * base variate). Parameter domains are enforced here.
struct ChannelModel {
    ChannelFamily family;
    double scale = 1.0;

    ChannelModel(ChannelFamily f, double sc = 1.0) : family(std::move(f)), scale(sc) {
        validate();
    }

    void validate() const;
};

inline ChannelModel rayleigh() { return ChannelModel(Nakagami{1.0}); }

namespace detail {

inline void validate_gen_gamma(const GenGamma& g) {
    if (g.r == 0.0 || !std::isfinite(g.r)) throw ChannelError("gengamma: r must be nonzero");
    if (!(g.eps / g.r > 0.0)) throw ChannelError("gengamma: eps/r must be positive");
    if (!(g.c2 > 0.0)) throw ChannelError("gengamma: c2 must be positive");
}

}  // namespace detail

inline void ChannelModel::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ChannelError("channel scale must be positive and finite");
    std::visit(
        [](const auto& fam) {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) {
                if (!(fam.m > 0.0)) throw ChannelError("nakagami: m must be positive");
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                if (!(fam.shape > 0.0) || !(fam.rate > 0.0))
                    throw ChannelError("gamma: shape and rate must be positive");
            } else if constexpr (std::is_same_v<T, Hoyt>) {
                if (!(fam.q > 0.0) || fam.q > 1.0) throw ChannelError("hoyt: q must be in (0, 1]");
            } else if constexpr (std::is_same_v<T, Rician>) {
                if (fam.k < 0.0) throw ChannelError("rician: K must be nonnegative");
            } else if constexpr (std::is_same_v<T, Lognormal>) {
                if (!(fam.sigma > 0.0)) throw ChannelError("lognormal: sigma must be positive");
            } else if constexpr (std::is_same_v<T, GenGamma>) {
                detail::validate_gen_gamma(fam);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (!(fam.k1 > 0.0) || !(fam.k2 > 0.0))
                    throw ChannelError("pareto: k1 and k2 must be positive");
                if (fam.r == 0.0 || !std::isfinite(fam.r))
                    throw ChannelError("pareto: r must be nonzero");
            } else if constexpr (std::is_same_v<T, PositiveStable>) {
                if (!(fam.r > 0.0) || fam.r > 1.0)
                    throw ChannelError("stable: r must be in (0, 1]");
            } else if constexpr (std::is_same_v<T, GenGammaProduct>) {
                if (fam.factors.empty()) throw ChannelError("product: needs at least one factor");
                for (const auto& g : fam.factors) detail::validate_gen_gamma(g);
            } else if constexpr (std::is_same_v<T, Composite>) {
                if (fam.parts.size() != 2)
                    throw ChannelError("composite: needs multipath and shadow parts");
            } else if constexpr (std::is_same_v<T, Mrc>) {
                if (fam.branches.empty()) throw ChannelError("mrc: needs at least one branch");
            }
        },
        family);
}

// ---------------------------------------------------------------------------
// Class tags

inline ClassTags class_of(const ChannelModel& model);

namespace detail {

inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::no || b == Tri::no) return Tri::no;
    if (a == Tri::yes && b == Tri::yes) return Tri::yes;
    return Tri::unknown;
}

// Class tags for the generalized gamma, by the exponent r:
//  |r| <= 1: HCM (hence GGC and ID), the classical range.
//  r > 1:    the tail exp(-c x^r) is lighter than every exponential,
//            which rules out infinite divisibility outright.
//  r < -1:   a power q = 1/r in (-1, 0) of a gamma variable; such
//            negative powers are infinitely divisible, but GGC/HCM
//            membership is open.
inline ClassTags gen_gamma_tags(const GenGamma& g) {
    if (std::abs(g.r) <= 1.0) return {true, Tri::yes, Tri::yes};
    if (g.r > 1.0) return {false, Tri::no, Tri::no};
    return {true, Tri::unknown, Tri::unknown};
}

}  // namespace detail

inline ClassTags class_of(const ChannelModel& model) {
    return std::visit(
        [](const auto& fam) -> ClassTags {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami> || std::is_same_v<T, GammaChannel> ||
                          std::is_same_v<T, Lognormal>) {
                return {true, Tri::yes, Tri::yes};
            } else if constexpr (std::is_same_v<T, Hoyt>) {
                // Two distinct Thorin atoms; HCM allows at most one.
                return {true, Tri::yes, Tri::no};
            } else if constexpr (std::is_same_v<T, Rician>) {
                return {true, Tri::no, Tri::no};
            } else if constexpr (std::is_same_v<T, GenGamma>) {
                return detail::gen_gamma_tags(fam);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return {true, Tri::yes, std::abs(fam.r) <= 1.0 ? Tri::yes : Tri::unknown};
            } else if constexpr (std::is_same_v<T, PositiveStable>) {
                return {true, Tri::yes, Tri::unknown};
            } else if constexpr (std::is_same_v<T, GenGammaProduct>) {
                // Independent products of HCM factors stay HCM; any
                // factor outside the HCM range voids the closure.
                bool id = true;
                Tri ggc = Tri::yes, hcm = Tri::yes;
                for (const auto& g : fam.factors) {
                    const ClassTags t = detail::gen_gamma_tags(g);
                    id = id && t.is_id;
                    ggc = detail::tri_and(ggc, t.is_ggc);
                    hcm = detail::tri_and(hcm, t.is_hcm);
                }
                if (hcm == Tri::yes) ggc = Tri::yes;
                return {id, ggc, hcm};
            } else if constexpr (std::is_same_v<T, Composite>) {
                const ClassTags a = class_of(fam.parts[0]);
                const ClassTags b = class_of(fam.parts[1]);
                // GGC x HCM -> GGC closure, in either role.
                Tri ggc = Tri::unknown;
                if ((a.is_ggc == Tri::yes && b.is_hcm == Tri::yes) ||
                    (b.is_ggc == Tri::yes && a.is_hcm == Tri::yes))
                    ggc = Tri::yes;
                Tri hcm = detail::tri_and(a.is_hcm, b.is_hcm);
                if (hcm == Tri::yes) ggc = Tri::yes;
                return {a.is_id && b.is_id, ggc, hcm};
            } else {
                static_assert(std::is_same_v<T, Mrc>);
                bool id = true;
                Tri ggc = Tri::yes;
                for (const auto& br : fam.branches) {
                    const ClassTags t = class_of(br);
                    id = id && t.is_id;
                    ggc = detail::tri_and(ggc, t.is_ggc);
                }
                return {id, ggc, Tri::unknown};
            }
        },
        model.family);
}

// ---------------------------------------------------------------------------
// Diversity order

inline double diversity_of(const ChannelModel& model) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) return fam.m;
            else if constexpr (std::is_same_v<T, GammaChannel>) return fam.shape;
            else if constexpr (std::is_same_v<T, Hoyt>) return 1.0;
            else if constexpr (std::is_same_v<T, Rician>) return 1.0;
            else if constexpr (std::is_same_v<T, Lognormal>) return inf;
            else if constexpr (std::is_same_v<T, GenGamma>)
                return fam.r > 0.0 ? fam.eps : inf;
            else if constexpr (std::is_same_v<T, Pareto>)
                return fam.r > 0.0 ? fam.k1 * fam.r : fam.k2 * -fam.r;
            else if constexpr (std::is_same_v<T, PositiveStable>) return inf;
            else if constexpr (std::is_same_v<T, GenGammaProduct>) {
                double d = inf;
                for (const auto& g : fam.factors)
                    if (g.r > 0.0) d = std::min(d, g.eps);
                return d;
            } else if constexpr (std::is_same_v<T, Composite>) {
                return std::min(diversity_of(fam.parts[0]), diversity_of(fam.parts[1]));
            } else {
                static_assert(std::is_same_v<T, Mrc>);
                double d = 0.0;
                for (const auto& br : fam.branches) d += diversity_of(br);
                return d;
            }
        },
        model.family);
}

// ---------------------------------------------------------------------------
// Thorin / Levy data

namespace detail {

inline std::vector<ThorinAtom> hoyt_atoms(double q) {
    const double q2 = q * q;
    // Masses (1/2, 1/2) at the two chi-square rates; this reproduces
    // the closed Laplace transform exactly (total mass 1).
    return {{(1.0 + q2) / 2.0, 0.5}, {(1.0 + q2) / (2.0 * q2), 0.5}};
}

}  // namespace detail

/// Thorin measure where a closed form is known; nullopt for GGC
/// families whose measure is unknown. Throws on non-GGC channels.
inline std::optional<ThorinMeasure> thorin_of(const ChannelModel& model) {
    auto base = std::visit(
        [](const auto& fam) -> std::optional<ThorinMeasure> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) {
                return ThorinMeasure({{fam.m, fam.m}});
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                return ThorinMeasure({{fam.rate, fam.shape}});
            } else if constexpr (std::is_same_v<T, Hoyt>) {
                return ThorinMeasure(detail::hoyt_atoms(fam.q));
            } else if constexpr (std::is_same_v<T, Rician>) {
                throw ChannelError("thorin_of: Rician channel power is not a GGC");
            } else if constexpr (std::is_same_v<T, PositiveStable>) {
                if (fam.r >= 1.0) return std::nullopt;  // degenerate point mass
                const double c = fam.r * std::sin(fam.r * M_PI) / M_PI;
                const double rm1 = fam.r - 1.0;
                return ThorinMeasure({}, [c, rm1](double u) { return c * std::pow(u, rm1); });
            } else if constexpr (std::is_same_v<T, Mrc>) {
                ThorinMeasure sum;
                for (const auto& br : fam.branches) {
                    auto m = thorin_of(br);
                    if (!m) return std::nullopt;
                    sum = add(sum, *m);
                }
                return sum;
            } else {
                return std::nullopt;  // unknown for lognormal/gengamma/pareto/product/composite
            }
        },
        model.family);
    if (base && model.scale != 1.0) return scale_rv(*base, model.scale);
    return base;
}

/// Levy density where stated: Rician and Gamma-type channels.
inline std::optional<LevyMeasure> levy_of(const ChannelModel& model) {
    std::optional<LevyMeasure> base = std::visit(
        [](const auto& fam) -> std::optional<LevyMeasure> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Rician>) {
                const double k = fam.k;
                return LevyMeasure{[k](double s) {
                    return std::exp(-(1.0 + k) * s) * (k * (1.0 + k) + 1.0 / s);
                }};
            } else if constexpr (std::is_same_v<T, Nakagami>) {
                const double m = fam.m;
                // Frullani density of m log(1 + s/m).
                return LevyMeasure{[m](double s) { return m * std::exp(-m * s) / s; }};
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                const double k = fam.shape, th = fam.rate;
                return LevyMeasure{[k, th](double s) { return k * std::exp(-th * s) / s; }};
            } else {
                return std::nullopt;
            }
        },
        model.family);
    if (base && model.scale != 1.0) {
        const double c = model.scale;
        auto d = base->density;
        base->density = [d, c](double s) { return d(s / c) / c; };
        base->linear *= c;
    }
    return base;
}

// ---------------------------------------------------------------------------
// Closed-form transforms and densities

/// Closed-form Laplace transform E[exp(-sX)] where available.
inline std::optional<double> lt_of(const ChannelModel& model, double s) {
    if (s < 0.0) throw ChannelError("lt_of requires s >= 0");
    const double ss = s * model.scale;
    return std::visit(
        [&](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) {
                return std::exp(-fam.m * std::log1p(ss / fam.m));
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                return std::exp(-fam.shape * std::log1p(ss / fam.rate));
            } else if constexpr (std::is_same_v<T, Hoyt>) {
                double g = 0.0;
                for (const auto& a : detail::hoyt_atoms(fam.q))
                    g += a.mass * std::log1p(ss / a.rate);
                return std::exp(-g);
            } else if constexpr (std::is_same_v<T, Rician>) {
                const double k1 = 1.0 + fam.k;
                return k1 / (k1 + ss) * std::exp(-fam.k * ss / (k1 + ss));
            } else if constexpr (std::is_same_v<T, PositiveStable>) {
                return std::exp(-std::pow(ss, fam.r));
            } else if constexpr (std::is_same_v<T, Mrc>) {
                double prod = 1.0;
                for (const auto& br : fam.branches) {
                    auto phi = lt_of(br, ss);
                    if (!phi) return std::nullopt;
                    prod *= *phi;
                }
                return prod;
            } else {
                return std::nullopt;
            }
        },
        model.family);
}

/// Closed-form density; nullopt for stable, products, composites.
inline std::optional<double> pdf_of(const ChannelModel& model, double x) {
    if (!(x > 0.0)) throw ChannelError("pdf_of requires x > 0");
    const double xb = x / model.scale;
    auto base = std::visit(
        [&](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) {
                const double m = fam.m;
                return std::exp(m * std::log(m) + (m - 1.0) * std::log(xb) - m * xb -
                                std::lgamma(m));
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                return std::exp(fam.shape * std::log(fam.rate) +
                                (fam.shape - 1.0) * std::log(xb) - fam.rate * xb -
                                std::lgamma(fam.shape));
            } else if constexpr (std::is_same_v<T, Hoyt>) {
                const double q2 = fam.q * fam.q;
                const double a = (1.0 + q2) / (2.0 * fam.q);
                const double b = (1.0 - q2 * q2) / (4.0 * q2);
                const double c = (1.0 + q2) * (1.0 + q2) / (4.0 * q2);
                return a * std::exp(-c * xb + log_bessel_i0(b * xb));
            } else if constexpr (std::is_same_v<T, Rician>) {
                const double k = fam.k, k1 = 1.0 + fam.k;
                return k1 * std::exp(-k - k1 * xb +
                                     log_bessel_i0(2.0 * std::sqrt(k * k1 * xb)));
            } else if constexpr (std::is_same_v<T, Lognormal>) {
                const double lx = std::log(xb);
                const double z = (lx - fam.mu) / fam.sigma;
                return std::exp(-0.5 * z * z) / (xb * fam.sigma * std::sqrt(2.0 * M_PI));
            } else if constexpr (std::is_same_v<T, GenGamma>) {
                const double a = fam.eps / fam.r;
                const double log_c1 =
                    std::log(std::abs(fam.r)) + a * std::log(fam.c2) - std::lgamma(a);
                return std::exp(log_c1 + (fam.eps - 1.0) * std::log(xb) -
                                fam.c2 * std::pow(xb, fam.r));
            } else if constexpr (std::is_same_v<T, Pareto>) {
                const double xr = std::pow(xb, fam.r);
                return std::exp(std::log(std::abs(fam.r)) - log_beta(fam.k2, fam.k1) +
                                (fam.k1 * fam.r - 1.0) * std::log(xb) -
                                (fam.k1 + fam.k2) * std::log1p(xr));
            } else {
                return std::nullopt;
            }
        },
        model.family);
    if (base) return *base / model.scale;
    return std::nullopt;
}

/// CDF (outage) in closed special-function form where available.
inline std::optional<double> cdf_of(const ChannelModel& model, double x) {
    if (x <= 0.0) return 0.0;
    const double xb = x / model.scale;
    return std::visit(
        [&](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) {
                return gamma_p(fam.m, fam.m * xb);
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                return gamma_p(fam.shape, fam.rate * xb);
            } else if constexpr (std::is_same_v<T, Lognormal>) {
                return 0.5 * std::erfc(-(std::log(xb) - fam.mu) / (fam.sigma * std::sqrt(2.0)));
            } else if constexpr (std::is_same_v<T, GenGamma>) {
                const double a = fam.eps / fam.r;
                const double y = fam.c2 * std::pow(xb, fam.r);
                return fam.r > 0.0 ? gamma_p(a, y) : gamma_q(a, y);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                const double xr = std::pow(xb, fam.r);
                const double z = xr / (1.0 + xr);
                return fam.r > 0.0 ? beta_inc(fam.k1, fam.k2, z)
                                   : 1.0 - beta_inc(fam.k1, fam.k2, z);
            } else {
                return std::nullopt;
            }
        },
        model.family);
}

/// Slowly varying factor h of the canonical density x^(D-1) h(x).
/// Known for Gamma-type, generalized gamma and Pareto channels.
inline std::optional<double> h_function(const ChannelModel& model, double x) {
    const double d = diversity_of(model);
    if (std::isinf(d)) throw ChannelError("h_function requires finite diversity");
    if (!(x >= 0.0)) throw ChannelError("h_function requires x >= 0");
    const double xb = x / model.scale;
    auto base = std::visit(
        [&](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) {
                return std::exp(fam.m * std::log(fam.m) - fam.m * xb - std::lgamma(fam.m));
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                return std::exp(fam.shape * std::log(fam.rate) - fam.rate * xb -
                                std::lgamma(fam.shape));
            } else if constexpr (std::is_same_v<T, GenGamma>) {
                const double a = fam.eps / fam.r;
                const double log_c1 =
                    std::log(std::abs(fam.r)) + a * std::log(fam.c2) - std::lgamma(a);
                return std::exp(log_c1 - fam.c2 * std::pow(xb, fam.r));
            } else if constexpr (std::is_same_v<T, Pareto>) {
                const double xr = std::pow(xb, fam.r);
                return std::exp(std::log(std::abs(fam.r)) - log_beta(fam.k2, fam.k1) -
                                (fam.k1 + fam.k2) * std::log1p(xr));
            } else {
                return std::nullopt;
            }
        },
        model.family);
    if (base) return std::pow(model.scale, -d) * *base;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Moments and normalization

/// Closed-form mean; nullopt when no closed form exists, throws when
/// the mean diverges.
inline std::optional<double> mean_of(const ChannelModel& model) {
    auto base = std::visit(
        [](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) return 1.0;
            else if constexpr (std::is_same_v<T, GammaChannel>) return fam.shape / fam.rate;
            else if constexpr (std::is_same_v<T, Hoyt>) return 1.0;
            else if constexpr (std::is_same_v<T, Rician>) return 1.0;
            else if constexpr (std::is_same_v<T, Lognormal>)
                return std::exp(fam.mu + 0.5 * fam.sigma * fam.sigma);
            else if constexpr (std::is_same_v<T, GenGamma>) {
                const double a = fam.eps / fam.r;
                if (a + 1.0 / fam.r <= 0.0) throw ChannelError("gengamma: mean diverges");
                return std::exp(std::lgamma(a + 1.0 / fam.r) - std::lgamma(a) -
                                std::log(fam.c2) / fam.r);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                const double p = 1.0 / fam.r;
                if (fam.k1 + p <= 0.0 || fam.k2 - p <= 0.0)
                    throw ChannelError("pareto: mean diverges");
                return std::exp(std::lgamma(fam.k1 + p) + std::lgamma(fam.k2 - p) -
                                std::lgamma(fam.k1) - std::lgamma(fam.k2));
            } else if constexpr (std::is_same_v<T, PositiveStable>) {
                if (fam.r < 1.0) throw ChannelError("stable: mean diverges for r < 1");
                return 1.0;
            } else if constexpr (std::is_same_v<T, GenGammaProduct>) {
                double prod = 1.0;
                for (const auto& g : fam.factors) {
                    auto m = mean_of(ChannelModel(g));
                    prod *= *m;
                }
                return prod;
            } else if constexpr (std::is_same_v<T, Composite>) {
                auto a = mean_of(fam.parts[0]);
                auto b = mean_of(fam.parts[1]);
                if (!a || !b) return std::nullopt;
                return *a * *b;
            } else {
                static_assert(std::is_same_v<T, Mrc>);
                double sum = 0.0;
                for (const auto& br : fam.branches) {
                    auto m = mean_of(br);
                    if (!m) return std::nullopt;
                    sum += *m;
                }
                return sum;
            }
        },
        model.family);
    if (base) return *base * model.scale;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sampling

inline double sample_one(const ChannelModel& model, CounterRng& rng) {
    const double base = std::visit(
        [&](const auto& fam) -> double {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) {
                return rng.gamma(fam.m, fam.m);
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                return rng.gamma(fam.shape, fam.rate);
            } else if constexpr (std::is_same_v<T, Hoyt>) {
                double w1, w2;
                rng.normal_pair(w1, w2);
                const double q2 = fam.q * fam.q;
                return (w1 * w1 + q2 * w2 * w2) / (1.0 + q2);
            } else if constexpr (std::is_same_v<T, Rician>) {
                double g1, g2;
                rng.normal_pair(g1, g2);
                const double mu = std::sqrt(fam.k / (1.0 + fam.k));
                const double sd = std::sqrt(0.5 / (1.0 + fam.k));
                const double re = mu + sd * g1;
                const double im = sd * g2;
                return re * re + im * im;
            } else if constexpr (std::is_same_v<T, Lognormal>) {
                return rng.lognormal(fam.mu, fam.sigma);
            } else if constexpr (std::is_same_v<T, GenGamma>) {
                return std::pow(rng.gamma(fam.eps / fam.r, fam.c2), 1.0 / fam.r);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                const double x1 = rng.gamma(fam.k1, 1.0);
                const double x2 = rng.gamma(fam.k2, 1.0);
                return std::pow(x1 / x2, 1.0 / fam.r);
            } else if constexpr (std::is_same_v<T, PositiveStable>) {
                return rng.positive_stable(fam.r);
            } else if constexpr (std::is_same_v<T, GenGammaProduct>) {
                double prod = 1.0;
                for (const auto& g : fam.factors)
                    prod *= std::pow(rng.gamma(g.eps / g.r, g.c2), 1.0 / g.r);
                return prod;
            } else if constexpr (std::is_same_v<T, Composite>) {
                return sample_one(fam.parts[0], rng) * sample_one(fam.parts[1], rng);
            } else {
                static_assert(std::is_same_v<T, Mrc>);
                double sum = 0.0;
                for (const auto& br : fam.branches) sum += sample_one(br, rng);
                return sum;
            }
        },
        model.family);
    return base * model.scale;
}

inline std::vector<double> sample(const ChannelModel& model, CounterRng& rng, std::size_t n) {
    if (n < 1) throw ChannelError("sample requires n >= 1");
    std::vector<double> out(n);
    for (auto& x : out) x = sample_one(model, rng);
    return out;
}

/// Returns the model rescaled to unit average power, analytically
/// where the mean has a closed form and by Monte-Carlo calibration
/// (n = 1e7) otherwise. Throws on infinite mean.
inline ChannelModel normalize_unit_power(const ChannelModel& model, std::uint64_t mc_seed = 1) {
    double mean;
    if (auto m = mean_of(model)) {
        mean = *m;
    } else {
        CounterRng rng(mc_seed, 0);
        const std::size_t n = 10'000'000;
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += sample_one(model, rng);
        mean = acc / static_cast<double>(n);
    }
    if (!std::isfinite(mean) || mean <= 0.0)
        throw ChannelError("normalize_unit_power: mean not positive finite");
    return ChannelModel(model.family, model.scale / mean);
}

}  // namespace ggc
