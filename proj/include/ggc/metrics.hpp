#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ggc/channels.hpp"
#include "ggc/measures.hpp"
#include "ggc/quadrature.hpp"
#include "ggc/rng.hpp"

namespace ggc {

/// Coherent/differential modulation selector for SER formulas.
struct Modulation {
    enum class Kind { dpsk, mpsk } kind = Kind::dpsk;
    int order = 2;  // constellation size for MPSK

    static Modulation dpsk() { return {Kind::dpsk, 2}; }
    static Modulation mpsk(int m) {
        if (m < 2) throw ChannelError("mpsk order must be >= 2");
        return {Kind::mpsk, m};
    }
};

/// Options for the Monte-Carlo fallback used when a channel has
/// neither a closed Laplace transform nor a Thorin measure.
struct McFallback {
    std::uint64_t seed = 2;
    std::size_t n = 1'000'000;
};

/// Laplace-transform evaluator with a fixed resolution order:
/// closed form, then Thorin-measure quadrature, then an empirical
/// transform over one reusable Monte-Carlo sample.
class LtEvaluator {
public:
    explicit LtEvaluator(const ChannelModel& model, McFallback mc = {}) : model_(model) {
        if (lt_of(model_, 0.0)) {
            mode_ = Mode::closed;
            return;
        }
        bool ggc_known = false;
        try {
            auto mu = thorin_of(model_);
            if (mu) {
                measure_ = std::move(mu);
                mode_ = Mode::measure;
                ggc_known = true;
            }
        } catch (const ChannelError&) {
            // non-GGC channel; fall through to sampling
        }
        if (!ggc_known) {
            CounterRng rng(mc.seed, 0);
            samples_ = sample(model_, rng, mc.n);
            mode_ = Mode::sampled;
        }
    }

    double operator()(double s) const {
        switch (mode_) {
            case Mode::closed:
                return *lt_of(model_, s);
            case Mode::measure:
                return lt_eval(*measure_, s);
            case Mode::sampled: {
                double acc = 0.0;
                for (double x : samples_) acc += std::exp(-s * x);
                return acc / static_cast<double>(samples_.size());
            }
        }
        return 0.0;  // unreachable
    }

    bool is_monte_carlo() const { return mode_ == Mode::sampled; }

    /// Method tag for reporting: closed | quadrature | mc.
    const char* method() const {
        switch (mode_) {
            case Mode::closed: return "closed";
            case Mode::measure: return "quadrature";
            case Mode::sampled: return "mc";
        }
        return "closed";
    }

    struct Estimate {
        double value;
        double se;  // zero on the deterministic paths
    };

    /// Value plus standard error; SE is nonzero only on the sampled path.
    Estimate estimate(double s) const {
        if (mode_ != Mode::sampled) return {(*this)(s), 0.0};
        double m1 = 0.0, m2 = 0.0;
        for (double x : samples_) {
            const double e = std::exp(-s * x);
            m1 += e;
            m2 += e * e;
        }
        const double n = static_cast<double>(samples_.size());
        m1 /= n;
        m2 /= n;
        const double var = std::max(0.0, m2 - m1 * m1);
        return {m1, std::sqrt(var / n)};
    }

private:
    enum class Mode { closed, measure, sampled };
    ChannelModel model_;
    Mode mode_ = Mode::closed;
    std::optional<ThorinMeasure> measure_;
    std::vector<double> samples_;
};

// ---------------------------------------------------------------------------
// Average SER and capacity at mean SNR rho (linear scale)

inline double avg_ser_dpsk(const LtEvaluator& phi, double rho) {
    if (!(rho >= 0.0)) throw ChannelError("avg_ser_dpsk requires rho >= 0");
    return 0.5 * phi(rho);
}

inline double avg_ser_dpsk(const ChannelModel& model, double rho, McFallback mc = {}) {
    return avg_ser_dpsk(LtEvaluator(model, mc), rho);
}

inline double avg_ser_mpsk(const LtEvaluator& phi, double rho, int m) {
    if (!(rho >= 0.0)) throw ChannelError("avg_ser_mpsk requires rho >= 0");
    if (m < 2) throw ChannelError("mpsk order must be >= 2");
    const double g = std::sin(M_PI / m) * std::sin(M_PI / m);
    const double upper = (1.0 - 1.0 / m) * M_PI;
    return integrate(
               [&](double theta) {
                   const double s2 = std::sin(theta) * std::sin(theta);
                   return phi(rho * g / s2);
               },
               0.0, upper) /
           M_PI;
}

inline double avg_ser_mpsk(const ChannelModel& model, double rho, int m, McFallback mc = {}) {
    return avg_ser_mpsk(LtEvaluator(model, mc), rho, m);
}

inline double avg_ser(const ChannelModel& model, const Modulation& mod, double rho,
                      McFallback mc = {}) {
    return mod.kind == Modulation::Kind::dpsk ? avg_ser_dpsk(model, rho, mc)
                                              : avg_ser_mpsk(model, rho, mod.order, mc);
}

/// Ergodic capacity E[ln(1 + rho X)] in nats, via the transform
/// identity integral of (e^-s / s)(1 - phi(rho s)) ds.
inline double ergodic_capacity(const LtEvaluator& phi, double rho) {
    if (!(rho > 0.0)) throw ChannelError("ergodic_capacity requires rho > 0");
    return integrate_positive_axis(
        [&](double s) { return std::exp(-s) / s * (1.0 - phi(rho * s)); });
}

inline double ergodic_capacity(const ChannelModel& model, double rho, McFallback mc = {}) {
    return ergodic_capacity(LtEvaluator(model, mc), rho);
}

// ---------------------------------------------------------------------------
// Outage

/// P(X <= x): closed CDF where available, Monte-Carlo otherwise.
inline double outage(const ChannelModel& model, double x, McFallback mc = {}) {
    if (auto c = cdf_of(model, x)) return *c;
    CounterRng rng(mc.seed, 0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < mc.n; ++i)
        if (sample_one(model, rng) <= x) ++hits;
    return static_cast<double>(hits) / static_cast<double>(mc.n);
}

// ---------------------------------------------------------------------------
// Small-argument density constant h(0+) and deep-fade asymptotics

/// h(0+) of the canonical density x^(D-1) h(x): closed form where the
/// family has one, Thorin-measure evaluation otherwise.
inline double h_zero_of(const ChannelModel& model) {
    if (auto h = h_function(model, 0.0)) return *h;
    auto mu = thorin_of(model);
    if (!mu) throw ChannelError("h_zero_of: no closed h and no Thorin measure");
    return h_zero(*mu);
}

/// Best available h(x) near the origin: the exact slowly-varying
/// factor when closed, else the constant h(0+).
inline double h_near_zero(const ChannelModel& model, double x) {
    if (auto h = h_function(model, x)) return *h;
    return h_zero_of(model);
}

/// Modulation constant c_Q in SER ~ c_Q h(1/rho) rho^-D.
inline double coding_constant(double diversity, const Modulation& mod) {
    if (!(diversity > 0.0) || !std::isfinite(diversity))
        throw ChannelError("coding_constant requires finite positive diversity");
    const double d = diversity;
    if (mod.kind == Modulation::Kind::dpsk) return 0.5 * std::tgamma(d);
    const double g = std::sin(M_PI / mod.order) * std::sin(M_PI / mod.order);
    const double upper = (1.0 - 1.0 / mod.order) * M_PI;
    const double angle = integrate(
        [&](double theta) { return std::pow(std::sin(theta), 2.0 * d); }, 0.0, upper);
    return std::tgamma(d) * angle / (M_PI * std::pow(g, d));
}

struct AsymptoticSer {
    double diversity;   // slope D on the log-log plot
    double c_q;         // modulation constant
    double array_gain;  // G_a with SER ~ (G_a rho)^-D for constant h
};

inline AsymptoticSer asymptotic_ser_parts(const ChannelModel& model, const Modulation& mod) {
    const double d = diversity_of(model);
    if (std::isinf(d))
        throw ChannelError("asymptotic SER requires finite diversity");
    const double cq = coding_constant(d, mod);
    const double h0 = h_zero_of(model);
    return {d, cq, std::pow(cq * h0, -1.0 / d)};
}

/// High-SNR SER asymptote c_Q h(1/rho) rho^-D.
inline double asymptotic_ser(const ChannelModel& model, const Modulation& mod, double rho) {
    const double d = diversity_of(model);
    if (std::isinf(d)) throw ChannelError("asymptotic SER requires finite diversity");
    const double cq = coding_constant(d, mod);
    return cq * h_near_zero(model, 1.0 / rho) * std::pow(rho, -d);
}

/// Deep-fade outage asymptote x^D h(x) / D.
inline double outage_asymptotic(const ChannelModel& model, double x) {
    const double d = diversity_of(model);
    if (std::isinf(d)) throw ChannelError("outage asymptote requires finite diversity");
    return std::pow(x, d) * h_near_zero(model, x) / d;
}

// ---------------------------------------------------------------------------
// SNR gain between equal-diversity channels

/// High-SNR horizontal offset in dB between the SER curves of two
/// channels with the same diversity order. Positive means channel 1
/// needs more SNR (channel 2 is better).
inline double snr_gain_db(const ChannelModel& ch1, const ChannelModel& ch2) {
    const double d1 = diversity_of(ch1);
    const double d2 = diversity_of(ch2);
    if (std::isinf(d1) || std::abs(d1 - d2) > 1e-12 * std::max(1.0, std::abs(d1)))
        throw ChannelError("snr_gain_db requires equal finite diversity orders");
    return (10.0 / d1) * std::log10(h_zero_of(ch1) / h_zero_of(ch2));
}

/// Same gain through the Thorin log-moment identity
/// (10/D) log10(e) * integral of log u d(mu1 - mu2). Requires both
/// channels to expose their Thorin measures.
inline double snr_gain_db_from_measures(const ChannelModel& ch1, const ChannelModel& ch2) {
    auto m1 = thorin_of(ch1);
    auto m2 = thorin_of(ch2);
    if (!m1 || !m2) throw ChannelError("snr_gain_db_from_measures requires Thorin measures");
    const double d1 = thorin_mass(*m1);
    const double d2 = thorin_mass(*m2);
    if (std::isinf(d1) || std::abs(d1 - d2) > 1e-9 * std::max(1.0, std::abs(d1)))
        throw ChannelError("snr_gain_db_from_measures requires equal finite Thorin mass");
    return (10.0 / d1) * (std::log10(std::exp(1.0))) * (log_moment(*m1) - log_moment(*m2));
}

// ---------------------------------------------------------------------------
// Moments and the power/mixing decomposition

/// E[X^n] in closed form for integer n >= 1; nullopt when unknown,
/// throws when the moment diverges.
inline std::optional<double> moment_of(const ChannelModel& model, int n) {
    if (n < 1) throw ChannelError("moment_of requires n >= 1");
    const double sn = std::pow(model.scale, n);
    auto base = std::visit(
        [&](const auto& fam) -> std::optional<double> {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>) {
                return std::exp(std::lgamma(fam.m + n) - std::lgamma(fam.m) -
                                n * std::log(fam.m));
            } else if constexpr (std::is_same_v<T, GammaChannel>) {
                return std::exp(std::lgamma(fam.shape + n) - std::lgamma(fam.shape) -
                                n * std::log(fam.rate));
            } else if constexpr (std::is_same_v<T, Hoyt>) {
                // X = a W1^2 + b W2^2 with chi-square(1) factors:
                // E[(W^2)^k] = (2k-1)!!.
                const double q2 = fam.q * fam.q;
                const double a = 1.0 / (1.0 + q2);
                const double b = q2 / (1.0 + q2);
                std::vector<double> dfact(n + 1, 1.0);
                for (int k = 1; k <= n; ++k) dfact[k] = dfact[k - 1] * (2.0 * k - 1.0);
                double sum = 0.0;
                double binom = 1.0;
                for (int j = 0; j <= n; ++j) {
                    sum += binom * std::pow(a, j) * std::pow(b, n - j) * dfact[j] *
                           dfact[n - j];
                    binom = binom * (n - j) / (j + 1.0);
                }
                return sum;
            } else if constexpr (std::is_same_v<T, Lognormal>) {
                return std::exp(n * fam.mu + 0.5 * n * n * fam.sigma * fam.sigma);
            } else if constexpr (std::is_same_v<T, GenGamma>) {
                const double a = fam.eps / fam.r;
                const double an = (fam.eps + n) / fam.r;
                if (an <= 0.0) throw ChannelError("gengamma: moment diverges");
                return std::exp(std::lgamma(an) - std::lgamma(a) - n * std::log(fam.c2) / fam.r);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                const double p = static_cast<double>(n) / fam.r;
                if (fam.k1 + p <= 0.0 || fam.k2 - p <= 0.0)
                    throw ChannelError("pareto: moment diverges");
                return std::exp(std::lgamma(fam.k1 + p) + std::lgamma(fam.k2 - p) -
                                std::lgamma(fam.k1) - std::lgamma(fam.k2));
            } else {
                return std::nullopt;
            }
        },
        model.family);
    if (base) return *base * sn;
    return std::nullopt;
}

struct MixingMoments {
    std::vector<double> channel;  // E[X^n]
    std::vector<double> gamma;    // E[Z^n] of the unit-mean Gamma(D, D) part
    std::vector<double> mixing;   // E[A^n] = E[X^n] / E[Z^n]
};

/// Moment split of a finite-diversity GGC into its unit-mean
/// Gamma(D, D) fast-fading part Z and the mixing variable A:
/// E[X^n] = E[A^n] E[Z^n].
inline MixingMoments mixing_moments(const ChannelModel& model, int n_max) {
    if (n_max < 1) throw ChannelError("mixing_moments requires n_max >= 1");
    const double d = diversity_of(model);
    if (std::isinf(d)) throw ChannelError("mixing_moments requires finite diversity");
    MixingMoments out;
    for (int n = 1; n <= n_max; ++n) {
        auto mx = moment_of(model, n);
        if (!mx) throw ChannelError("mixing_moments: channel moment has no closed form");
        const double mz =
            std::exp(std::lgamma(d + n) - std::lgamma(d) - n * std::log(d));
        out.channel.push_back(*mx);
        out.gamma.push_back(mz);
        out.mixing.push_back(*mx / mz);
    }
    return out;
}

}  // namespace ggc
