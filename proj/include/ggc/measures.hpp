#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "ggc/quadrature.hpp"

namespace ggc {

inline constexpr double kInfiniteMass = std::numeric_limits<double>::infinity();

/// Rate/mass atom of a Thorin measure. Rate u is the rate parameter of
/// the gamma convolution factor; mass w its shape.
struct ThorinAtom {
    double rate;
    double mass;
};

class MeasureError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

namespace detail {

struct TailIntegral {
    double value;
    bool diverged;
};

/// Integrates g over (0, inf) in u with the u = e^t substitution,
/// segment by segment. Divergence is flagged when an outermost
/// segment fails to decay relative to its neighbor.
template <typename G>
TailIntegral integrate_with_tail_test(G&& g) {
    static constexpr double kEdges[] = {-30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0};
    auto in_t = [&](double t) {
        const double u = std::exp(t);
        return g(u) * u;
    };
    double segs[6];
    double total = 0.0;
    QuadratureOptions opts;
    opts.rel_tol = 1e-9;
    opts.abs_tol = 1e-16;
    for (int i = 0; i < 6; ++i) {
        segs[i] = integrate(in_t, kEdges[i], kEdges[i + 1], opts);
        total += segs[i];
    }
    const double floor = 1e-12 * (std::abs(total) + 1.0);
    const bool upper_bad = std::abs(segs[5]) > floor && std::abs(segs[5]) > 0.5 * std::abs(segs[4]);
    const bool lower_bad = std::abs(segs[0]) > floor && std::abs(segs[0]) > 0.5 * std::abs(segs[1]);
    return {total, upper_bad || lower_bad};
}

}  // namespace detail

/// Canonical GGC descriptor: point atoms plus an optional continuous
/// density on (0, inf). Immutable after construction.
class ThorinMeasure {
public:
    using Density = std::function<double(double)>;

    ThorinMeasure() = default;

    explicit ThorinMeasure(std::vector<ThorinAtom> atoms, Density continuous = {})
        : atoms_(std::move(atoms)), continuous_(std::move(continuous)) {
        for (const auto& a : atoms_) {
            if (!(a.rate > 0.0) || !std::isfinite(a.rate))
                throw MeasureError("Thorin atom rate must be positive and finite");
            if (!(a.mass > 0.0) || !std::isfinite(a.mass))
                throw MeasureError("Thorin atom mass must be positive and finite");
        }
        merge_atoms();
        if (continuous_) check_integrability();
    }

    const std::vector<ThorinAtom>& atoms() const { return atoms_; }
    bool has_continuous() const { return static_cast<bool>(continuous_); }
    double continuous_density(double u) const { return continuous_ ? continuous_(u) : 0.0; }

private:
    // Equal-rate atoms are merged (abs tolerance 1e-12) to keep a
    // deterministic canonical form.
    void merge_atoms() {
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const ThorinAtom& a, const ThorinAtom& b) { return a.rate < b.rate; });
        std::vector<ThorinAtom> merged;
        for (const auto& a : atoms_) {
            if (!merged.empty() && std::abs(merged.back().rate - a.rate) <= 1e-12)
                merged.back().mass += a.mass;
            else
                merged.push_back(a);
        }
        atoms_ = std::move(merged);
    }

    // Integrability of the exponent integral log(1+s/u) mu(du):
    // |log u| near 0 and 1/u in the tail must both be mu-integrable.
    void check_integrability() const {
        auto head = detail::integrate_with_tail_test([&](double u) {
            return u < 1.0 ? std::abs(std::log(u)) * continuous_(u) : 0.0;
        });
        auto tail = detail::integrate_with_tail_test([&](double u) {
            return u > 1.0 ? continuous_(u) / u : 0.0;
        });
        if (head.diverged || tail.diverged)
            throw MeasureError("continuous Thorin density violates the integrability condition");
    }

    std::vector<ThorinAtom> atoms_;
    Density continuous_;
};

/// Total mass of the measure; infinity sentinel when the continuous
/// integral diverges (tail-growth test).
inline double thorin_mass(const ThorinMeasure& mu) {
    double mass = 0.0;
    for (const auto& a : mu.atoms()) mass += a.mass;
    if (mu.has_continuous()) {
        auto r = detail::integrate_with_tail_test([&](double u) { return mu.continuous_density(u); });
        if (r.diverged) return kInfiniteMass;
        mass += r.value;
    }
    return mass;
}

/// E[X] = integral of 1/u over the measure; throws when divergent.
inline double mean_from_thorin(const ThorinMeasure& mu) {
    double mean = 0.0;
    for (const auto& a : mu.atoms()) mean += a.mass / a.rate;
    if (mu.has_continuous()) {
        auto r = detail::integrate_with_tail_test(
            [&](double u) { return mu.continuous_density(u) / u; });
        if (r.diverged) throw MeasureError("mean undefined: integral of 1/u diverges");
        mean += r.value;
    }
    return mean;
}

/// Laplace exponent gamma(s) = integral of log(1+s/u) over the measure.
inline double laplace_exponent(const ThorinMeasure& mu, double s) {
    if (s < 0.0) throw MeasureError("laplace_exponent requires s >= 0");
    if (s == 0.0) return 0.0;
    double g = 0.0;
    for (const auto& a : mu.atoms()) g += a.mass * std::log1p(s / a.rate);
    if (mu.has_continuous()) {
        // Deep head window: slowly-vanishing densities such as the
        // positive-stable u^(r-1) with r = 1/4 leave O(1e-6) truncated
        // head mass at the default depth.
        g += integrate_positive_axis(
            [&](double u) { return mu.continuous_density(u) * std::log1p(s / u); }, -150.0,
            60.0);
    }
    return g;
}

/// Laplace transform exp(-gamma(s)) of the GGC the measure describes.
inline double lt_eval(const ThorinMeasure& mu, double s) {
    return std::exp(-laplace_exponent(mu, s));
}

/// Log-moment of the measure, used by h(0+) and the SNR-gain identity.
/// Returns +inf when the tail log-moment diverges.
inline double log_moment(const ThorinMeasure& mu) {
    double lm = 0.0;
    for (const auto& a : mu.atoms()) lm += a.mass * std::log(a.rate);
    if (mu.has_continuous()) {
        auto tail = detail::integrate_with_tail_test([&](double u) {
            return u > 1.0 ? std::log(u) * mu.continuous_density(u) : 0.0;
        });
        if (tail.diverged) return std::numeric_limits<double>::infinity();
        auto head = detail::integrate_with_tail_test([&](double u) {
            return u < 1.0 ? std::log(u) * mu.continuous_density(u) : 0.0;
        });
        if (head.diverged) return -std::numeric_limits<double>::infinity();
        lm += head.value + tail.value;
    }
    return lm;
}

/// h(0+) of the canonical density x^(D-1) h(x); infinity sentinel when
/// the tail log-moment diverges. Requires finite Thorin mass.
inline double h_zero(const ThorinMeasure& mu) {
    const double d = thorin_mass(mu);
    if (std::isinf(d)) throw MeasureError("h_zero requires finite Thorin mass");
    const double lm = log_moment(mu);
    if (std::isinf(lm) && lm > 0.0) return std::numeric_limits<double>::infinity();
    return std::exp(lm - std::lgamma(d));
}

/// Measure of the sum of two independent GGCs.
inline ThorinMeasure add(const ThorinMeasure& a, const ThorinMeasure& b) {
    std::vector<ThorinAtom> atoms = a.atoms();
    atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
    ThorinMeasure::Density dens;
    if (a.has_continuous() && b.has_continuous())
        dens = [a, b](double u) { return a.continuous_density(u) + b.continuous_density(u); };
    else if (a.has_continuous())
        dens = [a](double u) { return a.continuous_density(u); };
    else if (b.has_continuous())
        dens = [b](double u) { return b.continuous_density(u); };
    return ThorinMeasure(std::move(atoms), std::move(dens));
}

/// Measure of cX from the measure of X: rates shrink by c, masses are
/// unchanged (from phi_{cX}(s) = phi_X(cs)).
inline ThorinMeasure scale_rv(const ThorinMeasure& mu, double c) {
    if (!(c > 0.0)) throw MeasureError("scale_rv requires c > 0");
    std::vector<ThorinAtom> atoms;
    atoms.reserve(mu.atoms().size());
    for (const auto& a : mu.atoms()) atoms.push_back({a.rate / c, a.mass});
    ThorinMeasure::Density dens;
    if (mu.has_continuous())
        dens = [mu, c](double u) { return mu.continuous_density(u * c) * c; };
    return ThorinMeasure(std::move(atoms), std::move(dens));
}

/// Levy density representation of a Bernstein function
/// a + bx + integral (1 - e^(-sx)) tau(s) ds.
struct LevyMeasure {
    std::function<double(double)> density;
    double drift = 0.0;
    double linear = 0.0;
};

inline double bernstein_eval(const LevyMeasure& tau, double x) {
    if (x < 0.0) throw MeasureError("bernstein_eval requires x >= 0");
    double g = tau.drift + tau.linear * x;
    if (x == 0.0) return g;
    g += integrate_positive_axis(
        [&](double s) { return -std::expm1(-s * x) * tau.density(s); });
    return g;
}

/// Result of the numerical complete-monotonicity test.
struct CmVerdict {
    struct Witness {
        double x;
        double h;
        int order;
        double violation;  // magnitude of the wrong-signed difference
    };
    bool pass = true;
    std::optional<Witness> witness;
    int max_order_tested = 0;
};

inline std::vector<double> geometric_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    const double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
    return g;
}

/// Hausdorff-style alternating finite-difference test:
/// (-1)^k Delta_h^k f(x) >= -tol |f(x)| on all tested (x, h, k).
inline CmVerdict is_completely_monotone(
    const std::function<double(double)>& f,
    std::vector<double> x_grid = geometric_grid(1e-3, 1e2, 50),
    std::vector<double> h_grid = {1e-2, 1e-1, 1.0}, int max_order = 6,
    double tol = 1e-9) {
    CmVerdict verdict;
    verdict.max_order_tested = max_order;
    // Binomial coefficients up to max_order.
    std::vector<std::vector<double>> binom(max_order + 1);
    for (int k = 0; k <= max_order; ++k) {
        binom[k].assign(k + 1, 1.0);
        for (int j = 1; j < k; ++j) binom[k][j] = binom[k - 1][j - 1] + binom[k - 1][j];
    }
    for (double x : x_grid) {
        const double fx = f(x);
        if (!std::isfinite(fx)) throw MeasureError("c.m. test: non-finite evaluation");
        for (double h : h_grid) {
            for (int k = 1; k <= max_order; ++k) {
                double delta = 0.0;
                for (int j = 0; j <= k; ++j) {
                    const double fj = f(x + j * h);
                    if (!std::isfinite(fj)) throw MeasureError("c.m. test: non-finite evaluation");
                    delta += ((k - j) % 2 == 0 ? 1.0 : -1.0) * binom[k][j] * fj;
                }
                const double signed_delta = (k % 2 == 0 ? delta : -delta);
                if (signed_delta < -tol * std::abs(fx)) {
                    const double violation = -signed_delta;
                    if (!verdict.witness || violation > verdict.witness->violation)
                        verdict.witness = {x, h, k, violation};
                    verdict.pass = false;
                }
            }
        }
    }
    return verdict;
}

/// A Bernstein function is Thorin-Bernstein iff s * tau(s) is c.m.
inline CmVerdict is_thorin_bernstein(const LevyMeasure& tau) {
    if (!tau.density) throw MeasureError("is_thorin_bernstein requires a Levy density");
    return is_completely_monotone([&](double s) { return s * tau.density(s); });
}

}  // namespace ggc
