#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace ggc {

/// Thrown when an adaptive quadrature fails to reach its tolerance
/// within the evaluation cap. Callers must not treat a partial sum
/// as an answer.
class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

// Gauss-Kronrod 7-15 nodes/weights on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussWeights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelResult {
    double value;
    double error;
};

template <typename F>
PanelResult gk15(F&& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double kron = kKronrodWeights[7] * fc;
    double gauss = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double x = h * kKronrodNodes[i];
        const double fsum = f(c - x) + f(c + x);
        kron += kKronrodWeights[i] * fsum;
        if (i % 2 == 1) gauss += kGaussWeights[i / 2] * fsum;
    }
    kron *= h;
    gauss *= h;
    return {kron, std::abs(kron - gauss)};
}

}  // namespace detail

struct QuadratureOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-300;
    std::size_t max_evals = 1'000'000;
};

/// Adaptive Gauss-Kronrod integration on a finite interval. Throws
/// QuadratureError if the evaluation cap is hit before convergence.
template <typename F>
double integrate(F&& f, double a, double b, QuadratureOptions opts = {}) {
    if (a == b) return 0.0;
    struct Seg {
        double a, b, value, error;
    };
    auto panel = detail::gk15(f, a, b);
    std::vector<Seg> segs{{a, b, panel.value, panel.error}};
    std::size_t evals = 15;
    double total = panel.value;
    double total_err = panel.error;
    while (total_err > opts.rel_tol * std::abs(total) + opts.abs_tol) {
        if (evals >= opts.max_evals)
            throw QuadratureError("adaptive quadrature did not converge within evaluation cap");
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        Seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        auto left = detail::gk15(f, s.a, mid);
        auto right = detail::gk15(f, mid, s.b);
        evals += 30;
        total += left.value + right.value - s.value;
        total_err += left.error + right.error - s.error;
        segs[worst] = {s.a, mid, left.value, left.error};
        segs.push_back({mid, s.b, right.value, right.error});
    }
    if (!std::isfinite(total))
        throw QuadratureError("adaptive quadrature produced a non-finite value");
    return total;
}

/// Integrates f over (0, inf) through the substitution u = e^t over
/// t in [t_lo, t_hi]. Intended for smooth, possibly heavy-tailed
/// integrands in u. Slowly-vanishing heads (such as u^r with small r)
/// need a deeper t_lo than the default: the truncated head mass of
/// u^(r-1)|log u| is of order e^(r t_lo) |t_lo|.
template <typename F>
double integrate_positive_axis(F&& f, double t_lo, double t_hi, QuadratureOptions opts = {}) {
    return integrate(
        [&](double t) {
            const double u = std::exp(t);
            return f(u) * u;
        },
        t_lo, t_hi, opts);
}

template <typename F>
double integrate_positive_axis(F&& f, QuadratureOptions opts = {}) {
    return integrate_positive_axis(std::forward<F>(f), -60.0, 60.0, opts);
}

/// Fixed-order Gauss-Legendre rule; nodes/weights for [a, b].
/// Used where per-sample speed matters more than adaptivity.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    GaussLegendre(int n, double a, double b) {
        nodes.resize(n);
        weights.resize(n);
        // Newton iteration on Legendre polynomials.
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (x * p0 - p1) / (x * x - 1.0);
                const double dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            const double half = 0.5 * (b - a);
            nodes[i] = 0.5 * (a + b) - half * x;
            nodes[n - 1 - i] = 0.5 * (a + b) + half * x;
            weights[i] = weights[n - 1 - i] = 2.0 * half / ((1.0 - x * x) * pp * pp);
        }
    }

    template <typename F>
    double apply(F&& f) const {
        double s = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

}  // namespace ggc
