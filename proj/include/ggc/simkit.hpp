#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ggc/channels.hpp"
#include "ggc/metrics.hpp"
#include "ggc/quadrature.hpp"
#include "ggc/rng.hpp"

namespace ggc {

enum class SerEstimator { conditional_ser, symbol_count };

/// Monte-Carlo run description. The seed fully determines the output;
/// thread count never changes results (see simulate_ser).
struct SimConfig {
    std::uint64_t seed = 0;
    std::size_t samples_per_point = 100'000;
    std::vector<double> rho_db_grid;
    Modulation modulation = Modulation::dpsk();
    SerEstimator estimator = SerEstimator::conditional_ser;
    unsigned threads = 1;
    std::string label;  // free-form channel echo for serialized output

    void validate() const {
        if (samples_per_point < 1000)
            throw std::invalid_argument("SimConfig: samples_per_point must be >= 1000");
        if (rho_db_grid.empty())
            throw std::invalid_argument("SimConfig: empty rho grid");
        for (std::size_t i = 1; i < rho_db_grid.size(); ++i)
            if (!(rho_db_grid[i] > rho_db_grid[i - 1]))
                throw std::invalid_argument("SimConfig: rho grid must be strictly increasing");
    }
};

struct SerCurve {
    std::vector<double> rho_db;
    std::vector<double> ser;
    std::vector<double> stderr_;
    std::size_t samples_per_point = 0;
    SimConfig config;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double x) { return 10.0 * std::log10(x); }

namespace detail {

// Fixed block size: the (point, block) pair indexes an independent
// RNG substream, so partial sums are a pure function of the seed and
// the ordered reduction below is bit-exact for any thread count.
inline constexpr std::size_t kSimBlock = 4096;

struct BlockSums {
    double sum = 0.0;
    double sum_sq = 0.0;
};

// Conditional SER given instantaneous power x at mean SNR rho.
class ConditionalSer {
public:
    explicit ConditionalSer(const Modulation& mod)
        : mod_(mod), angle_rule_(64, 0.0, (1.0 - 1.0 / mod.order) * M_PI) {}

    double operator()(double rho_x) const {
        if (mod_.kind == Modulation::Kind::dpsk) return 0.5 * std::exp(-rho_x);
        const double g = std::sin(M_PI / mod_.order) * std::sin(M_PI / mod_.order);
        return angle_rule_.apply([&](double theta) {
                   const double s2 = std::sin(theta) * std::sin(theta);
                   return std::exp(-rho_x * g / s2);
               }) /
               M_PI;
    }

private:
    Modulation mod_;
    GaussLegendre angle_rule_;
};

}  // namespace detail

/// Seeded SER simulation over an SNR grid. Samples are drawn in fixed
/// 4096-sample blocks on substream (point, block); blocks may be
/// computed by any number of worker threads but are always reduced in
/// block order, so output is byte-identical for any thread count.
inline SerCurve simulate_ser(const ChannelModel& channel, const SimConfig& config) {
    config.validate();
    const detail::ConditionalSer cond(config.modulation);
    const std::size_t n = config.samples_per_point;
    const std::size_t n_blocks = (n + detail::kSimBlock - 1) / detail::kSimBlock;
    const std::size_t n_points = config.rho_db_grid.size();
    const bool count_symbols = config.estimator == SerEstimator::symbol_count;

    std::vector<detail::BlockSums> sums(n_points * n_blocks);
    std::atomic<std::size_t> next_task{0};
    const std::size_t n_tasks = n_points * n_blocks;

    auto worker = [&]() {
        for (;;) {
            const std::size_t task = next_task.fetch_add(1);
            if (task >= n_tasks) return;
            const std::size_t point = task / n_blocks;
            const std::size_t block = task % n_blocks;
            const double rho = db_to_linear(config.rho_db_grid[point]);
            const std::size_t lo = block * detail::kSimBlock;
            const std::size_t hi = std::min(lo + detail::kSimBlock, n);
            CounterRng rng(config.seed, (static_cast<std::uint64_t>(point) << 32) | block);
            detail::BlockSums b;
            for (std::size_t i = lo; i < hi; ++i) {
                const double x = sample_one(channel, rng);
                const double p = cond(rho * x);
                if (count_symbols) {
                    const double err = rng.uniform() < p ? 1.0 : 0.0;
                    b.sum += err;
                    b.sum_sq += err;
                } else {
                    b.sum += p;
                    b.sum_sq += p * p;
                }
            }
            sums[task] = b;
        }
    };

    const unsigned n_threads = std::max(1u, config.threads);
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    SerCurve curve;
    curve.rho_db = config.rho_db_grid;
    curve.samples_per_point = n;
    curve.config = config;
    for (std::size_t point = 0; point < n_points; ++point) {
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t block = 0; block < n_blocks; ++block) {
            sum += sums[point * n_blocks + block].sum;
            sum_sq += sums[point * n_blocks + block].sum_sq;
        }
        const double nn = static_cast<double>(n);
        const double mean = sum / nn;
        const double var = std::max(0.0, sum_sq / nn - mean * mean);
        curve.ser.push_back(mean);
        curve.stderr_.push_back(std::sqrt(var / nn));
    }
    return curve;
}

/// Negated least-squares slope of log10 SER against log10 rho over a
/// dB window; the diversity-order estimate. Points whose SER is not
/// at least 10x its standard error are rejected as too noisy.
inline double estimate_diversity(const SerCurve& curve, double lo_db, double hi_db) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < curve.rho_db.size(); ++i) {
        const double db = curve.rho_db[i];
        if (db < lo_db || db > hi_db) continue;
        if (!(curve.ser[i] > 0.0) || curve.ser[i] <= 10.0 * curve.stderr_[i])
            throw std::runtime_error("estimate_diversity: window point too noisy (SER <= 10 SE)");
        xs.push_back(db / 10.0);  // log10 of linear SNR
        ys.push_back(std::log10(curve.ser[i]));
    }
    if (xs.size() < 2) throw std::runtime_error("estimate_diversity: window has < 2 grid points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

namespace detail {

// dB SNR at which the (decreasing) curve crosses the target SER,
// log-linear interpolation between the bracketing grid points.
inline double crossing_db(const SerCurve& curve, double target_ser) {
    for (std::size_t i = 1; i < curve.rho_db.size(); ++i) {
        const double a = curve.ser[i - 1];
        const double b = curve.ser[i];
        if (a >= target_ser && b <= target_ser && a > 0.0 && b > 0.0 && a > b) {
            const double la = std::log10(a), lb = std::log10(b), lt = std::log10(target_ser);
            const double w = (la - lt) / (la - lb);
            return curve.rho_db[i - 1] + w * (curve.rho_db[i] - curve.rho_db[i - 1]);
        }
    }
    throw std::runtime_error("estimate_snr_gain: curve does not cross the target SER");
}

}  // namespace detail

/// dB offset between the two curves at the target SER: positive when
/// curve 1 needs more SNR than curve 2 to reach it.
inline double estimate_snr_gain(const SerCurve& c1, const SerCurve& c2, double target_ser) {
    if (!(target_ser > 0.0) || !(target_ser < 1.0))
        throw std::invalid_argument("estimate_snr_gain: target SER must be in (0, 1)");
    return detail::crossing_db(c1, target_ser) - detail::crossing_db(c2, target_ser);
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace detail

inline nlohmann::json config_echo(const SimConfig& config) {
    nlohmann::json j;
    j["seed"] = config.seed;
    j["samples_per_point"] = config.samples_per_point;
    j["modulation"] = config.modulation.kind == Modulation::Kind::dpsk
                          ? std::string("dpsk")
                          : "mpsk:" + std::to_string(config.modulation.order);
    j["estimator"] = config.estimator == SerEstimator::conditional_ser ? "conditional-ser"
                                                                       : "symbol-count";
    if (!config.label.empty()) j["channel"] = config.label;
    return j;
}

/// CSV with the run config echoed as a JSON header comment. All floats
/// are printed with 17 significant digits so equal runs are equal bytes.
inline std::string to_csv(const SerCurve& curve) {
    std::string out = "# " + config_echo(curve.config).dump() + "\n";
    out += "rho_db,ser,stderr,n\n";
    for (std::size_t i = 0; i < curve.rho_db.size(); ++i) {
        out += detail::fmt17(curve.rho_db[i]) + "," + detail::fmt17(curve.ser[i]) + "," +
               detail::fmt17(curve.stderr_[i]) + "," + std::to_string(curve.samples_per_point) +
               "\n";
    }
    return out;
}

inline nlohmann::json to_json(const SerCurve& curve) {
    nlohmann::json j;
    j["config"] = config_echo(curve.config);
    j["rho_db"] = curve.rho_db;
    j["ser"] = curve.ser;
    j["stderr"] = curve.stderr_;
    j["n"] = curve.samples_per_point;
    return j;
}

}  // namespace ggc
