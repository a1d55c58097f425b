// Command-line front end: describe channels, evaluate performance
// metrics, run stochastic-order comparisons, and regenerate the
// reference experiment data as CSV.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ggc/config.hpp"
#include "ggc/metrics.hpp"
#include "ggc/ordering.hpp"
#include "ggc/reproduce.hpp"
#include "ggc/simkit.hpp"
#include "ggc/systems.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

// Exit codes: 0 success, 2 bad spec, 3 precondition violation,
// 4 numerical non-convergence.
constexpr int kExitSpecError = 2;
constexpr int kExitPrecondition = 3;
constexpr int kExitNumerical = 4;

using nlohmann::json;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        if (text.empty() || text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + out_path + "'");
    out << text;
}

const char* tri_name(ggc::Tri t) {
    switch (t) {
        case ggc::Tri::yes: return "yes";
        case ggc::Tri::no: return "no";
        default: return "unknown";
    }
}

json number_or_tag(double x) {
    if (std::isinf(x)) return "infinite";
    return x;
}

ggc::Modulation parse_mod(const std::string& mod) {
    if (mod == "dpsk") return ggc::Modulation::dpsk();
    if (mod.rfind("mpsk:", 0) == 0) {
        const int m = std::stoi(mod.substr(5));
        return ggc::Modulation::mpsk(m);
    }
    throw ggc::SpecError("unknown modulation '" + mod + "' (expected dpsk or mpsk:M)");
}

// ---------------------------------------------------------------------------

int cmd_describe(const std::string& spec, const std::string& format,
                 const std::string& out_path) {
    const ggc::ChannelModel ch = ggc::channel_from_spec(spec);
    const ggc::ClassTags tags = ggc::class_of(ch);

    json rep;
    rep["spec"] = ggc::channel_to_json(ch);
    rep["class"] = {{"id", tags.is_id}, {"ggc", tri_name(tags.is_ggc)},
                    {"hcm", tri_name(tags.is_hcm)}};
    rep["diversity"] = number_or_tag(ggc::diversity_of(ch));
    if (auto m = ggc::mean_of(ch))
        rep["mean"] = *m;
    else
        rep["mean"] = "unknown";
    try {
        if (auto mu = ggc::thorin_of(ch)) {
            json atoms = json::array();
            for (const auto& a : mu->atoms()) atoms.push_back({{"rate", a.rate}, {"mass", a.mass}});
            rep["thorin"] = {{"atoms", atoms}, {"continuous", mu->has_continuous()},
                             {"mass", number_or_tag(ggc::thorin_mass(*mu))}};
        } else {
            rep["thorin"] = "unknown";
        }
    } catch (const ggc::ChannelError&) {
        rep["thorin"] = "not-a-ggc";
    }
    const double d = ggc::diversity_of(ch);
    if (std::isfinite(d)) {
        try {
            rep["h0"] = ggc::h_zero_of(ch);
        } catch (const ggc::ChannelError&) {
            rep["h0"] = "unknown";
        }
    } else {
        rep["h0"] = "unknown";
    }

    if (format == "json") {
        emit(rep.dump(2), out_path);
    } else {
        std::string text;
        text += "spec:      " + rep["spec"].dump() + "\n";
        text += "class:     ID=" + std::string(tags.is_id ? "yes" : "no") +
                " GGC=" + tri_name(tags.is_ggc) + " HCM=" + tri_name(tags.is_hcm) + "\n";
        text += "diversity: " + rep["diversity"].dump() + "\n";
        text += "mean:      " + rep["mean"].dump() + "\n";
        text += "thorin:    " + rep["thorin"].dump() + "\n";
        text += "h(0+):     " + rep["h0"].dump() + "\n";
        emit(text, out_path);
    }
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_metric(const std::string& spec, const std::string& metric, const std::string& mod_str,
               double rho_start, double rho_stop, double rho_step, double threshold,
               std::size_t samples, std::uint64_t seed, const std::string& format,
               const std::string& out_path) {
    const ggc::ChannelModel ch = ggc::channel_from_spec(spec);
    ggc::McFallback mc{seed, samples};

    if (metric == "outage") {
        const double value = ggc::outage(ch, threshold, mc);
        const bool closed = ggc::cdf_of(ch, threshold).has_value();
        if (format == "json") {
            emit(json({{"metric", "outage"}, {"threshold", threshold}, {"value", value},
                       {"method", closed ? "closed" : "mc"}})
                     .dump(2),
                 out_path);
        } else {
            emit("threshold,value,method\n" + ggc::detail::fmt17(threshold) + "," +
                     ggc::detail::fmt17(value) + "," + (closed ? "closed" : "mc") + "\n",
                 out_path);
        }
        return 0;
    }

    const ggc::LtEvaluator phi(ch, mc);
    const auto grid = ggc::db_grid(rho_start, rho_stop, rho_step);
    json rows = json::array();
    std::string csv = "# " + ggc::channel_to_json(ch).dump() + "\nrho_db,value,method\n";
    for (double db : grid) {
        const double rho = ggc::db_to_linear(db);
        double value;
        if (metric == "ser-dpsk") {
            value = ggc::avg_ser_dpsk(phi, rho);
        } else if (metric == "ser-mpsk") {
            const ggc::Modulation mod = parse_mod(mod_str);
            if (mod.kind != ggc::Modulation::Kind::mpsk)
                throw ggc::SpecError("ser-mpsk requires --mod mpsk:M");
            value = ggc::avg_ser_mpsk(phi, rho, mod.order);
        } else if (metric == "capacity") {
            value = ggc::ergodic_capacity(phi, rho);
        } else {
            throw ggc::SpecError("unknown metric '" + metric + "'");
        }
        rows.push_back({{"rho_db", db}, {"value", value}, {"method", phi.method()}});
        csv += ggc::detail::fmt17(db) + "," + ggc::detail::fmt17(value) + "," + phi.method() +
               "\n";
    }
    if (format == "json")
        emit(json({{"channel", ggc::channel_to_json(ch)}, {"metric", metric}, {"rows", rows}})
                 .dump(2),
             out_path);
    else
        emit(csv, out_path);
    return 0;
}

// ---------------------------------------------------------------------------

json verdict_to_json(const ggc::OrderVerdict& v) {
    json j;
    j["verdict"] = v.holds_on_grid ? "holds-on-grid" : "fails";
    j["grid"] = {{"lo", v.grid.front()}, {"hi", v.grid.back()}, {"points", v.grid.size()}};
    if (v.counterexample)
        j["counterexample"] = {{"point", v.counterexample->point},
                               {"left", v.counterexample->left},
                               {"right", v.counterexample->right},
                               {"margin", v.counterexample->margin}};
    return j;
}

int cmd_compare(const std::string& spec1, const std::string& spec2, const std::string& mode,
                double rho_start, double rho_stop, double rho_step, std::size_t samples,
                std::uint64_t seed, const std::string& out_path) {
    const ggc::ChannelModel ch1 = ggc::channel_from_spec(spec1);
    json rep;
    rep["mode"] = mode;
    rep["channel1"] = ggc::channel_to_json(ch1);

    if (mode == "benchmark") {
        // Convex-order bound against Nakagami(D) on the dB grid, DPSK.
        const ggc::ChannelModel bench = ggc::system_benchmark(ch1);
        rep["benchmark"] = ggc::channel_to_json(bench);
        double min_gap = std::numeric_limits<double>::infinity();
        bool holds = true;
        for (double db : ggc::db_grid(rho_start, rho_stop, rho_step)) {
            const double gap = ggc::benchmark_gap(ch1, ggc::BenchmarkMetric::ser_dpsk,
                                                  ggc::db_to_linear(db), 4, {seed, samples});
            min_gap = std::min(min_gap, gap);
            if (gap < 0.0) holds = false;
        }
        rep["holds"] = holds;
        rep["min_gap"] = min_gap;
        emit(rep.dump(2), out_path);
        return 0;
    }

    const ggc::ChannelModel ch2 = ggc::channel_from_spec(spec2);
    rep["channel2"] = ggc::channel_to_json(ch2);
    auto grid = ggc::geometric_grid(1e-3, 1e3, 200);
    if (mode == "lt-order") {
        rep.update(verdict_to_json(ggc::lt_order_check(ch1, ch2, grid, {seed, samples})));
    } else if (mode == "shannon-order") {
        rep.update(verdict_to_json(ggc::shannon_order_check(ch1, ch2, grid)));
    } else if (mode == "snr-gain") {
        rep["snr_gain_db"] = ggc::snr_gain_db(ch1, ch2);
        try {
            rep["snr_gain_db_via_measures"] = ggc::snr_gain_db_from_measures(ch1, ch2);
        } catch (const ggc::ChannelError&) {
            // measure route unavailable; h(0+) route already reported
        }
    } else {
        throw ggc::SpecError("unknown compare mode '" + mode + "'");
    }
    emit(rep.dump(2), out_path);
    return 0;
}

// ---------------------------------------------------------------------------

int cmd_reproduce(const std::string& figure, std::uint64_t seed, const std::string& scale_str,
                  unsigned threads, const std::string& out_dir) {
    const ggc::RunScale scale =
        scale_str == "full" ? ggc::RunScale::full : ggc::RunScale::desk;
    const auto t0 = std::chrono::steady_clock::now();
    const ggc::FigureData data = ggc::run_figure(figure, seed, scale, threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    json manifest;
    manifest["command"] = "reproduce";
    manifest["figure"] = figure;
    manifest["seed"] = seed;
    manifest["scale"] = scale_str;
    manifest["version"] = kVersion;
    manifest["wall_clock_s"] = secs;
    manifest["summary"] = data.summary;
    json outputs = json::array();
    for (const auto& [stem, csv] : data.files) {
        const std::string path = out_dir + "/" + stem + ".csv";
        emit(csv, path);
        outputs.push_back(path);
    }
    manifest["outputs"] = outputs;
    emit(manifest.dump(2), out_dir + "/" + figure + "_manifest.json");
    std::cout << manifest.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fading-channel analysis toolkit: gamma-convolution channel models, "
                 "transform-domain performance metrics, stochastic ordering, Monte-Carlo "
                 "simulation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string channel, channel2, format = "csv", out_path, mod = "dpsk";
    std::string metric, mode, figure, scale = "desk";
    double rho_start = 0.0, rho_stop = 30.0, rho_step = 2.5, threshold = 0.1;
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    auto* describe = app.add_subcommand("describe", "Classify a channel and report its measure");
    describe->add_option("--channel", channel, "channel spec (inline JSON or @file)")->required();
    describe->add_option("--format", format, "json or text");
    describe->add_option("--out", out_path, "output file (default stdout)");

    auto* metric_cmd = app.add_subcommand("metric", "Evaluate a performance metric over SNR");
    metric_cmd->add_option("--channel", channel)->required();
    metric_cmd->add_option("--metric", metric, "ser-dpsk | ser-mpsk | capacity | outage")
        ->required();
    metric_cmd->add_option("--mod", mod, "dpsk or mpsk:M");
    metric_cmd->add_option("--rho-db-start", rho_start);
    metric_cmd->add_option("--rho-db-stop", rho_stop);
    metric_cmd->add_option("--rho-db-step", rho_step);
    metric_cmd->add_option("--threshold", threshold, "outage threshold x");
    metric_cmd->add_option("--samples", samples, "Monte-Carlo fallback sample count");
    metric_cmd->add_option("--seed", seed);
    metric_cmd->add_option("--format", format, "csv or json");
    metric_cmd->add_option("--out", out_path);

    auto* compare = app.add_subcommand("compare", "Stochastic-order and gain comparisons");
    compare->add_option("--channel", channel)->required();
    compare->add_option("--channel2", channel2);
    compare->add_option("--mode", mode, "lt-order | shannon-order | snr-gain | benchmark")
        ->required();
    compare->add_option("--rho-db-start", rho_start);
    compare->add_option("--rho-db-stop", rho_stop);
    compare->add_option("--rho-db-step", rho_step);
    compare->add_option("--samples", samples);
    compare->add_option("--seed", seed);
    compare->add_option("--out", out_path);

    auto* reproduce = app.add_subcommand("reproduce", "Regenerate reference experiment data");
    reproduce->add_option("--figure", figure, "fig1 | fig2 | fig34")->required();
    reproduce->add_option("--seed", seed);
    reproduce->add_option("--scale", scale, "desk or full");
    reproduce->add_option("--threads", threads);
    reproduce->add_option("--out", out_path, "output directory (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitSpecError;
    }

    try {
        if (describe->parsed()) return cmd_describe(channel, format, out_path);
        if (metric_cmd->parsed())
            return cmd_metric(channel, metric, mod, rho_start, rho_stop, rho_step, threshold,
                              samples, seed, format, out_path);
        if (compare->parsed()) {
            if (mode != "benchmark" && channel2.empty())
                throw ggc::SpecError("compare mode '" + mode + "' requires --channel2");
            return cmd_compare(channel, channel2, mode, rho_start, rho_stop, rho_step, samples,
                               seed, out_path);
        }
        if (reproduce->parsed())
            return cmd_reproduce(figure, seed, scale, threads,
                                 out_path.empty() ? "." : out_path);
    } catch (const ggc::SpecError& e) {
        std::cerr << "spec error: " << e.what() << "\n";
        return kExitSpecError;
    } catch (const ggc::QuadratureError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        // Distinguish iteration-limit failures in the special-function
        // evaluators from ordinary precondition violations.
        const std::string what = e.what();
        if (what.find("converge") != std::string::npos) {
            std::cerr << "numerical error: " << what << "\n";
            return kExitNumerical;
        }
        std::cerr << "error: " << what << "\n";
        return kExitPrecondition;
    }
    return 0;
}
