#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ggc/channels.hpp"
#include "ggc/systems.hpp"

namespace ggc {

/// Malformed or unknown channel/system spec (maps to CLI exit code 2).
class SpecError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline double require_number(const nlohmann::json& j, const char* field) {
    if (!j.contains(field) || !j[field].is_number())
        throw SpecError(std::string("channel spec: missing or non-numeric field '") + field +
                        "'");
    return j[field].get<double>();
}

inline GenGamma gen_gamma_from_json(const nlohmann::json& j) {
    return GenGamma{require_number(j, "eps"), require_number(j, "r"), require_number(j, "c2")};
}

}  // namespace detail

inline ChannelModel channel_from_json(const nlohmann::json& j);

namespace detail {

inline ChannelModel system_from_json(const nlohmann::json& j) {
    const std::string sys = j["system"].get<std::string>();
    if (sys == "mrc") {
        if (!j.contains("branches") || !j["branches"].is_array() || j["branches"].empty())
            throw SpecError("mrc spec: 'branches' must be a non-empty array");
        std::vector<ChannelModel> branches;
        for (const auto& b : j["branches"]) branches.push_back(channel_from_json(b));
        return mrc(std::move(branches));
    }
    if (sys == "composite") {
        if (!j.contains("multipath") || !j.contains("shadow"))
            throw SpecError("composite spec: needs 'multipath' and 'shadow'");
        return composite(channel_from_json(j["multipath"]), channel_from_json(j["shadow"]));
    }
    throw SpecError("unknown system '" + sys + "'");
}

}  // namespace detail

/// Parses a declarative channel or system spec, e.g.
/// {"family":"nakagami","m":2.5,"normalize":true} or
/// {"system":"mrc","branches":[...]}.
inline ChannelModel channel_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw SpecError("channel spec must be a JSON object");
    ChannelModel model = [&]() -> ChannelModel {
        if (j.contains("system")) return detail::system_from_json(j);
        if (!j.contains("family") || !j["family"].is_string())
            throw SpecError("channel spec: missing string field 'family'");
        const std::string fam = j["family"].get<std::string>();
        try {
            if (fam == "nakagami") return ChannelModel(Nakagami{detail::require_number(j, "m")});
            if (fam == "rayleigh") return rayleigh();
            if (fam == "gamma")
                return ChannelModel(GammaChannel{detail::require_number(j, "shape"),
                                                 detail::require_number(j, "rate")});
            if (fam == "hoyt") return ChannelModel(Hoyt{detail::require_number(j, "q")});
            if (fam == "rician")
                return ChannelModel(
                    Rician{detail::require_number(j, j.contains("K") ? "K" : "k")});
            if (fam == "lognormal")
                return ChannelModel(Lognormal{detail::require_number(j, "mu"),
                                              detail::require_number(j, "sigma")});
            if (fam == "gengamma") return ChannelModel(detail::gen_gamma_from_json(j));
            if (fam == "pareto")
                return ChannelModel(Pareto{detail::require_number(j, "k1"),
                                           detail::require_number(j, "k2"),
                                           detail::require_number(j, "r")});
            if (fam == "stable") return ChannelModel(PositiveStable{detail::require_number(j, "r")});
            if (fam == "product") {
                if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
                    throw SpecError("product spec: 'factors' must be a non-empty array");
                GenGammaProduct p;
                for (const auto& f : j["factors"])
                    p.factors.push_back(detail::gen_gamma_from_json(f));
                return ChannelModel(std::move(p));
            }
        } catch (const ChannelError& e) {
            throw SpecError(std::string("channel spec: ") + e.what());
        }
        throw SpecError("unknown channel family '" + fam + "'");
    }();
    if (j.contains("scale")) {
        const double sc = detail::require_number(j, "scale");
        try {
            model = ChannelModel(model.family, model.scale * sc);
        } catch (const ChannelError& e) {
            throw SpecError(std::string("channel spec: ") + e.what());
        }
    }
    if (j.value("normalize", false)) model = normalize_unit_power(model);
    return model;
}

/// Serializes the model back to the declarative spec format; the
/// emitted JSON re-parses to an identical model.
inline nlohmann::json channel_to_json(const ChannelModel& model) {
    nlohmann::json j = std::visit(
        [](const auto& fam) -> nlohmann::json {
            using T = std::decay_t<decltype(fam)>;
            if constexpr (std::is_same_v<T, Nakagami>)
                return {{"family", "nakagami"}, {"m", fam.m}};
            else if constexpr (std::is_same_v<T, GammaChannel>)
                return {{"family", "gamma"}, {"shape", fam.shape}, {"rate", fam.rate}};
            else if constexpr (std::is_same_v<T, Hoyt>)
                return {{"family", "hoyt"}, {"q", fam.q}};
            else if constexpr (std::is_same_v<T, Rician>)
                return {{"family", "rician"}, {"K", fam.k}};
            else if constexpr (std::is_same_v<T, Lognormal>)
                return {{"family", "lognormal"}, {"mu", fam.mu}, {"sigma", fam.sigma}};
            else if constexpr (std::is_same_v<T, GenGamma>)
                return {{"family", "gengamma"}, {"eps", fam.eps}, {"r", fam.r}, {"c2", fam.c2}};
            else if constexpr (std::is_same_v<T, Pareto>)
                return {{"family", "pareto"}, {"k1", fam.k1}, {"k2", fam.k2}, {"r", fam.r}};
            else if constexpr (std::is_same_v<T, PositiveStable>)
                return {{"family", "stable"}, {"r", fam.r}};
            else if constexpr (std::is_same_v<T, GenGammaProduct>) {
                nlohmann::json factors = nlohmann::json::array();
                for (const auto& g : fam.factors)
                    factors.push_back({{"eps", g.eps}, {"r", g.r}, {"c2", g.c2}});
                return {{"family", "product"}, {"factors", factors}};
            } else if constexpr (std::is_same_v<T, Composite>) {
                return {{"system", "composite"},
                        {"multipath", channel_to_json(fam.parts[0])},
                        {"shadow", channel_to_json(fam.parts[1])}};
            } else {
                static_assert(std::is_same_v<T, Mrc>);
                nlohmann::json branches = nlohmann::json::array();
                for (const auto& b : fam.branches) branches.push_back(channel_to_json(b));
                return {{"system", "mrc"}, {"branches", branches}};
            }
        },
        model.family);
    if (model.scale != 1.0) j["scale"] = model.scale;
    return j;
}

// ---------------------------------------------------------------------------
// Minimal TOML subset: top-level `key = value` pairs, `[section]`
// tables and `[[array]]` array-of-tables, with number / string / bool
// values. Enough for channel and MRC system specs; anything fancier
// should use JSON.

namespace detail {

inline nlohmann::json toml_value(const std::string& raw) {
    std::string v = raw;
    const auto first = v.find_first_not_of(" \t");
    const auto last = v.find_last_not_of(" \t");
    if (first == std::string::npos) throw SpecError("toml: empty value");
    v = v.substr(first, last - first + 1);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
        return v.substr(1, v.size() - 2);
    if (v == "true") return true;
    if (v == "false") return false;
    try {
        std::size_t pos = 0;
        const double num = std::stod(v, &pos);
        if (pos == v.size()) return num;
    } catch (const std::exception&) {
    }
    throw SpecError("toml: unsupported value '" + v + "'");
}

}  // namespace detail

inline nlohmann::json parse_toml_subset(const std::string& text) {
    nlohmann::json root = nlohmann::json::object();
    nlohmann::json* current = &root;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        if (line.size() > 4 && line.substr(0, 2) == "[[" &&
            line.substr(line.size() - 2) == "]]") {
            const std::string name = line.substr(2, line.size() - 4);
            if (!root.contains(name)) root[name] = nlohmann::json::array();
            root[name].push_back(nlohmann::json::object());
            current = &root[name].back();
        } else if (line.front() == '[' && line.back() == ']') {
            const std::string name = line.substr(1, line.size() - 2);
            root[name] = nlohmann::json::object();
            current = &root[name];
        } else {
            const auto eq = line.find('=');
            if (eq == std::string::npos) throw SpecError("toml: expected 'key = value'");
            std::string key = line.substr(0, eq);
            key = key.substr(0, key.find_last_not_of(" \t") + 1);
            (*current)[key] = detail::toml_value(line.substr(eq + 1));
        }
    }
    return root;
}

/// Parses an inline spec string or, with a leading '@', a spec file.
/// Files ending in .toml use the TOML subset; everything else is JSON.
inline ChannelModel channel_from_spec(const std::string& spec) {
    std::string text = spec;
    bool is_toml = false;
    if (!spec.empty() && spec.front() == '@') {
        const std::string path = spec.substr(1);
        std::ifstream in(path);
        if (!in) throw SpecError("cannot open channel spec file '" + path + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
        is_toml = path.size() > 5 && path.substr(path.size() - 5) == ".toml";
    }
    try {
        const nlohmann::json j =
            is_toml ? parse_toml_subset(text) : nlohmann::json::parse(text);
        return channel_from_json(j);
    } catch (const nlohmann::json::parse_error& e) {
        throw SpecError(std::string("channel spec is not valid JSON: ") + e.what());
    }
}

}  // namespace ggc
