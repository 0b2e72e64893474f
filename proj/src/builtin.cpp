#include "medcrit/builtin.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "medcrit/errors.hpp"
#include "medcrit/factories.hpp"

namespace medcrit {

const std::vector<std::string>& builtin_names() {
    static const std::vector<std::string> names{"t1",          "t2",          "t3",             "pe", "additive",
                                                "separable",   "random-no-l", "random-l", "always-affects", "iv"};
    return names;
}

bool is_builtin(std::string_view name) {
    const auto& n = builtin_names();
    return std::find(n.begin(), n.end(), name) != n.end();
}

namespace {

ParamMap merged(const ParamMap& given, const ParamMap& defaults, std::string_view model) {
    ParamMap out = defaults;
    for (const auto& [k, v] : given) {
        if (!defaults.contains(k)) {
            std::string known;
            for (const auto& [d, _] : defaults) known += (known.empty() ? "" : ", ") + d;
            throw DomainError("unknown parameter \"" + k + "\" for " + std::string(model) + " (known: " + known + ")");
        }
        out[k] = v;
    }
    return out;
}

std::uint64_t seed_of(double v) {
    if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15)
        throw DomainError("seed must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

bool flag(double v, const char* name) {
    if (v != 0.0 && v != 1.0) throw DomainError(std::string(name) + " must be 0 or 1");
    return v == 1.0;
}

}  // namespace

CausalModel builtin_model(std::string_view name, const ParamMap& given) {
    if (name == "t1") {
        auto p = merged(given, {{"pi", 0.5}, {"beta", 0.9}}, name);
        return induced_confounder_scm(p["pi"], p["beta"]);
    }
    if (name == "t2") {
        ParamMap g = given;
        if (!g.contains("pi0") && (g.contains("pi1") || g.contains("pi2")))
            g["pi0"] = 1.0 - (g.contains("pi1") ? g["pi1"] : 0.3) - (g.contains("pi2") ? g["pi2"] : 0.5);
        auto p = merged(g, {{"pi0", 0.2}, {"pi1", 0.3}, {"pi2", 0.5}, {"beta", 0.9}}, name);
        return three_level_confounder_scm(p["pi0"], p["pi1"], p["pi2"], p["beta"]);
    }
    if (name == "t3") {
        auto p = merged(
            given, {{"pi", 0.1}, {"beta1", 0.1}, {"beta2", 0.2}, {"beta3", 0.4}, {"beta4", 0.3}, {"gamma", 0.5}}, name);
        return cross_world_joint(p["pi"], p["beta1"], p["beta2"], p["beta3"], p["beta4"], p["gamma"]);
    }
    if (name == "pe") {
        auto p = merged(given, {{"p", 0.5}}, name);
        return pe_counterexample(p["p"]);
    }
    if (name == "additive") {
        auto p = merged(given, {{"seed", 0}, {"covariate", 0}, {"l", 0}, {"zero_direct", 0}, {"interaction", 1}}, name);
        return additive_outcome_scm({seed_of(p["seed"]), flag(p["covariate"], "covariate"), flag(p["l"], "l"),
                                     flag(p["zero_direct"], "zero_direct"), flag(p["interaction"], "interaction")});
    }
    if (name == "separable") {
        auto p = merged(given, {{"seed", 0}, {"covariate", 0}, {"constant_outcome", 0}}, name);
        return separable_scm({seed_of(p["seed"]), flag(p["covariate"], "covariate"),
                              flag(p["constant_outcome"], "constant_outcome")});
    }
    if (name == "random-no-l" || name == "random-l" || name == "iv") {
        auto p = merged(given, {{"seed", 0}, {"covariate", 0}}, name);
        return random_scm({seed_of(p["seed"]), flag(p["covariate"], "covariate"), name != "random-no-l", name != "iv"});
    }
    if (name == "always-affects") {
        auto p = merged(given, {{"seed", 0}, {"covariate", 0}}, name);
        return always_affects_scm({seed_of(p["seed"]), flag(p["covariate"], "covariate")});
    }
    std::string known;
    for (const auto& n : builtin_names()) known += (known.empty() ? "" : ", ") + n;
    throw DomainError("unknown builtin model \"" + std::string(name) + "\" (known: " + known + ")");
}

ParamMap parse_params(std::string_view text) {
    ParamMap out;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find_first_of(";,", start);
        if (end == std::string_view::npos) end = text.size();
        const auto pair = text.substr(start, end - start);
        start = end + 1;
        if (pair.empty()) continue;
        const auto eq = pair.find('=');
        if (eq == std::string_view::npos || eq == 0)
            throw ParseError("parameter \"" + std::string(pair) + "\" is not of the form key=value");
        const auto value = pair.substr(eq + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
        if (ec != std::errc() || ptr != value.data() + value.size() || value.empty())
            throw ParseError("parameter \"" + std::string(pair) + "\" has a non-numeric value");
        out[std::string(pair.substr(0, eq))] = v;
    }
    return out;
}

}  // namespace medcrit
