#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "medcrit.h"

namespace {

struct Options {
    std::string format = "table";
    double tol = 1e-9;
    std::string source;
    std::string params;
    std::vector<std::string> extras;
};

// "--key value" and "--key=value" pairs left over by the parser become
// "key=value" entries appended to --params.
std::string collect_params(const std::string& params, const std::vector<std::string>& extras) {
    std::string out = params;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        std::string key = extras[i];
        if (key.rfind("--", 0) != 0) throw CLI::ExtrasError({key});
        key = key.substr(2);
        std::string value;
        if (const auto eq = key.find('='); eq != std::string::npos) {
            value = key.substr(eq + 1);
            key = key.substr(0, eq);
        } else if (i + 1 < extras.size()) {
            value = extras[++i];
        } else {
            throw CLI::ExtrasError({extras[i]});
        }
        out += (out.empty() ? "" : ";") + key + "=" + value;
    }
    return out;
}

int report(medcrit_status s) {
    if (s != MEDCRIT_OK) std::fprintf(stderr, "medcrit: %s: %s\n", medcrit_status_name(s), medcrit_last_error());
    return static_cast<int>(s);
}

int print(medcrit_table* table, const Options& o) {
    if (table) std::fputs(medcrit_table_render(table, o.format == "csv" ? MEDCRIT_FORMAT_CSV : MEDCRIT_FORMAT_TEXT), stdout);
    medcrit_table_free(table);
    return 0;
}

medcrit_status open_model(const Options& o, medcrit_model** model) {
    const std::string params = collect_params(o.params, o.extras);
    const bool path_like = o.source.find('/') != std::string::npos || o.source.ends_with(".json");
    if (path_like || std::filesystem::exists(o.source)) {
        if (!params.empty()) {
            std::fprintf(stderr, "medcrit: parameters apply to builtin models only\n");
            return MEDCRIT_INVALID_ARGUMENT;
        }
        return medcrit_model_load_file(o.source.c_str(), model);
    }
    return medcrit_model_builtin(o.source.c_str(), params.c_str(), model);
}

using ModelCommand = std::function<medcrit_status(const medcrit_model*, const Options&, medcrit_table**)>;

int run_model_command(const Options& o, const ModelCommand& command) {
    medcrit_model* model = nullptr;
    medcrit_status s = open_model(o, &model);
    if (s != MEDCRIT_OK) return report(s);
    medcrit_table* table = nullptr;
    s = command(model, o, &table);
    medcrit_model_free(model);
    print(table, o);
    return report(s);
}

CLI::App* model_subcommand(CLI::App& app, const char* name, const char* help, Options& o) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("model", o.source, "model file (JSON) or builtin name (t1, t2, t3, pe, additive, ...)")->required();
    sub->add_option("--params", o.params, "builtin parameters as k=v;k=v (or pass --k v)");
    sub->allow_extras();
    return sub;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mediation effects, identification and null-criteria checks for discrete causal models"};
    app.require_subcommand(1);
    Options o;

    auto* validate = model_subcommand(app, "validate", "check a model's invariants", o);
    auto* effects = model_subcommand(app, "effects", "enumerate effect measures", o);
    auto* identify = model_subcommand(app, "identify", "identification functionals and assumption checks", o);
    auto* criteria = model_subcommand(app, "criteria", "null and monotonicity statuses with criterion verdicts", o);
    criteria->add_option("--tol", o.tol, "tolerance for zero effects")->check(CLI::NonNegativeNumber);

    std::string check;
    auto* reproduce = app.add_subcommand("reproduce", "compare closed forms against enumeration");
    reproduce->add_option("check", check, "T1, T2, T3, S1 or PE")->required();
    reproduce->add_option("--params", o.params, "parameters as k=v;k=v (or pass --k v)");
    reproduce->allow_extras();

    std::string family, effect = "NIE";
    medcrit_sweep_options sw = medcrit_sweep_defaults();
    bool violations_only = false;
    auto* sweep = app.add_subcommand("sweep", "evaluate an effect over a model family");
    sweep->add_option("family", family, "t1, t2, t3, pe, additive, additive-l, separable, random-no-l, "
                                        "random-l, iv or always-affects")
        ->required();
    sweep->add_option("--effect", effect, "NIE, NIE^R, PE(m), NIE^R_L, NIE^R_La or H")->capture_default_str();
    sweep->add_option("--grid", sw.grid, "points per axis")->capture_default_str()->check(CLI::PositiveNumber);
    sweep->add_option("--lo", sw.lo, "lower end of each axis")->capture_default_str();
    sweep->add_option("--hi", sw.hi, "upper end of each axis")->capture_default_str();
    sweep->add_option("--draws", sw.draws, "models drawn for seeded families")->capture_default_str()->check(CLI::NonNegativeNumber);
    sweep->add_option("--seed", sw.seed, "first seed for seeded families")->capture_default_str();
    sweep->add_option("--tol", sw.tolerance, "tolerance for zero effects")->capture_default_str()->check(CLI::NonNegativeNumber);
    sweep->add_flag("--violations-only", violations_only, "keep refuting rows, largest |effect| first");

    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string out_path;
    auto* sample = model_subcommand(app, "sample", "draw an i.i.d. dataset as CSV", o);
    sample->add_option("--n", n, "number of rows")->capture_default_str();
    sample->add_option("--seed", seed, "random seed")->capture_default_str();
    sample->add_option("--out", out_path, "output CSV file")->required();

    auto* exporter = model_subcommand(app, "export", "write a model as a JSON document", o);
    exporter->add_option("--out", out_path, "output JSON file")->required();

    std::string data, estimand;
    std::size_t n_boot = 1000;
    int a_star = 0, a = 1;
    auto* estimate = app.add_subcommand("estimate", "plug-in estimate with a percentile bootstrap interval");
    estimate->add_option("data", data, "CSV file with columns C...,A[,L],M,Y")->required();
    estimate->add_option("--estimand", estimand, "psi_te, psi_cde(m), psi_pe(m), psi_nie, psi_nie_r_L or psi_nie_rl")
        ->required();
    estimate->add_option("--n-boot", n_boot, "bootstrap replicates (0: none)")->capture_default_str();
    estimate->add_option("--seed", seed, "random seed")->capture_default_str();
    estimate->add_option("--a-star", a_star, "reference exposure level")->capture_default_str();
    estimate->add_option("--a", a, "active exposure level")->capture_default_str();

    for (auto* sub : app.get_subcommands({}))
        sub->add_option("--format", o.format, "output format: table or csv")->check(CLI::IsMember({"table", "csv"}));

    try {
        app.parse(argc, argv);
        for (auto* sub : app.get_subcommands()) o.extras = sub->remaining();

        if (validate->parsed()) {
            return run_model_command(o, [](const medcrit_model* m, const Options&, medcrit_table** t) {
                return medcrit_validate(m, t);
            });
        }
        if (effects->parsed()) {
            return run_model_command(o, [](const medcrit_model* m, const Options&, medcrit_table** t) {
                return medcrit_effects(m, t);
            });
        }
        if (identify->parsed()) {
            return run_model_command(o, [](const medcrit_model* m, const Options&, medcrit_table** t) {
                return medcrit_identify(m, t);
            });
        }
        if (criteria->parsed()) {
            return run_model_command(o, [](const medcrit_model* m, const Options& opt, medcrit_table** t) {
                return medcrit_criteria(m, opt.tol, t);
            });
        }
        if (reproduce->parsed()) {
            const std::string params = collect_params(o.params, o.extras);
            medcrit_table* table = nullptr;
            const medcrit_status s = medcrit_reproduce(check.c_str(), params.c_str(), &table);
            print(table, o);
            return report(s);
        }
        if (sweep->parsed()) {
            sw.violations_only = violations_only ? 1 : 0;
            medcrit_table* table = nullptr;
            const medcrit_status s = medcrit_sweep(family.c_str(), effect.c_str(), &sw, &table);
            print(table, o);
            return report(s);
        }
        if (sample->parsed()) {
            return run_model_command(o, [&](const medcrit_model* m, const Options&, medcrit_table** t) {
                return medcrit_sample(m, n, seed, out_path.c_str(), t);
            });
        }
        if (exporter->parsed()) {
            medcrit_model* model = nullptr;
            medcrit_status s = open_model(o, &model);
            if (s == MEDCRIT_OK) s = medcrit_model_write_json(model, out_path.c_str());
            medcrit_model_free(model);
            return report(s);
        }
        if (estimate->parsed()) {
            medcrit_table* table = nullptr;
            const medcrit_status s =
                medcrit_estimate(data.c_str(), estimand.c_str(), n_boot, seed, a_star, a, &table);
            print(table, o);
            return report(s);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(MEDCRIT_INVALID_ARGUMENT);
    }
    return static_cast<int>(MEDCRIT_INVALID_ARGUMENT);
}
