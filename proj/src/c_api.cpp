#include "medcrit.h"

#include <atomic>
#include <exception>
#include <fstream>
#include <new>
#include <string>
#include <variant>

#include "medcrit/builtin.hpp"
#include "medcrit/criteria.hpp"
#include "medcrit/engine.hpp"
#include "medcrit/errors.hpp"
#include "medcrit/sample.hpp"
#include "medcrit/scm_json.hpp"
#include "medcrit/table.hpp"

struct medcrit_model {
    medcrit::CausalModel model;
};

struct medcrit_table {
    medcrit::Table table;
    std::vector<std::vector<std::string>> text;
    std::string rendered;
};

namespace {

thread_local std::string last_error;
std::atomic<std::size_t> unit_cap{medcrit::kDefaultUnitCap};

medcrit_status fail(medcrit_status s, const std::string& message) {
    last_error = message;
    return s;
}

// Maps the exception in flight to a status and records its message.
medcrit_status translate() {
    try {
        throw;
    } catch (const medcrit::ReproductionFailure& e) {
        return fail(MEDCRIT_REPRODUCTION_FAILED, e.what());
    } catch (const medcrit::InvalidModelError& e) {
        return fail(MEDCRIT_INVALID_MODEL, e.what());
    } catch (const medcrit::ParseError& e) {
        return fail(MEDCRIT_PARSE_ERROR, e.what());
    } catch (const medcrit::DomainError& e) {
        return fail(MEDCRIT_DOMAIN_ERROR, e.what());
    } catch (const medcrit::DegenerateStratumError& e) {
        return fail(MEDCRIT_DEGENERATE_STRATUM, e.what());
    } catch (const medcrit::SizeError& e) {
        return fail(MEDCRIT_SIZE_ERROR, e.what());
    } catch (const medcrit::InternalConsistencyError& e) {
        return fail(MEDCRIT_INTERNAL_CONSISTENCY, e.what());
    } catch (const medcrit::IoError& e) {
        return fail(MEDCRIT_IO_ERROR, e.what());
    } catch (const std::bad_alloc&) {
        return fail(MEDCRIT_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return fail(MEDCRIT_INTERNAL_ERROR, e.what());
    } catch (...) {
        return fail(MEDCRIT_INTERNAL_ERROR, "unknown error");
    }
}

template <class F>
medcrit_status guarded(F&& f) {
    try {
        last_error.clear();
        return f();
    } catch (...) {
        return translate();
    }
}

medcrit_table* wrap(medcrit::Table t) {
    auto* out = new medcrit_table{std::move(t), {}, {}};
    for (const auto& row : out->table.rows) {
        std::vector<std::string> line;
        for (const auto& c : row) line.push_back(medcrit::format_cell(c));
        out->text.push_back(std::move(line));
    }
    return out;
}

bool missing(const void* p) { return p == nullptr; }

medcrit::ParamMap params_of(const char* text) { return text ? medcrit::parse_params(text) : medcrit::ParamMap{}; }

}  // namespace

extern "C" {

const char* medcrit_version(void) { return "0.1.0"; }

const char* medcrit_status_name(medcrit_status status) {
    switch (status) {
        case MEDCRIT_OK: return "ok";
        case MEDCRIT_INVALID_MODEL: return "invalid model";
        case MEDCRIT_INVALID_ARGUMENT: return "invalid argument";
        case MEDCRIT_PARSE_ERROR: return "parse error";
        case MEDCRIT_DOMAIN_ERROR: return "domain error";
        case MEDCRIT_DEGENERATE_STRATUM: return "degenerate stratum";
        case MEDCRIT_SIZE_ERROR: return "size error";
        case MEDCRIT_REPRODUCTION_FAILED: return "reproduction failed";
        case MEDCRIT_INTERNAL_CONSISTENCY: return "internal consistency";
        case MEDCRIT_IO_ERROR: return "i/o error";
        case MEDCRIT_INTERNAL_ERROR: return "internal error";
    }
    return "unknown status";
}

const char* medcrit_last_error(void) { return last_error.c_str(); }

medcrit_status medcrit_model_load_file(const char* path, medcrit_model** out) {
    if (missing(path) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new medcrit_model{medcrit::load_model_file(path)};
        return MEDCRIT_OK;
    });
}

medcrit_status medcrit_model_from_json(const char* text, medcrit_model** out) {
    if (missing(text) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new medcrit_model{medcrit::parse_model_json(text)};
        return MEDCRIT_OK;
    });
}

medcrit_status medcrit_model_builtin(const char* name, const char* params, medcrit_model** out) {
    if (missing(name) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = new medcrit_model{medcrit::builtin_model(name, params_of(params))};
        return MEDCRIT_OK;
    });
}

const char* medcrit_model_name(const medcrit_model* model) {
    return model ? medcrit::model_name(model->model).c_str() : "";
}

medcrit_status medcrit_model_write_json(const medcrit_model* model, const char* path) {
    if (missing(model) || missing(path)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ofstream out(path);
        if (!out) throw medcrit::IoError(std::string("cannot open ") + path + " for writing");
        out << medcrit::model_to_json(model->model) << '\n';
        if (!out.flush()) throw medcrit::IoError(std::string("write to ") + path + " failed");
        return MEDCRIT_OK;
    });
}

void medcrit_model_free(medcrit_model* model) { delete model; }

medcrit_status medcrit_validate(const medcrit_model* model, medcrit_table** out) {
    if (missing(model) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        const auto violations = medcrit::validate(model->model);
        medcrit::Table t = medcrit::key_value_table();
        t.add("model", medcrit::model_name(model->model));
        const bool scm = std::holds_alternative<medcrit::Scm>(model->model);
        t.add("kind", std::string(scm ? "scm" : "ffrcistg"));
        if (violations.empty() && scm)
            t.add("shape", std::string(medcrit::shape_name(medcrit::shape_of(std::get<medcrit::Scm>(model->model)))));
        t.add("valid", violations.empty());
        for (const auto& v : violations) t.add("violation", v.to_string());
        *out = wrap(std::move(t));
        if (violations.empty()) return MEDCRIT_OK;
        return fail(MEDCRIT_INVALID_MODEL, std::to_string(violations.size()) + " violation(s); first: " +
                                               violations.front().to_string());
    });
}

void medcrit_set_unit_cap(size_t cap) { unit_cap = cap; }

medcrit_status medcrit_effects(const medcrit_model* model, medcrit_table** out) {
    if (missing(model) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        const auto t = medcrit::counterfactual_table(model->model, unit_cap);
        *out = wrap(medcrit::effects_table(medcrit::effect_report(t)));
        return MEDCRIT_OK;
    });
}

medcrit_status medcrit_identify(const medcrit_model* model, medcrit_table** out) {
    if (missing(model) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        *out = wrap(medcrit::identify_table(medcrit::counterfactual_table(model->model, unit_cap)));
        return MEDCRIT_OK;
    });
}

medcrit_status medcrit_criteria(const medcrit_model* model, double tolerance, medcrit_table** out) {
    if (missing(model) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    if (!(tolerance >= 0.0)) return fail(MEDCRIT_INVALID_ARGUMENT, "tolerance must be nonnegative");
    *out = nullptr;
    return guarded([&] {
        const auto t = medcrit::counterfactual_table(model->model, unit_cap);
        const auto status = medcrit::null_status(t);
        const auto report = medcrit::effect_report(t);
        *out = wrap(medcrit::criteria_table(status, medcrit::criterion_verdicts(status, report, tolerance)));
        return MEDCRIT_OK;
    });
}

medcrit_status medcrit_reproduce(const char* check, const char* params, medcrit_table** out) {
    if (missing(check) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        try {
            *out = wrap(medcrit::reproduction_table(medcrit::reproduce(medcrit::parse_closed_form(check), params_of(params))));
        } catch (const medcrit::ReproductionFailure& e) {
            *out = wrap(medcrit::reproduction_table(e.record()));
            throw;
        }
        return MEDCRIT_OK;
    });
}

medcrit_sweep_options medcrit_sweep_defaults(void) {
    const medcrit::SearchOptions d;
    return {d.grid, d.lo, d.hi, d.draws, d.seed, d.tolerance, 0};
}

medcrit_status medcrit_sweep(const char* family, const char* effect, const medcrit_sweep_options* options,
                             medcrit_table** out) {
    if (missing(family) || missing(effect) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    const medcrit_sweep_options o = options ? *options : medcrit_sweep_defaults();
    if (o.grid < 1 || o.draws < 0 || !(o.lo <= o.hi) || !(o.tolerance >= 0.0))
        return fail(MEDCRIT_INVALID_ARGUMENT, "sweep options out of range");
    return guarded([&] {
        const medcrit::SearchOptions so{o.grid, o.lo, o.hi, o.draws, o.seed, o.tolerance};
        const auto& fam = medcrit::find_family(family);
        const auto selector = medcrit::parse_selector(effect);
        const auto rows = o.violations_only ? medcrit::search_violations(fam, so, selector)
                                            : medcrit::sweep(fam, so, selector);
        *out = wrap(medcrit::sweep_table(rows));
        return MEDCRIT_OK;
    });
}

medcrit_status medcrit_sample(const medcrit_model* model, size_t n, uint64_t seed, const char* csv_path,
                              medcrit_table** out) {
    if (missing(model) || missing(csv_path)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    if (out) *out = nullptr;
    return guarded([&] {
        const auto ds = medcrit::draw_samples(model->model, n, seed);
        medcrit::write_csv_file(ds, csv_path);
        if (out) {
            medcrit::Table t = medcrit::key_value_table();
            t.add("model", ds.source);
            t.add("n", static_cast<std::int64_t>(ds.rows.size()));
            t.add("seed", std::to_string(seed));
            t.add("out", std::string(csv_path));
            *out = wrap(std::move(t));
        }
        return MEDCRIT_OK;
    });
}

medcrit_status medcrit_estimate(const char* csv_path, const char* estimand, size_t n_boot, uint64_t seed, int a_star,
                                int a, medcrit_table** out) {
    if (missing(csv_path) || missing(estimand) || missing(out)) return fail(MEDCRIT_INVALID_ARGUMENT, "null argument");
    if (a_star == a) return fail(MEDCRIT_INVALID_ARGUMENT, "a* and a must differ");
    *out = nullptr;
    return guarded([&] {
        const auto ds = medcrit::read_csv_file(csv_path, {a_star, a});
        const auto est = medcrit::estimate(ds, medcrit::parse_estimand(estimand), n_boot, seed);
        *out = wrap(medcrit::estimate_table(est, ds.rows.size()));
        return MEDCRIT_OK;
    });
}

size_t medcrit_table_rows(const medcrit_table* table) { return table ? table->text.size() : 0; }

size_t medcrit_table_columns(const medcrit_table* table) { return table ? table->table.columns.size() : 0; }

const char* medcrit_table_column_name(const medcrit_table* table, size_t column) {
    if (!table || column >= table->table.columns.size()) return nullptr;
    return table->table.columns[column].c_str();
}

const char* medcrit_table_cell(const medcrit_table* table, size_t row, size_t column) {
    if (!table || row >= table->text.size() || column >= table->text[row].size()) return nullptr;
    return table->text[row][column].c_str();
}

const char* medcrit_table_lookup(const medcrit_table* table, const char* key) {
    if (!table || !key) return nullptr;
    for (const auto& row : table->text)
        if (row.size() >= 2 && row[0] == key) return row[1].c_str();
    return nullptr;
}

const char* medcrit_table_render(medcrit_table* table, medcrit_format format) {
    if (!table) return "";
    table->rendered = format == MEDCRIT_FORMAT_CSV ? table->table.to_csv() : table->table.to_text();
    return table->rendered.c_str();
}

void medcrit_table_free(medcrit_table* table) { delete table; }

}  // extern "C"
