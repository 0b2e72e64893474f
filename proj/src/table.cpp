#include "medcrit/table.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>

#include "medcrit/errors.hpp"

namespace medcrit {

std::string format_cell(const Cell& c) {
    struct Visitor {
        std::string operator()(double v) const {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);  // no "-0"
            return buf;
        }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "TRUE" : "FALSE"; }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

Table key_value_table() { return Table{{"key", "value"}, {}}; }

std::string Table::to_text() const {
    std::vector<std::vector<std::string>> text;
    const bool header = columns != std::vector<std::string>{"key", "value"};
    if (header) text.push_back(columns);
    for (const auto& row : rows) {
        std::vector<std::string> line;
        for (const auto& c : row) line.push_back(format_cell(c));
        text.push_back(std::move(line));
    }
    std::vector<std::size_t> width;
    for (const auto& line : text)
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (width.size() <= i) width.push_back(0);
            width[i] = std::max(width[i], line[i].size());
        }
    std::string out;
    for (const auto& line : text) {
        std::string s;
        for (std::size_t i = 0; i < line.size(); ++i) {
            s += line[i];
            if (i + 1 < line.size()) s += std::string(width[i] - line[i].size() + 2, ' ');
        }
        out += s + '\n';
    }
    return out;
}

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + '"';
}

}  // namespace

std::string Table::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + csv_cell(columns[i]);
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_cell(format_cell(row[i]));
        out += '\n';
    }
    return out;
}

Table effects_table(const EffectReport& r) {
    Table t = key_value_table();
    t.add("model", r.model_name);
    t.add("TE", r.te);
    t.add("NDE", r.nde);
    t.add("NIE", r.nie);
    t.add("TE^R", r.te_r);
    t.add("NDE^R", r.nde_r);
    t.add("NIE^R", r.nie_r);
    for (const auto& [m, v] : r.cde) t.add("CDE(" + std::to_string(m) + ")", v);
    for (const auto& [m, v] : r.pe) t.add("PE(" + std::to_string(m) + ")", v);
    for (const auto& [mm, v] : r.int_ref)
        t.add("INT_ref(" + std::to_string(mm.first) + "," + std::to_string(mm.second) + ")", v);
    if (r.nie_r_L) t.add("NIE^R_L", *r.nie_r_L);
    if (r.nie_r_La) t.add("NIE^R_La", *r.nie_r_La);
    t.add("H", r.h_contrast ? Cell(*r.h_contrast) : Cell(std::string("undefined")));
    return t;
}

Table identify_table(const CounterfactualTable& ct) {
    const ObservedLaw law = observational_law(ct);
    const EffectReport r = effect_report(ct);
    Table t = key_value_table();
    auto functional = [&](const std::string& name, const std::function<double()>& f, double target,
                          const std::string& target_name) {
        try {
            t.add(name, f());
        } catch (const DegenerateStratumError& e) {
            t.add(name, std::string("undefined: ") + e.what());
        }
        t.add(target_name, target);
    };
    functional("psi_te", [&] { return psi_te(law); }, r.te, "TE");
    for (Level m : ct.m_support) {
        const std::string s = std::to_string(m);
        functional("psi_cde(" + s + ")", [&] { return psi_cde(law, m); }, r.cde.at(m), "CDE(" + s + ")");
        functional("psi_pe(" + s + ")", [&] { return psi_pe(law, m); }, r.pe.at(m), "PE(" + s + ")");
    }
    functional("psi_nie", [&] { return psi_nie(law); }, r.nie, "NIE");
    if (ct.has_l) {
        functional("psi_nie_r_L", [&] { return psi_nie_r_L(law); }, r.nie_r, "NIE^R");
        functional("psi_nie_rl", [&] { return psi_nie_rl(law); }, *r.nie_r_L, "NIE^R_L");
    }
    std::vector<Assumption> checks{Assumption::A1, Assumption::A2, Assumption::A3, Assumption::A4, Assumption::A6};
    if (ct.has_l) checks.push_back(Assumption::A7);
    for (Assumption a : checks) {
        const auto v = check_assumption(ct, a);
        const std::string name(assumption_name(a));
        t.add(name + " holds", v.holds);
        t.add(name + " worst violation", v.worst_violation);
        if (!v.witness.empty()) t.add(name + " witness", v.witness);
    }
    return t;
}

Table criteria_table(const NullStatus& s, const std::vector<CriterionVerdict>& verdicts) {
    Table t = key_value_table();
    t.add("sharp null", s.sharp_null);
    t.add("sharper null", s.sharper_null);
    t.add("monotonicity", std::string(direction_name(s.monotonicity)));
    t.add("monotonicity at a*", std::string(direction_name(s.monotonicity_by_exposure[0])));
    t.add("monotonicity at a", std::string(direction_name(s.monotonicity_by_exposure[1])));
    t.add("overlap condition", s.overlap_condition);
    for (const auto& w : s.witnesses) t.add("witness: " + w.property, "unit " + std::to_string(w.unit) + " " + w.detail);
    for (const auto& v : verdicts) {
        if (!v.premise_holds) continue;
        const std::string key = v.effect_name + " " + std::string(criterion_name(v.criterion));
        t.add(key, v.refutes_criterion ? std::string("REFUTED (") + format_cell(v.effect_value) + ")"
                                       : std::string("satisfied"));
    }
    return t;
}

Table reproduction_table(const ReproductionRecord& r) {
    Table t = key_value_table();
    t.add("check", r.check);
    for (const auto& [k, v] : r.params) t.add("param " + k, v);
    t.add("quantity", r.quantity);
    t.add(r.quantity + " closed form", r.closed_form);
    t.add(r.quantity + " enumerated", r.enumerated);
    t.add("abs difference", r.abs_difference);
    t.add("tolerance", r.tolerance);
    for (const auto& [k, v] : r.values) t.add(k, v);
    for (const auto& s : r.statuses) {
        t.add(s.name, s.observed);
        if (!s.expected.empty() && s.expected != s.observed) t.add(s.name + " expected", s.expected);
    }
    t.add("ok", r.ok);
    return t;
}

Table sweep_table(const std::vector<SweepRow>& rows) {
    Table t;
    if (rows.empty()) {
        t.columns = {"effect", "value"};
        return t;
    }
    for (const auto& [k, v] : rows.front().params) t.columns.push_back(k);
    for (const char* c : {"effect", "value", "sharp_null", "sharper_null", "monotonicity", "overlap", "refuted"})
        t.columns.emplace_back(c);
    for (const auto& r : rows) {
        std::vector<Cell> line;
        for (const auto& [k, v] : r.params) line.emplace_back(v);
        line.emplace_back(r.effect);
        line.push_back(r.has_value ? Cell(r.value) : Cell(std::string("NA")));
        line.emplace_back(r.status.sharp_null);
        line.emplace_back(r.status.sharper_null);
        line.emplace_back(std::string(direction_name(r.status.monotonicity)));
        line.emplace_back(r.status.overlap_condition);
        std::string refuted;
        for (Criterion c : r.refuted) refuted += (refuted.empty() ? "" : ";") + std::string(criterion_name(c));
        line.emplace_back(refuted.empty() ? std::string("none") : refuted);
        t.rows.push_back(std::move(line));
    }
    return t;
}

Table estimate_table(const Estimate& e, std::size_t n_rows) {
    Table t = key_value_table();
    t.add("estimand", estimand_name(e.estimand));
    t.add("n", static_cast<std::int64_t>(n_rows));
    t.add("value", e.value);
    if (e.has_ci) {
        t.add("ci_low", e.ci_low);
        t.add("ci_high", e.ci_high);
    }
    t.add("n_boot", static_cast<std::int64_t>(e.n_boot));
    t.add("failed replicates", static_cast<std::int64_t>(e.failed));
    return t;
}

}  // namespace medcrit
