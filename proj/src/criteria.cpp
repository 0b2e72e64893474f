#include "medcrit/criteria.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>

#include "medcrit/factories.hpp"
#include "medcrit/identify.hpp"

namespace medcrit {

std::string_view direction_name(Direction d) noexcept {
    switch (d) {
        case Direction::Nonincreasing: return "nonincreasing";
        case Direction::Nondecreasing: return "nondecreasing";
        case Direction::Both: return "both";
        case Direction::Neither: return "neither";
    }
    return "?";
}

std::string_view criterion_name(Criterion c) noexcept {
    switch (c) {
        case Criterion::SharpNull: return "sharp-null";
        case Criterion::SharperNull: return "sharper-null";
        case Criterion::Monotonicity: return "monotonicity";
    }
    return "?";
}

namespace {

Direction direction_of(bool nonincreasing, bool nondecreasing) {
    if (nonincreasing && nondecreasing) return Direction::Both;
    if (nonincreasing) return Direction::Nonincreasing;
    if (nondecreasing) return Direction::Nondecreasing;
    return Direction::Neither;
}

std::string describe_unit(const CounterfactualTable& t, const UnitProfile& u) {
    std::string s = "M(" + std::to_string(t.levels.a_star) + ")=" + std::to_string(u.m_cf[0]) + " M(" +
                    std::to_string(t.levels.a) + ")=" + std::to_string(u.m_cf[1]);
    for (int k = 0; k < 2; ++k) {
        s += " Y(" + std::to_string(t.exposure(k)) + ",m)=[";
        for (std::size_t j = 0; j < u.y_cf[k].size(); ++j) s += (j ? "," : "") + std::to_string(u.y_cf[k][j]);
        s += "]";
    }
    return s;
}

}  // namespace

NullStatus null_status(const CounterfactualTable& t) {
    NullStatus s;
    std::array<bool, 2> dec_a{true, true}, inc_b{true, true};
    bool m_moves = false, y_moves_in_m = false, overlap_witness = false;
    auto witness = [&](const std::string& property, std::size_t i) {
        for (const auto& w : s.witnesses)
            if (w.property == property) return;
        s.witnesses.push_back({property, i, t.units[i].weight, describe_unit(t, t.units[i])});
    };

    for (std::size_t i = 0; i < t.units.size(); ++i) {
        const auto& u = t.units[i];
        bool constant_in_m = true;
        for (int k = 0; k < 2; ++k) {
            const Level via_a = t.nested(u, k, 1), via_as = t.nested(u, k, 0);
            if (via_a != via_as) {
                s.sharp_null = false;
                witness("sharp null", i);
            }
            if (via_a > via_as) {
                dec_a[k] = false;
                witness("monotonicity (a) at a'=" + std::to_string(t.exposure(k)), i);
            }
            if (via_a < via_as) {
                inc_b[k] = false;
                witness("monotonicity (b) at a'=" + std::to_string(t.exposure(k)), i);
            }
            const auto& ys = u.y_cf[k];
            if (std::adjacent_find(ys.begin(), ys.end(), std::not_equal_to<>()) != ys.end()) constant_in_m = false;
        }
        if (u.m_cf[0] != u.m_cf[1] && !constant_in_m) {
            s.sharper_null = false;
            witness("sharper null", i);
        }
        const auto& ya = u.y_cf[1];
        if (u.m_cf[0] != u.m_cf[1]) m_moves = true;
        if (std::adjacent_find(ya.begin(), ya.end(), std::not_equal_to<>()) != ya.end()) y_moves_in_m = true;
        if (t.nested(u, 1, 0) != t.nested(u, 1, 1)) overlap_witness = true;
    }
    for (int k = 0; k < 2; ++k) s.monotonicity_by_exposure[k] = direction_of(dec_a[k], inc_b[k]);
    s.monotonicity = direction_of(dec_a[0] && dec_a[1], inc_b[0] && inc_b[1]);
    s.overlap_condition = !(m_moves && y_moves_in_m) || overlap_witness;
    return s;
}

std::vector<std::pair<std::string, double>> indirect_measures(const EffectReport& r) {
    std::vector<std::pair<std::string, double>> out{{"NIE", r.nie}, {"NIE^R", r.nie_r}};
    for (const auto& [m, v] : r.pe) out.emplace_back("PE(" + std::to_string(m) + ")", v);
    if (r.nie_r_L) out.emplace_back("NIE^R_L", *r.nie_r_L);
    if (r.nie_r_La) out.emplace_back("NIE^R_La", *r.nie_r_La);
    if (r.h_contrast) out.emplace_back("H", *r.h_contrast);
    return out;
}

namespace {

CriterionVerdict verdict_for(const NullStatus& s, const std::string& name, double v, Criterion c, double tol) {
    CriterionVerdict out{name, v, c, false, true, false};
    switch (c) {
        case Criterion::SharpNull:
            out.premise_holds = s.sharp_null;
            if (out.premise_holds) out.satisfied_here = std::abs(v) <= tol;
            break;
        case Criterion::SharperNull:
            out.premise_holds = s.sharper_null;
            if (out.premise_holds) out.satisfied_here = std::abs(v) <= tol;
            break;
        case Criterion::Monotonicity:
            out.premise_holds = s.monotonicity != Direction::Neither;
            if (s.monotonicity == Direction::Nonincreasing) out.satisfied_here = v <= tol;
            if (s.monotonicity == Direction::Nondecreasing) out.satisfied_here = v >= -tol;
            if (s.monotonicity == Direction::Both) out.satisfied_here = std::abs(v) <= tol;
            break;
    }
    out.refutes_criterion = out.premise_holds && !out.satisfied_here;
    return out;
}

}  // namespace

std::vector<CriterionVerdict> criterion_verdicts(const NullStatus& status, const EffectReport& r, double tolerance) {
    std::vector<CriterionVerdict> out;
    for (const auto& [name, v] : indirect_measures(r)) {
        for (Criterion c : {Criterion::SharpNull, Criterion::SharperNull, Criterion::Monotonicity}) {
            out.push_back(verdict_for(status, name, v, c, tolerance));
        }
    }
    return out;
}

bool no_interaction_check(const CounterfactualTable& t, double tolerance) {
    const std::size_t nm = t.m_support.size();
    struct Stratum {
        double w = 0.0;
        std::vector<double> contrast;  // [i * nm + j]
    };
    std::map<std::vector<Level>, Stratum> strata;
    for (const auto& u : t.units) {
        std::vector<Level> key = u.c;
        key.push_back(u.m_cf[0]);
        auto& s = strata[key];
        if (s.contrast.empty()) s.contrast.assign(nm * nm, 0.0);
        s.w += u.weight;
        for (std::size_t i = 0; i < nm; ++i)
            for (std::size_t j = 0; j < nm; ++j) {
                const double c = u.y_cf[1][i] - u.y_cf[1][j] - u.y_cf[0][i] + u.y_cf[0][j];
                s.contrast[i * nm + j] += u.weight * c;
            }
    }
    for (const auto& [key, s] : strata)
        for (double c : s.contrast)
            if (std::abs(c / s.w) > tolerance) return false;
    return true;
}

bool m_always_affects_y_check(const CounterfactualTable& t) {
    const std::size_t nm = t.m_support.size();
    for (const auto& u : t.units)
        for (std::size_t i = 0; i < nm; ++i)
            for (std::size_t j = i + 1; j < nm; ++j)
                if (u.y_cf[0][i] == u.y_cf[0][j] && u.y_cf[1][i] == u.y_cf[1][j]) return false;
    return true;
}

std::string_view closed_form_name(ClosedForm t) noexcept {
    switch (t) {
        case ClosedForm::T1: return "T1";
        case ClosedForm::T2: return "T2";
        case ClosedForm::T3: return "T3";
        case ClosedForm::S1: return "S1";
        case ClosedForm::PE: return "PE";
    }
    return "?";
}

ClosedForm parse_closed_form(std::string_view text) {
    for (ClosedForm t : {ClosedForm::T1, ClosedForm::T2, ClosedForm::T3, ClosedForm::S1, ClosedForm::PE}) {
        if (closed_form_name(t) == text) return t;
    }
    throw DomainError("unknown closed-form check \"" + std::string(text) + "\" (expected T1, T2, T3, S1 or PE)");
}

ReproductionFailure::ReproductionFailure(ReproductionRecord record)
    : Error("reproduction of " + record.check + " failed: closed form " + std::to_string(record.closed_form) +
            ", enumerated " + std::to_string(record.enumerated)),
      record_(std::move(record)) {}

namespace {

ParamMap with_defaults(const ParamMap& given, const ParamMap& defaults) {
    for (const auto& [k, v] : given) {
        (void)v;
        if (!defaults.contains(k)) throw DomainError("unknown parameter \"" + k + "\"");
    }
    ParamMap out = defaults;
    for (const auto& [k, v] : given) out[k] = v;
    return out;
}

double tolerance_for(const ParamMap& p) {
    for (const auto& [k, v] : p) {
        if (k == "m") continue;
        if (std::min(v, 1.0 - v) < 1e-6) return 1e-9;
    }
    return 1e-12;
}

std::string truth(bool b) { return b ? "TRUE" : "FALSE"; }

void expect(ReproductionRecord& r, const std::string& name, const std::string& observed, const std::string& expected) {
    r.statuses.push_back({name, observed, expected});
    if (!expected.empty() && observed != expected) r.ok = false;
}

}  // namespace

ReproductionRecord reproduce(ClosedForm check, const ParamMap& given) {
    ReproductionRecord r;
    r.check = std::string(closed_form_name(check));
    switch (check) {
        case ClosedForm::T1:
        case ClosedForm::S1: {
            r.params = with_defaults(given, {{"pi", 0.5}, {"beta", 0.9}});
            const double pi = r.params["pi"], beta = r.params["beta"];
            const auto t = counterfactual_table(induced_confounder_scm(pi, beta));
            const auto rep = effect_report(t);
            const auto ns = null_status(t);
            if (check == ClosedForm::T1) {
                r.quantity = "NIE^R";
                r.closed_form = pi * (1.0 - pi) * (2.0 * beta - 1.0);
                r.enumerated = rep.nie_r;
                r.abs_difference = std::abs(r.enumerated - r.closed_form);
                r.values = {{"NIE", rep.nie}, {"NIE^R_L", *rep.nie_r_L}};
                expect(r, "sharp null", truth(ns.sharp_null), "TRUE");
                expect(r, "sharper null", truth(ns.sharper_null), "TRUE");
                const auto v = verdict_for(ns, "NIE^R", rep.nie_r, Criterion::SharperNull, kNullTolerance);
                expect(r, "NIE^R refutes sharper-null criterion", truth(v.refutes_criterion), "");
            } else {
                const double identified = psi_nie_rl(observational_law(t));
                r.quantity = "NIE^R_L";
                r.closed_form = beta - 0.5;
                r.enumerated = *rep.nie_r_L;
                r.abs_difference =
                    std::max(std::abs(r.enumerated - r.closed_form), std::abs(identified - r.closed_form));
                r.values = {{"psi_nie_rl", identified}, {"NIE^R_La", *rep.nie_r_La}, {"NIE", rep.nie}};
                expect(r, "sharp null", truth(ns.sharp_null), "TRUE");
            }
            break;
        }
        case ClosedForm::T2: {
            ParamMap p = given;
            if (!p.contains("pi0") && (p.contains("pi1") || p.contains("pi2"))) {
                const double pi1 = p.contains("pi1") ? p["pi1"] : 0.3, pi2 = p.contains("pi2") ? p["pi2"] : 0.5;
                p["pi0"] = 1.0 - pi1 - pi2;
            }
            r.params = with_defaults(p, {{"pi0", 0.2}, {"pi1", 0.3}, {"pi2", 0.5}, {"beta", 0.9}});
            const double pi1 = r.params["pi1"], pi2 = r.params["pi2"], beta = r.params["beta"];
            const auto t = counterfactual_table(three_level_confounder_scm(r.params["pi0"], pi1, pi2, beta));
            const auto rep = effect_report(t);
            const auto ns = null_status(t);
            r.quantity = "NIE^R";
            r.closed_form = (1.0 - pi1) * (pi1 * (2.0 * beta - 1.0) + pi2);
            r.enumerated = rep.nie_r;
            r.abs_difference = std::abs(r.enumerated - r.closed_form);
            const double stated = pi1 * (1.0 - pi1) * (2.0 * beta - 1.0) + pi2;
            r.values = {{"NIE", rep.nie},
                        {"stated form pi1(1-pi1)(2beta-1)+pi2", stated},
                        {"stated form minus enumerated", stated - rep.nie_r}};
            expect(r, "monotonicity", std::string(direction_name(ns.monotonicity)), pi2 > 0.0 ? "nondecreasing" : "both");
            expect(r, "overlap condition", truth(ns.overlap_condition), "");
            const auto v = verdict_for(ns, "NIE^R", rep.nie_r, Criterion::Monotonicity, kNullTolerance);
            expect(r, "NIE^R refutes monotonicity criterion", truth(v.refutes_criterion), "");
            break;
        }
        case ClosedForm::T3: {
            r.params = with_defaults(
                given, {{"pi", 0.1}, {"beta1", 0.1}, {"beta2", 0.2}, {"beta3", 0.4}, {"beta4", 0.3}, {"gamma", 0.5}});
            const double pi = r.params["pi"], b1 = r.params["beta1"], b2 = r.params["beta2"], b3 = r.params["beta3"],
                         b4 = r.params["beta4"];
            const auto t = counterfactual_table(cross_world_joint(pi, b1, b2, b3, b4, r.params["gamma"]));
            const auto rep = effect_report(t);
            const auto ns = null_status(t);
            r.quantity = "NIE^R";
            r.closed_form = ((1.0 - pi) * b4 - pi * b1) * (b3 - b2);
            r.enumerated = rep.nie_r;
            r.abs_difference = std::abs(r.enumerated - r.closed_form);
            const auto a4 = check_assumption(t, Assumption::A4);
            r.values = {{"NIE", rep.nie}, {"A4 worst deviation", a4.worst_violation}};
            expect(r, "sharper null", truth(ns.sharper_null), "TRUE");
            expect(r, "A4 holds", truth(a4.holds), "");
            break;
        }
        case ClosedForm::PE: {
            r.params = with_defaults(given, {{"p", 0.5}, {"m", 0.0}});
            const double p = r.params["p"];
            const double m = r.params["m"];
            if (m != 0.0 && m != 1.0) throw DomainError("m must be 0 or 1");
            const Level ml = static_cast<Level>(m);
            const auto t = counterfactual_table(pe_counterexample(p));
            const auto rep = effect_report(t);
            const auto ns = null_status(t);
            r.quantity = "PE(" + std::to_string(ml) + ")";
            r.closed_form = p - m;
            r.enumerated = rep.pe.at(ml);
            r.abs_difference = std::abs(r.enumerated - r.closed_form);
            r.values = {{"TE", rep.te}, {"CDE(" + std::to_string(ml) + ")", rep.cde.at(ml)}, {"NIE", rep.nie}};
            expect(r, "sharp null", truth(ns.sharp_null), "TRUE");
            const auto v = verdict_for(ns, r.quantity, r.enumerated, Criterion::SharpNull, kNullTolerance);
            expect(r, r.quantity + " refutes sharp-null criterion", truth(v.refutes_criterion), "");
            break;
        }
    }
    r.tolerance = tolerance_for(r.params);
    if (!(r.abs_difference <= r.tolerance)) r.ok = false;
    if (!r.ok) throw ReproductionFailure(r);
    return r;
}

namespace {

bool make_t3(const std::vector<double>& x, CausalModel& out) {
    const double rest = 1.0 - x[1] - x[2];
    if (rest < 0.0) return false;
    out = cross_world_joint(x[0], rest / 2.0, x[1], x[2], rest / 2.0, x[3]);
    return true;
}

std::vector<Family> build_families() {
    std::vector<Family> f;
    f.push_back({"t1", {"pi", "beta"}, false, [](const std::vector<double>& x, CausalModel& out) {
                     out = induced_confounder_scm(x[0], x[1]);
                     return true;
                 }});
    f.push_back({"t2", {"pi1", "pi2", "beta"}, false, [](const std::vector<double>& x, CausalModel& out) {
                     double pi0 = 1.0 - x[0] - x[1];
                     if (pi0 < -kPmfTolerance) return false;
                     pi0 = std::max(pi0, 0.0);
                     out = three_level_confounder_scm(pi0, x[0], x[1], x[2]);
                     return true;
                 }});
    f.push_back({"t3", {"pi", "beta2", "beta3", "gamma"}, false, make_t3});
    f.push_back({"pe", {"p"}, false, [](const std::vector<double>& x, CausalModel& out) {
                     out = pe_counterexample(x[0]);
                     return true;
                 }});
    auto seeded = [&f](std::string name, std::function<CausalModel(std::uint64_t)> make) {
        f.push_back({std::move(name), {}, true, [make](const std::vector<double>& x, CausalModel& out) {
                         out = make(static_cast<std::uint64_t>(x[0]));
                         return true;
                     }});
    };
    seeded("additive", [](std::uint64_t s) { return CausalModel(additive_outcome_scm({s, (s & 1) != 0, false})); });
    seeded("additive-l", [](std::uint64_t s) { return CausalModel(additive_outcome_scm({s, (s & 1) != 0, true})); });
    seeded("separable", [](std::uint64_t s) { return CausalModel(separable_scm({s, (s & 1) != 0, false})); });
    seeded("random-no-l", [](std::uint64_t s) { return CausalModel(random_scm({s, (s & 1) != 0, false, true})); });
    seeded("random-l", [](std::uint64_t s) { return CausalModel(random_scm({s, (s & 1) != 0, true, true})); });
    seeded("iv", [](std::uint64_t s) { return CausalModel(random_scm({s, (s & 1) != 0, true, false})); });
    seeded("always-affects", [](std::uint64_t s) { return CausalModel(always_affects_scm({s, (s & 1) != 0})); });
    return f;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return out;
}

std::optional<double> select(const EffectReport& r, const Selector& s) {
    switch (s.kind) {
        case Selector::Kind::Nie: return r.nie;
        case Selector::Kind::NieR: return r.nie_r;
        case Selector::Kind::Pe: {
            const auto it = r.pe.find(s.m);
            if (it == r.pe.end()) return std::nullopt;
            return it->second;
        }
        case Selector::Kind::NieRL: return r.nie_r_L;
        case Selector::Kind::NieRLa: return r.nie_r_La;
        case Selector::Kind::H: return r.h_contrast;
    }
    return std::nullopt;
}

}  // namespace

const std::vector<Family>& families() {
    static const std::vector<Family> all = build_families();
    return all;
}

const Family& find_family(std::string_view name) {
    for (const auto& f : families())
        if (f.name == name) return f;
    std::string known;
    for (const auto& f : families()) known += (known.empty() ? "" : ", ") + f.name;
    throw DomainError("unknown family \"" + std::string(name) + "\" (known: " + known + ")");
}

Selector parse_selector(std::string_view text) {
    const std::string s = lower(text);
    if (s == "nie") return {Selector::Kind::Nie, 0};
    if (s == "nie^r" || s == "nie_r") return {Selector::Kind::NieR, 0};
    if (s == "nie^r_l" || s == "nie_r_l") return {Selector::Kind::NieRL, 0};
    if (s == "nie^r_la" || s == "nie_r_la") return {Selector::Kind::NieRLa, 0};
    if (s == "h" || s == "h_contrast") return {Selector::Kind::H, 0};
    if (s.size() > 4 && s.substr(0, 3) == "pe(" && s.back() == ')') {
        const std::string inner = s.substr(3, s.size() - 4);
        char* end = nullptr;
        const long m = std::strtol(inner.c_str(), &end, 10);
        if (!inner.empty() && end == inner.c_str() + inner.size()) return {Selector::Kind::Pe, static_cast<Level>(m)};
    }
    throw DomainError("unknown effect selector \"" + std::string(text) +
                      "\" (expected NIE, NIE^R, PE(m), NIE^R_L, NIE^R_La or H)");
}

std::string selector_name(const Selector& s) {
    switch (s.kind) {
        case Selector::Kind::Nie: return "NIE";
        case Selector::Kind::NieR: return "NIE^R";
        case Selector::Kind::Pe: return "PE(" + std::to_string(s.m) + ")";
        case Selector::Kind::NieRL: return "NIE^R_L";
        case Selector::Kind::NieRLa: return "NIE^R_La";
        case Selector::Kind::H: return "H";
    }
    return "?";
}

std::vector<SweepRow> sweep(const Family& family, const SearchOptions& o, const Selector& selector) {
    std::vector<std::vector<double>> points;
    std::vector<std::string> axes = family.params;
    if (family.seeded) {
        axes = {"seed"};
        for (int i = 0; i < o.draws; ++i) points.push_back({static_cast<double>(o.seed + static_cast<std::uint64_t>(i))});
    } else {
        if (o.grid < 1) throw DomainError("grid must have at least one point per axis");
        std::vector<double> ticks;
        for (int i = 0; i < o.grid; ++i) ticks.push_back(o.grid == 1 ? o.lo : o.lo + (o.hi - o.lo) * i / (o.grid - 1));
        std::vector<std::size_t> idx(axes.size(), 0);
        while (true) {
            std::vector<double> x;
            for (std::size_t i : idx) x.push_back(ticks[i]);
            points.push_back(std::move(x));
            std::size_t k = idx.size();
            while (k > 0 && ++idx[k - 1] == ticks.size()) idx[--k] = 0;
            if (k == 0) break;
        }
    }

    std::vector<SweepRow> rows;
    const std::string effect = selector_name(selector);
    for (const auto& x : points) {
        CausalModel model;
        if (!family.make(x, model)) continue;
        SweepRow row;
        for (std::size_t i = 0; i < axes.size(); ++i) row.params[axes[i]] = x[i];
        row.effect = effect;
        const auto t = counterfactual_table(model);
        const auto report = effect_report(t);
        row.status = null_status(t);
        if (const auto v = select(report, selector)) {
            row.has_value = true;
            row.value = *v;
            for (Criterion c : {Criterion::SharpNull, Criterion::SharperNull, Criterion::Monotonicity}) {
                if (verdict_for(row.status, effect, *v, c, o.tolerance).refutes_criterion) row.refuted.push_back(c);
            }
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> search_violations(const Family& family, const SearchOptions& o, const Selector& selector) {
    auto rows = sweep(family, o, selector);
    std::erase_if(rows, [](const SweepRow& r) { return r.refuted.empty(); });
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepRow& a, const SweepRow& b) { return std::abs(a.value) > std::abs(b.value); });
    return rows;
}

}  // namespace medcrit
