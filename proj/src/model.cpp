#include "medcrit/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <tuple>

#include "medcrit/errors.hpp"

namespace medcrit {

namespace {

std::string fmt_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

bool contains(const std::vector<Level>& support, Level value) {
    return std::find(support.begin(), support.end(), value) != support.end();
}

void check_support(const std::string& element, const std::vector<Level>& support,
                   std::vector<Violation>& out) {
    if (support.empty()) {
        out.push_back({element, "support is empty"});
        return;
    }
    std::set<Level> seen;
    for (Level v : support) {
        if (!seen.insert(v).second) {
            out.push_back({element, "support has duplicate level " + std::to_string(v)});
        }
    }
    if (seen.size() == support.size() && !std::is_sorted(support.begin(), support.end())) {
        out.push_back({element, "support must be listed in increasing order"});
    }
}

void check_pmf(const NoiseSpec& noise, std::vector<Violation>& out) {
    const std::string element = "noise " + noise.name;
    if (noise.pmf.empty()) {
        out.push_back({element, "pmf is empty"});
        return;
    }
    double total = 0.0;
    for (const auto& [level, p] : noise.pmf) {
        if (!std::isfinite(p) || p < 0.0) {
            out.push_back({element, "probability of level " + std::to_string(level) + " is " + fmt_real(p)});
        }
        total += p;
    }
    if (std::abs(total - 1.0) > kPmfTolerance) {
        out.push_back({element, "pmf sums to " + fmt_real(total)});
    }
}

const char* role_label(Role role) {
    switch (role) {
        case Role::Covariate: return "covariate";
        case Role::Exposure: return "exposure";
        case Role::InducedConfounder: return "induced confounder";
        case Role::Mediator: return "mediator";
        case Role::Outcome: return "outcome";
        case Role::SeparableN: return "separable component N";
        case Role::SeparableO: return "separable component O";
    }
    return "?";
}

// Graph rules for the supported shapes, keyed on parent roles.
void check_shape(const Scm& scm, std::vector<Violation>& out) {
    const bool separable = scm.find_role(Role::SeparableN) || scm.find_role(Role::SeparableO);
    auto shape_violation = [&](const std::string& var, const std::string& why) {
        out.push_back({"variable " + var, "graph not a supported mediation shape: " + why});
    };
    if (separable) {
        if (!scm.find_role(Role::SeparableN) || !scm.find_role(Role::SeparableO)) {
            shape_violation(scm.find_role(Role::SeparableN) ? scm.find_role(Role::SeparableN)->name
                                                            : scm.find_role(Role::SeparableO)->name,
                            "separable shape needs both N and O");
        }
        if (const auto* l = scm.find_role(Role::InducedConfounder)) {
            shape_violation(l->name, "separable shape does not admit an induced confounder L");
        }
    }

    for (const auto& var : scm.variables) {
        auto it = scm.edges.find(var.name);
        if (it == scm.edges.end()) continue;
        std::set<std::string> distinct;
        for (const auto& parent_name : it->second) {
            if (!distinct.insert(parent_name).second) {
                out.push_back({"variable " + var.name, "parent " + parent_name + " listed twice"});
            }
            const auto* parent = scm.find_variable(parent_name);
            if (!parent) continue;  // reported elsewhere
            const Role pr = parent->role;
            bool allowed = false;
            switch (var.role) {
                case Role::Covariate: allowed = pr == Role::Covariate; break;
                case Role::Exposure: allowed = pr == Role::Covariate; break;
                case Role::SeparableN:
                case Role::SeparableO: allowed = pr == Role::Exposure; break;
                case Role::InducedConfounder: allowed = pr == Role::Covariate || pr == Role::Exposure; break;
                case Role::Mediator:
                    allowed = pr == Role::Covariate || pr == Role::InducedConfounder ||
                              (separable ? pr == Role::SeparableN : pr == Role::Exposure);
                    break;
                case Role::Outcome:
                    allowed = pr == Role::Covariate || pr == Role::InducedConfounder || pr == Role::Mediator ||
                              (separable ? pr == Role::SeparableO : pr == Role::Exposure);
                    break;
            }
            if (!allowed) {
                shape_violation(var.name, std::string(role_label(var.role)) + " " + var.name +
                                              " may not have parent " + parent_name + " (" +
                                              role_label(pr) + ")");
            }
        }
        if ((var.role == Role::SeparableN || var.role == Role::SeparableO) && it->second.size() != 1) {
            shape_violation(var.name, "separable component must have exactly the exposure as parent");
        }
    }
    for (const auto& var : scm.variables) {
        if ((var.role == Role::SeparableN || var.role == Role::SeparableO) && !scm.edges.contains(var.name)) {
            shape_violation(var.name, "separable component must have exactly the exposure as parent");
        }
    }

    // Covariates may depend on each other; everything else is layered by role.
    std::map<std::string, int> state;
    std::function<bool(const std::string&)> cyclic = [&](const std::string& name) -> bool {
        int& s = state[name];
        if (s == 1) return true;
        if (s == 2) return false;
        s = 1;
        if (auto it = scm.edges.find(name); it != scm.edges.end()) {
            for (const auto& p : it->second) {
                if (scm.find_variable(p) && cyclic(p)) return true;
            }
        }
        state[name] = 2;
        return false;
    };
    for (const auto& var : scm.variables) {
        if (var.role == Role::Covariate && cyclic(var.name)) {
            shape_violation(var.name, "covariate graph has a cycle");
            break;
        }
    }
}

void check_table(const Scm& scm, const StructuralTable& table, std::vector<Violation>& out) {
    const std::string element = "table " + table.variable;
    const auto* var = scm.find_variable(table.variable);
    if (!var) {
        out.push_back({element, "unknown variable"});
        return;
    }
    std::vector<std::string> declared;
    if (auto it = scm.edges.find(table.variable); it != scm.edges.end()) declared = it->second;
    if (declared != table.parents) {
        out.push_back({element, "parents differ from the edge list of " + table.variable});
    }
    std::vector<const VariableSpec*> parents;
    for (const auto& p : table.parents) {
        const auto* pv = scm.find_variable(p);
        if (!pv) {
            out.push_back({element, "unknown parent " + p});
            return;
        }
        parents.push_back(pv);
    }
    const auto* noise = scm.find_noise(table.noise);
    if (!noise) {
        out.push_back({element, "unknown noise " + table.noise});
        return;
    }

    std::set<std::pair<std::vector<Level>, Level>> seen;
    bool row_errors = false;
    for (const auto& row : table.rows) {
        if (row.parents.size() != parents.size()) {
            out.push_back({element, "row has " + std::to_string(row.parents.size()) + " parent values, expected " +
                                        std::to_string(parents.size())});
            row_errors = true;
            continue;
        }
        for (std::size_t i = 0; i < parents.size(); ++i) {
            if (!contains(parents[i]->support, row.parents[i])) {
                out.push_back({element, "parent value " + std::to_string(row.parents[i]) + " not in support of " +
                                            parents[i]->name});
                row_errors = true;
            }
        }
        if (!noise->pmf.contains(row.noise)) {
            out.push_back({element, "noise level " + std::to_string(row.noise) + " not in support of " + noise->name});
            row_errors = true;
        }
        if (!contains(var->support, row.value)) {
            out.push_back({element, "output " + std::to_string(row.value) + " not in support of " + var->name});
        }
        if (!seen.insert({row.parents, row.noise}).second) {
            out.push_back({element, "duplicate row for one (parents, noise) configuration"});
        }
        if ((var->role == Role::SeparableN || var->role == Role::SeparableO) && !row.parents.empty() &&
            row.value != row.parents[0]) {
            out.push_back({element, "separable component must equal the exposure"});
        }
    }
    if (row_errors) return;
    std::size_t expected = noise->pmf.size();
    for (const auto* p : parents) expected *= p->support.size();
    if (seen.size() != expected) {
        out.push_back({element, "table is not total: " + std::to_string(seen.size()) + " of " +
                                    std::to_string(expected) + " configurations defined"});
    }
}

}  // namespace

std::string_view role_code(Role role) noexcept {
    switch (role) {
        case Role::Covariate: return "C";
        case Role::Exposure: return "A";
        case Role::InducedConfounder: return "L";
        case Role::Mediator: return "M";
        case Role::Outcome: return "Y";
        case Role::SeparableN: return "N";
        case Role::SeparableO: return "O";
    }
    return "?";
}

std::optional<Role> parse_role(std::string_view code) noexcept {
    static constexpr std::array<Role, 7> all{Role::Covariate, Role::Exposure,   Role::InducedConfounder,
                                             Role::Mediator,  Role::Outcome,    Role::SeparableN,
                                             Role::SeparableO};
    for (Role r : all) {
        if (role_code(r) == code) return r;
    }
    return std::nullopt;
}

std::string_view shape_name(Shape shape) noexcept {
    switch (shape) {
        case Shape::NoConfounder: return "no-L";
        case Shape::InducedConfounder: return "induced-L";
        case Shape::Separable: return "separable";
    }
    return "?";
}

const VariableSpec* Scm::find_variable(std::string_view n) const noexcept {
    for (const auto& v : variables)
        if (v.name == n) return &v;
    return nullptr;
}

const VariableSpec* Scm::find_role(Role role) const noexcept {
    for (const auto& v : variables)
        if (v.role == role) return &v;
    return nullptr;
}

const NoiseSpec* Scm::find_noise(std::string_view n) const noexcept {
    for (const auto& e : noise)
        if (e.name == n) return &e;
    return nullptr;
}

const StructuralTable* Scm::find_table(std::string_view v) const noexcept {
    for (const auto& t : tables)
        if (t.variable == v) return &t;
    return nullptr;
}

const std::string& model_name(const CausalModel& model) noexcept {
    return std::visit([](const auto& m) -> const std::string& { return m.name; }, model);
}

InvalidModelError::InvalidModelError(std::vector<std::string> violations)
    : Error([&] {
          std::string msg = "invalid model";
          for (const auto& v : violations) msg += "; " + v;
          return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<Violation> validate(const Scm& scm) {
    std::vector<Violation> out;

    std::set<std::string> names;
    std::map<Role, int> role_count;
    for (const auto& var : scm.variables) {
        const std::string element = "variable " + (var.name.empty() ? std::string("<unnamed>") : var.name);
        if (var.name.empty()) out.push_back({element, "name is empty"});
        if (!names.insert(var.name).second) out.push_back({element, "duplicate variable name"});
        check_support(element, var.support, out);
        ++role_count[var.role];
    }
    for (Role r : {Role::Exposure, Role::Mediator, Role::Outcome}) {
        if (role_count[r] != 1) {
            out.push_back({"roles", "expected exactly one " + std::string(role_label(r)) + " variable, found " +
                                        std::to_string(role_count[r])});
        }
    }
    for (Role r : {Role::InducedConfounder, Role::SeparableN, Role::SeparableO}) {
        if (role_count[r] > 1) {
            out.push_back({"roles", "at most one " + std::string(role_label(r)) + " variable allowed"});
        }
    }

    if (const auto* a = scm.find_role(Role::Exposure)) {
        const auto& lv = scm.exposure_levels;
        if (lv.a_star == lv.a) out.push_back({"exposure_levels", "a_star and a must differ"});
        if (!contains(a->support, lv.a_star))
            out.push_back({"exposure_levels", "a_star " + std::to_string(lv.a_star) + " not in support of " + a->name});
        if (!contains(a->support, lv.a))
            out.push_back({"exposure_levels", "a " + std::to_string(lv.a) + " not in support of " + a->name});
    }

    std::set<std::string> noise_names;
    for (const auto& n : scm.noise) {
        if (n.name.empty()) out.push_back({"noise <unnamed>", "name is empty"});
        if (!noise_names.insert(n.name).second) out.push_back({"noise " + n.name, "duplicate noise name"});
        check_pmf(n, out);
    }

    for (const auto& [child, parents] : scm.edges) {
        if (!scm.find_variable(child)) out.push_back({"edges", "unknown variable " + child});
        for (const auto& p : parents) {
            if (!scm.find_variable(p)) out.push_back({"edges", "unknown parent " + p + " of " + child});
            if (p == child) out.push_back({"edges", child + " is its own parent"});
        }
    }
    check_shape(scm, out);

    std::map<std::string, int> tables_per_var;
    std::map<std::string, int> noise_uses;
    for (const auto& t : scm.tables) {
        ++tables_per_var[t.variable];
        ++noise_uses[t.noise];
        check_table(scm, t, out);
    }
    for (const auto& var : scm.variables) {
        const int n = tables_per_var[var.name];
        if (n != 1) {
            out.push_back({"variable " + var.name, "expected one structural table, found " + std::to_string(n)});
        }
    }
    if (scm.noise.size() != scm.variables.size()) {
        out.push_back({"noise", "expected one noise term per variable (" + std::to_string(scm.variables.size()) +
                                    "), found " + std::to_string(scm.noise.size())});
    }
    for (const auto& n : scm.noise) {
        const int uses = noise_uses[n.name];
        if (uses != 1) {
            out.push_back({"noise " + n.name, "must feed exactly one structural table, feeds " + std::to_string(uses)});
        }
    }
    return out;
}

std::vector<Violation> validate(const FfrcistgSpec& spec, double factorization_tolerance) {
    std::vector<Violation> out;
    check_support("exposure support", spec.exposure_support, out);
    check_support("mediator support", spec.mediator_support, out);
    check_support("outcome support", spec.outcome_support, out);
    const auto& lv = spec.exposure_levels;
    if (lv.a_star == lv.a) out.push_back({"exposure_levels", "a_star and a must differ"});
    if (!contains(spec.exposure_support, lv.a_star) || !contains(spec.exposure_support, lv.a)) {
        out.push_back({"exposure_levels", "levels must lie in the exposure support"});
    }
    if (spec.exposure_support.size() != 2) {
        out.push_back({"exposure support", "must consist of exactly the two levels a_star and a"});
    }
    if (spec.atoms.empty()) out.push_back({"atoms", "joint has no atoms"});

    const std::size_t nm = spec.mediator_support.size();
    double total = 0.0;
    bool atoms_ok = true;
    for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
        const auto& atom = spec.atoms[i];
        const std::string element = "atom " + std::to_string(i);
        if (!std::isfinite(atom.probability) || atom.probability < 0.0) {
            out.push_back({element, "probability is " + fmt_real(atom.probability)});
            atoms_ok = false;
        }
        total += atom.probability;
        if (atom.covariates.size() != spec.covariate_names.size()) {
            out.push_back({element, "covariate tuple has wrong length"});
            atoms_ok = false;
        }
        if (!contains(spec.exposure_support, atom.exposure)) {
            out.push_back({element, "exposure value outside support"});
            atoms_ok = false;
        }
        for (int k = 0; k < 2; ++k) {
            if (!contains(spec.mediator_support, atom.mediator[k])) {
                out.push_back({element, "mediator counterfactual outside support"});
                atoms_ok = false;
            }
            if (atom.outcome[k].size() != nm) {
                out.push_back({element, "outcome counterfactuals must cover every mediator level"});
                atoms_ok = false;
                continue;
            }
            for (Level y : atom.outcome[k]) {
                if (!contains(spec.outcome_support, y)) {
                    out.push_back({element, "outcome counterfactual outside support"});
                    atoms_ok = false;
                }
            }
        }
    }
    if (std::abs(total - 1.0) > kPmfTolerance) out.push_back({"atoms", "pmf sums to " + fmt_real(total)});
    if (!atoms_ok || !out.empty()) return out;

    // One-world factorization: {A, M(a'), Y(a', m)} mutually independent given C.
    using Key = std::tuple<std::vector<Level>, Level, Level, Level>;
    for (int k = 0; k < 2; ++k) {
        for (std::size_t j = 0; j < nm; ++j) {
            std::map<std::vector<Level>, double> pc;
            std::map<std::pair<std::vector<Level>, Level>, double> pa, pm, py;
            std::map<Key, double> joint;
            for (const auto& atom : spec.atoms) {
                const double w = atom.probability;
                const Level y = atom.outcome[k][j];
                pc[atom.covariates] += w;
                pa[{atom.covariates, atom.exposure}] += w;
                pm[{atom.covariates, atom.mediator[k]}] += w;
                py[{atom.covariates, y}] += w;
                joint[{atom.covariates, atom.exposure, atom.mediator[k], y}] += w;
            }
            double worst = 0.0;
            for (const auto& [c, p_c] : pc) {
                if (p_c <= 0.0) continue;
                for (Level a : spec.exposure_support)
                    for (Level m : spec.mediator_support)
                        for (Level y : spec.outcome_support) {
                            auto get = [](const auto& map, const auto& key) {
                                auto it = map.find(key);
                                return it == map.end() ? 0.0 : it->second;
                            };
                            const double product =
                                get(pa, std::pair{c, a}) * get(pm, std::pair{c, m}) * get(py, std::pair{c, y}) / (p_c * p_c);
                            const double p = get(joint, Key{c, a, m, y});
                            worst = std::max(worst, std::abs(p - product));
                        }
            }
            if (worst > factorization_tolerance) {
                out.push_back({"one-world factorization",
                               "{A, M(" + std::to_string(k == 0 ? lv.a_star : lv.a) + "), Y(" +
                                   std::to_string(k == 0 ? lv.a_star : lv.a) + "," +
                                   std::to_string(spec.mediator_support[j]) +
                                   ")} do not factorize given C; max deviation " + fmt_real(worst)});
            }
        }
    }
    return out;
}

std::vector<Violation> validate(const CausalModel& model) {
    return std::visit([](const auto& m) { return validate(m); }, model);
}

namespace {
template <class M>
void require_valid_impl(const M& model) {
    auto violations = validate(model);
    if (violations.empty()) return;
    std::vector<std::string> lines;
    lines.reserve(violations.size());
    for (const auto& v : violations) lines.push_back(v.to_string());
    throw InvalidModelError(std::move(lines));
}
}  // namespace

void require_valid(const Scm& scm) { require_valid_impl(scm); }
void require_valid(const FfrcistgSpec& spec) { require_valid_impl(spec); }

Shape shape_of(const Scm& scm) {
    if (scm.find_role(Role::SeparableN) || scm.find_role(Role::SeparableO)) return Shape::Separable;
    if (scm.find_role(Role::InducedConfounder)) return Shape::InducedConfounder;
    return Shape::NoConfounder;
}

}  // namespace medcrit
