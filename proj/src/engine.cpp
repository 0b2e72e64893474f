#include "medcrit/engine.hpp"

#include <algorithm>
#include <optional>

#include "medcrit/errors.hpp"

namespace medcrit {

namespace {

std::size_t position(const std::vector<Level>& support, Level v) {
    const auto it = std::find(support.begin(), support.end(), v);
    if (it == support.end()) throw DomainError("level " + std::to_string(v) + " is outside the support");
    return static_cast<std::size_t>(it - support.begin());
}

int exposure_index(const ExposureLevels& lv, Level a) {
    if (a == lv.a_star) return 0;
    if (a == lv.a) return 1;
    throw DomainError("exposure level " + std::to_string(a) + " is neither a_star nor a");
}

}  // namespace

std::vector<Unit> enumerate_units(const Scm& scm, std::size_t cap) {
    std::size_t count = 1;
    for (const auto& n : scm.noise) {
        const std::size_t k = n.pmf.size();
        if (k == 0) return {};
        if (count > cap / k) {
            throw SizeError("noise product space exceeds the cap of " + std::to_string(cap) + " units");
        }
        count *= k;
    }
    std::vector<std::vector<std::pair<Level, double>>> levels;
    for (const auto& n : scm.noise) levels.emplace_back(n.pmf.begin(), n.pmf.end());

    std::vector<Unit> units;
    std::vector<std::size_t> idx(levels.size(), 0);
    while (true) {
        Unit u;
        u.weight = 1.0;
        u.noise.resize(levels.size());
        for (std::size_t i = 0; i < levels.size(); ++i) {
            u.noise[i] = levels[i][idx[i]].first;
            u.weight *= levels[i][idx[i]].second;
        }
        if (u.weight > 0.0) units.push_back(std::move(u));
        std::size_t k = levels.size();
        while (k > 0 && ++idx[k - 1] == levels[k - 1].size()) idx[--k] = 0;
        if (k == 0) break;
    }
    return units;
}

struct Engine::Impl {
    struct Compiled {
        std::vector<std::size_t> parents;
        std::vector<std::size_t> radix;
        std::size_t noise = 0;
        std::vector<Level> noise_levels;
        std::vector<Level> table;  // [parent index * |noise| + noise position]
    };

    Scm scm;
    std::vector<Unit> units;
    std::vector<Compiled> vars;
    std::vector<std::size_t> order;
    std::size_t a = 0, m = 0, y = 0;
    std::optional<std::size_t> l;
    std::vector<std::size_t> covariates;

    std::size_t index(std::string_view name) const {
        for (std::size_t i = 0; i < scm.variables.size(); ++i)
            if (scm.variables[i].name == name) return i;
        throw DomainError("unknown variable " + std::string(name));
    }

    void compile() {
        const std::size_t n = scm.variables.size();
        vars.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& var = scm.variables[i];
            const auto* table = scm.find_table(var.name);
            auto& cv = vars[i];
            for (const auto& p : table->parents) cv.parents.push_back(index(p));
            cv.radix.assign(cv.parents.size(), 1);
            std::size_t span = 1;
            for (std::size_t j = cv.parents.size(); j-- > 0;) {
                cv.radix[j] = span;
                span *= scm.variables[cv.parents[j]].support.size();
            }
            for (std::size_t j = 0; j < scm.noise.size(); ++j)
                if (scm.noise[j].name == table->noise) cv.noise = j;
            for (const auto& [level, p] : scm.noise[cv.noise].pmf) cv.noise_levels.push_back(level);
            cv.table.assign(span * cv.noise_levels.size(), 0);
            for (const auto& row : table->rows) {
                std::size_t at = 0;
                for (std::size_t j = 0; j < cv.parents.size(); ++j)
                    at += position(scm.variables[cv.parents[j]].support, row.parents[j]) * cv.radix[j];
                cv.table[at * cv.noise_levels.size() + position(cv.noise_levels, row.noise)] = row.value;
            }
            switch (var.role) {
                case Role::Exposure: a = i; break;
                case Role::Mediator: m = i; break;
                case Role::Outcome: y = i; break;
                case Role::InducedConfounder: l = i; break;
                case Role::Covariate: covariates.push_back(i); break;
                default: break;
            }
        }
        // Kahn's algorithm; validation guarantees acyclicity.
        std::vector<int> pending(n, 0);
        for (std::size_t i = 0; i < n; ++i) pending[i] = static_cast<int>(vars[i].parents.size());
        std::vector<bool> done(n, false);
        while (order.size() < n) {
            for (std::size_t i = 0; i < n; ++i) {
                if (done[i] || pending[i] != 0) continue;
                done[i] = true;
                order.push_back(i);
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t p : vars[j].parents)
                        if (p == i) --pending[j];
            }
        }
    }

    // Values of every variable under the given fixed levels (nullopt = free).
    std::vector<Level> run(const Unit& u, const std::vector<std::optional<Level>>& fixed) const {
        std::vector<Level> values(vars.size(), 0);
        for (std::size_t i : order) {
            if (fixed[i]) {
                values[i] = *fixed[i];
                continue;
            }
            const auto& cv = vars[i];
            std::size_t at = 0;
            for (std::size_t j = 0; j < cv.parents.size(); ++j)
                at += position(scm.variables[cv.parents[j]].support, values[cv.parents[j]]) * cv.radix[j];
            values[i] = cv.table[at * cv.noise_levels.size() + position(cv.noise_levels, u.noise[cv.noise])];
        }
        return values;
    }

    std::vector<std::optional<Level>> no_fix() const { return std::vector<std::optional<Level>>(vars.size()); }
};

Engine::Engine(Scm scm, std::size_t cap, bool enumerate) : impl_(std::make_unique<Impl>()) {
    require_valid(scm);
    impl_->scm = std::move(scm);
    impl_->compile();
    if (enumerate) impl_->units = enumerate_units(impl_->scm, cap);
}

Engine::~Engine() = default;
Engine::Engine(Engine&&) noexcept = default;
Engine& Engine::operator=(Engine&&) noexcept = default;

const Scm& Engine::scm() const noexcept { return impl_->scm; }
const std::vector<Unit>& Engine::units() const noexcept { return impl_->units; }

World Engine::evaluate(const Unit& unit, const Intervention& iv) const {
    auto fixed = impl_->no_fix();
    for (const auto& [name, level] : iv.fixed) {
        const std::size_t i = impl_->index(name);
        position(impl_->scm.variables[i].support, level);
        fixed[i] = level;
    }
    const auto values = impl_->run(unit, fixed);
    World w;
    w.regime = iv;
    for (std::size_t i = 0; i < values.size(); ++i) w.assignment[impl_->scm.variables[i].name] = values[i];
    return w;
}

Level Engine::nested_outcome(const Unit& unit, Level a_outer, Level a_inner) const {
    auto fixed = impl_->no_fix();
    fixed[impl_->a] = a_inner;
    const Level m = impl_->run(unit, fixed)[impl_->m];
    fixed[impl_->a] = a_outer;
    fixed[impl_->m] = m;
    return impl_->run(unit, fixed)[impl_->y];
}

ObservedKey Engine::observe(const Unit& unit) const {
    const auto& im = *impl_;
    const auto v = im.run(unit, im.no_fix());
    ObservedKey key;
    for (std::size_t c : im.covariates) key.c.push_back(v[c]);
    key.a = v[im.a];
    key.l = im.l ? v[*im.l] : 0;
    key.m = v[im.m];
    key.y = v[im.y];
    return key;
}

ObservedLaw Engine::observational_law() const {
    const auto& im = *impl_;
    std::map<ObservedKey, double> pmf;
    for (const auto& u : im.units) pmf[observe(u)] += u.weight;
    std::vector<std::string> names;
    for (std::size_t c : im.covariates) names.push_back(im.scm.variables[c].name);
    return ObservedLaw(std::move(names), im.l.has_value(), im.scm.exposure_levels, pmf);
}

CounterfactualTable Engine::counterfactuals() const {
    const auto& im = *impl_;
    CounterfactualTable t;
    t.model_name = im.scm.name;
    t.has_l = im.l.has_value();
    t.levels = im.scm.exposure_levels;
    for (std::size_t c : im.covariates) t.covariate_names.push_back(im.scm.variables[c].name);
    if (im.l) t.l_support = im.scm.variables[*im.l].support;
    t.m_support = im.scm.variables[im.m].support;
    t.y_support = im.scm.variables[im.y].support;
    const std::size_t nm = t.m_support.size(), nl = t.l_support.size();

    t.units.reserve(im.units.size());
    for (const auto& u : im.units) {
        UnitProfile p;
        p.weight = u.weight;
        auto fixed = im.no_fix();
        const auto factual = im.run(u, fixed);
        for (std::size_t c : im.covariates) p.c.push_back(factual[c]);
        p.a = factual[im.a];
        p.l = im.l ? factual[*im.l] : 0;
        p.m = factual[im.m];
        p.y = factual[im.y];
        for (int k = 0; k < 2; ++k) {
            fixed = im.no_fix();
            fixed[im.a] = t.exposure(k);
            const auto world = im.run(u, fixed);
            p.l_cf[k] = im.l ? world[*im.l] : 0;
            p.m_cf[k] = world[im.m];
            p.y_cf[k].resize(nm);
            for (std::size_t j = 0; j < nm; ++j) {
                fixed[im.m] = t.m_support[j];
                p.y_cf[k][j] = im.run(u, fixed)[im.y];
            }
            fixed[im.m].reset();
            if (!im.l) continue;
            p.m_at_l[k].resize(nl);
            p.y_at_l[k].resize(nl * nm);
            for (std::size_t i = 0; i < nl; ++i) {
                fixed[*im.l] = t.l_support[i];
                fixed[im.m].reset();
                p.m_at_l[k][i] = im.run(u, fixed)[im.m];
                for (std::size_t j = 0; j < nm; ++j) {
                    fixed[im.m] = t.m_support[j];
                    p.y_at_l[k][i * nm + j] = im.run(u, fixed)[im.y];
                }
            }
        }
        t.units.push_back(std::move(p));
    }
    return t;
}

Level nested_outcome(const FfrcistgSpec& spec, const CounterfactualAtom& atom, Level a_outer, Level a_inner) {
    const int k = exposure_index(spec.exposure_levels, a_outer);
    const int j = exposure_index(spec.exposure_levels, a_inner);
    return atom.outcome[k][position(spec.mediator_support, atom.mediator[j])];
}

std::size_t CounterfactualTable::m_pos(Level m) const { return position(m_support, m); }
std::size_t CounterfactualTable::l_pos(Level l) const { return position(l_support, l); }

namespace {

CounterfactualTable table_of(const FfrcistgSpec& spec) {
    require_valid(spec);
    CounterfactualTable t;
    t.model_name = spec.name;
    t.levels = spec.exposure_levels;
    t.covariate_names = spec.covariate_names;
    t.m_support = spec.mediator_support;
    t.y_support = spec.outcome_support;
    for (const auto& atom : spec.atoms) {
        if (!(atom.probability > 0.0)) continue;
        UnitProfile p;
        p.weight = atom.probability;
        p.c = atom.covariates;
        p.a = atom.exposure;
        const int k = exposure_index(spec.exposure_levels, atom.exposure);
        p.m = atom.mediator[k];
        p.y = atom.outcome[k][t.m_pos(p.m)];
        p.m_cf = atom.mediator;
        p.y_cf = atom.outcome;
        t.units.push_back(std::move(p));
    }
    return t;
}

struct Stratum {
    double w = 0.0;
    std::vector<double> draw;     // mass of each mediator level under the draw law
    std::vector<double> outcome;  // weighted sum of Y(a_set, m)
};

double combine(const std::map<std::vector<Level>, Stratum>& strata) {
    double total = 0.0;
    for (const auto& [key, s] : strata) {
        for (std::size_t j = 0; j < s.draw.size(); ++j) total += s.draw[j] * s.outcome[j] / s.w;
    }
    return total;
}

}  // namespace

CounterfactualTable counterfactual_table(const CausalModel& model, std::size_t cap) {
    if (const auto* scm = std::get_if<Scm>(&model)) return Engine(*scm, cap).counterfactuals();
    return table_of(std::get<FfrcistgSpec>(model));
}

ObservedLaw observational_law(const CounterfactualTable& table) {
    std::map<ObservedKey, double> pmf;
    for (const auto& u : table.units) pmf[ObservedKey{u.c, u.a, u.l, u.m, u.y}] += u.weight;
    return ObservedLaw(table.covariate_names, table.has_l, table.levels, pmf);
}

ObservedLaw observational_law(const CausalModel& model) {
    if (const auto* scm = std::get_if<Scm>(&model)) return Engine(*scm).observational_law();
    return observational_law(table_of(std::get<FfrcistgSpec>(model)));
}

double g_draw_mean(const CounterfactualTable& t, Level a_set, Level a_draw, Conditioning cond) {
    const int ks = exposure_index(t.levels, a_set);
    const int kd = exposure_index(t.levels, a_draw);
    if (cond != Conditioning::C && !t.has_l) {
        throw DomainError("conditioning on L requires a model with an induced confounder");
    }
    const std::size_t nm = t.m_support.size();
    std::map<std::vector<Level>, Stratum> strata;
    for (const auto& u : t.units) {
        std::vector<Level> key = u.c;
        Level drawn = u.m_cf[kd];
        const Level* outcomes = u.y_cf[ks].data();
        if (cond == Conditioning::CAndObservedL) {
            const std::size_t i = t.l_pos(u.l);
            key.push_back(u.l);
            drawn = u.m_at_l[kd][i];
            outcomes = u.y_at_l[ks].data() + i * nm;
        } else if (cond == Conditioning::CAndCounterfactualL) {
            key.push_back(u.l_cf[kd]);
        }
        auto& s = strata[key];
        if (s.draw.empty()) {
            s.draw.assign(nm, 0.0);
            s.outcome.assign(nm, 0.0);
        }
        s.w += u.weight;
        s.draw[t.m_pos(drawn)] += u.weight;
        for (std::size_t j = 0; j < nm; ++j) s.outcome[j] += u.weight * outcomes[j];
    }
    return combine(strata);
}

double h_draw_mean(const CounterfactualTable& t, Level a_stratum, Level a_draw) {
    const int ks = exposure_index(t.levels, a_stratum);
    exposure_index(t.levels, a_draw);
    const std::size_t nm = t.m_support.size();
    struct Cell {
        double w = 0.0, w_draw = 0.0, w_stratum = 0.0;
        std::vector<double> draw, outcome;
    };
    std::map<std::vector<Level>, Cell> cells;
    for (const auto& u : t.units) {
        auto& c = cells[u.c];
        if (c.draw.empty()) {
            c.draw.assign(nm, 0.0);
            c.outcome.assign(nm, 0.0);
        }
        c.w += u.weight;
        if (u.a == a_draw) {
            c.w_draw += u.weight;
            c.draw[t.m_pos(u.m)] += u.weight;
        }
        if (u.a == a_stratum) {
            c.w_stratum += u.weight;
            for (std::size_t j = 0; j < nm; ++j) c.outcome[j] += u.weight * u.y_cf[ks][j];
        }
    }
    double total = 0.0;
    for (const auto& [c, cell] : cells) {
        auto label = [&] {
            std::string s = "C=(";
            for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
            return s + ")";
        };
        if (!(cell.w_draw > 0.0)) {
            throw DegenerateStratumError("P(A=" + std::to_string(a_draw) + ", " + label() + ") = 0");
        }
        if (!(cell.w_stratum > 0.0)) {
            throw DegenerateStratumError("P(A=" + std::to_string(a_stratum) + ", " + label() + ") = 0");
        }
        for (std::size_t j = 0; j < nm; ++j) {
            total += cell.w * (cell.draw[j] / cell.w_draw) * (cell.outcome[j] / cell.w_stratum);
        }
    }
    return total;
}

}  // namespace medcrit
