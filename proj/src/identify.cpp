#include "medcrit/identify.hpp"

#include <cmath>
#include <optional>
#include <cstdlib>
#include <map>
#include <set>

#include "medcrit/errors.hpp"

namespace medcrit {

namespace {

using Key = std::vector<Level>;

Key key(const std::vector<Level>& c, std::initializer_list<Level> rest) {
    Key k = c;
    k.insert(k.end(), rest);
    return k;
}

double get(const std::map<Key, double>& m, const Key& k) {
    const auto it = m.find(k);
    return it == m.end() ? 0.0 : it->second;
}

// Marginal masses of the observed law, and Y-weighted masses for conditional
// means. Keys are the covariate tuple followed by the listed levels.
struct Masses {
    std::map<Key, double> c, ac, y_ac, mac, y_mac, lac, mlac, y_mlac, lc;

    explicit Masses(const ObservedLaw& law) {
        for (const auto& [k, p] : law.pmf()) {
            c[k.c] += p;
            ac[key(k.c, {k.a})] += p;
            y_ac[key(k.c, {k.a})] += p * k.y;
            mac[key(k.c, {k.a, k.m})] += p;
            y_mac[key(k.c, {k.a, k.m})] += p * k.y;
            lac[key(k.c, {k.a, k.l})] += p;
            mlac[key(k.c, {k.a, k.l, k.m})] += p;
            y_mlac[key(k.c, {k.a, k.l, k.m})] += p * k.y;
            lc[key(k.c, {k.l})] += p;
        }
    }
};

[[noreturn]] void empty_cell(const ObservedLaw& law, const Key& c, Level a, const Level* l, const Level* m) {
    std::string cell = law.describe(c) + ", A=" + std::to_string(a);
    if (l) cell += ", L=" + std::to_string(*l);
    if (m) cell += ", M=" + std::to_string(*m);
    throw DegenerateStratumError("empty cell P(" + cell + ") = 0");
}

double require(const ObservedLaw& law, const std::map<Key, double>& masses, const Key& c, Level a, const Level* l,
               const Level* m) {
    Key k = key(c, {a});
    if (l) k.push_back(*l);
    if (m) k.push_back(*m);
    const double p = get(masses, k);
    if (!(p > 0.0)) empty_cell(law, c, a, l, m);
    return p;
}

// E(Y | a', C = c).
double mean_given_a(const ObservedLaw& law, const Masses& s, const Key& c, Level a) {
    const double p = require(law, s.ac, c, a, nullptr, nullptr);
    return get(s.y_ac, key(c, {a})) / p;
}

// E(Y | m, a', C = c).
double mean_given_ma(const ObservedLaw& law, const Masses& s, const Key& c, Level a, Level m) {
    const double p = require(law, s.mac, c, a, nullptr, &m);
    return get(s.y_mac, key(c, {a, m})) / p;
}

// E(Y | m, l, a', C = c).
double mean_given_mla(const ObservedLaw& law, const Masses& s, const Key& c, Level a, Level l, Level m) {
    const double p = require(law, s.mlac, c, a, &l, &m);
    return get(s.y_mlac, key(c, {a, l, m})) / p;
}

}  // namespace

double psi_te(const ObservedLaw& law) {
    const Masses s(law);
    const Level a = law.levels().a, as = law.levels().a_star;
    double total = 0.0;
    for (const auto& [c, pc] : s.c) total += pc * (mean_given_a(law, s, c, a) - mean_given_a(law, s, c, as));
    return total;
}

double psi_cde(const ObservedLaw& law, Level m) {
    const Masses s(law);
    const Level a = law.levels().a, as = law.levels().a_star;
    double total = 0.0;
    for (const auto& [c, pc] : s.c) {
        double arm[2];
        const Level levels[2] = {as, a};
        for (int k = 0; k < 2; ++k) {
            if (!law.has_l()) {
                arm[k] = mean_given_ma(law, s, c, levels[k], m);
                continue;
            }
            const double pa = require(law, s.ac, c, levels[k], nullptr, nullptr);
            arm[k] = 0.0;
            for (Level l : law.l_support()) {
                const double pl = get(s.lac, key(c, {levels[k], l}));
                if (pl > 0.0) arm[k] += pl / pa * mean_given_mla(law, s, c, levels[k], l, m);
            }
        }
        total += pc * (arm[1] - arm[0]);
    }
    return total;
}

double psi_pe(const ObservedLaw& law, Level m) { return psi_te(law) - psi_cde(law, m); }

double psi_nie(const ObservedLaw& law) {
    const Masses s(law);
    const Level a = law.levels().a, as = law.levels().a_star;
    double total = 0.0;
    for (const auto& [c, pc] : s.c) {
        const double p_as = require(law, s.ac, c, as, nullptr, nullptr);
        double cross = 0.0;
        for (Level m : law.m_support()) {
            const double pm_as = require(law, s.mac, c, as, nullptr, &m);
            require(law, s.mac, c, a, nullptr, &m);
            cross += mean_given_ma(law, s, c, a, m) * pm_as / p_as;
        }
        total += pc * (mean_given_a(law, s, c, a) - cross);
    }
    return total;
}

double psi_nie_r_L(const ObservedLaw& law) {
    const Masses s(law);
    const Level a = law.levels().a, as = law.levels().a_star;
    double total = 0.0;
    for (const auto& [c, pc] : s.c) {
        const double p_a = require(law, s.ac, c, a, nullptr, nullptr);
        const double p_as = require(law, s.ac, c, as, nullptr, nullptr);
        double inner = 0.0;
        for (Level m : law.m_support()) {
            const double pm_a = get(s.mac, key(c, {a, m})) / p_a;
            const double pm_as = get(s.mac, key(c, {as, m})) / p_as;
            if (pm_a == 0.0 && pm_as == 0.0) continue;
            for (Level l : law.l_support()) {
                const double pl_a = get(s.lac, key(c, {a, l})) / p_a;
                if (pl_a == 0.0) continue;
                inner += mean_given_mla(law, s, c, a, l, m) * pl_a * (pm_a - pm_as);
            }
        }
        total += pc * inner;
    }
    return total;
}

double psi_nie_rl(const ObservedLaw& law) {
    const Masses s(law);
    const Level a = law.levels().a, as = law.levels().a_star;
    double total = 0.0;
    for (const auto& [c, pc] : s.c) {
        (void)pc;
        for (Level l : law.l_support()) {
            const double pcl = get(s.lc, key(c, {l}));
            if (!(pcl > 0.0)) continue;
            const double pl_a = require(law, s.lac, c, a, &l, nullptr);
            const double pl_as = require(law, s.lac, c, as, &l, nullptr);
            double inner = 0.0;
            for (Level m : law.m_support()) {
                const double pm_a = get(s.mlac, key(c, {a, l, m})) / pl_a;
                const double pm_as = get(s.mlac, key(c, {as, l, m})) / pl_as;
                if (pm_a == 0.0 && pm_as == 0.0) continue;
                inner += mean_given_mla(law, s, c, a, l, m) * (pm_a - pm_as);
            }
            total += pcl * inner;
        }
    }
    return total;
}

Estimand parse_estimand(std::string_view text) {
    auto with_m = [&](std::string_view prefix, Estimand::Kind kind) -> std::optional<Estimand> {
        if (text.substr(0, prefix.size()) != prefix || text.size() < prefix.size() + 2 || text.back() != ')') {
            return std::nullopt;
        }
        const std::string inner(text.substr(prefix.size(), text.size() - prefix.size() - 1));
        char* end = nullptr;
        const long m = std::strtol(inner.c_str(), &end, 10);
        if (inner.empty() || end != inner.c_str() + inner.size()) return std::nullopt;
        return Estimand{kind, static_cast<Level>(m)};
    };
    if (text == "psi_te") return {Estimand::Kind::Te, 0};
    if (text == "psi_nie") return {Estimand::Kind::Nie, 0};
    if (text == "psi_nie_r_L") return {Estimand::Kind::NieRL, 0};
    if (text == "psi_nie_rl") return {Estimand::Kind::NieRl, 0};
    if (auto e = with_m("psi_cde(", Estimand::Kind::Cde)) return *e;
    if (auto e = with_m("psi_pe(", Estimand::Kind::Pe)) return *e;
    throw DomainError("unknown estimand \"" + std::string(text) +
                     "\" (expected psi_te, psi_cde(m), psi_pe(m), psi_nie, psi_nie_r_L or psi_nie_rl)");
}

std::string estimand_name(const Estimand& e) {
    switch (e.kind) {
        case Estimand::Kind::Te: return "psi_te";
        case Estimand::Kind::Cde: return "psi_cde(" + std::to_string(e.m) + ")";
        case Estimand::Kind::Pe: return "psi_pe(" + std::to_string(e.m) + ")";
        case Estimand::Kind::Nie: return "psi_nie";
        case Estimand::Kind::NieRL: return "psi_nie_r_L";
        case Estimand::Kind::NieRl: return "psi_nie_rl";
    }
    return "?";
}

double evaluate(const ObservedLaw& law, const Estimand& e) {
    switch (e.kind) {
        case Estimand::Kind::Te: return psi_te(law);
        case Estimand::Kind::Cde: return psi_cde(law, e.m);
        case Estimand::Kind::Pe: return psi_pe(law, e.m);
        case Estimand::Kind::Nie: return psi_nie(law);
        case Estimand::Kind::NieRL: return psi_nie_r_L(law);
        case Estimand::Kind::NieRl: return psi_nie_rl(law);
    }
    return 0.0;
}

std::string_view assumption_name(Assumption a) noexcept {
    switch (a) {
        case Assumption::A1: return "A1";
        case Assumption::A2: return "A2";
        case Assumption::A3: return "A3";
        case Assumption::A4: return "A4";
        case Assumption::A6: return "A6";
        case Assumption::A7: return "A7";
    }
    return "?";
}

namespace {

// Accumulates the joint of (X, Y) within strata and reports the largest
// departure from conditional independence.
class IndependenceCheck {
public:
    void add(const Key& stratum, Level x, Level y, double w) {
        auto& s = strata_[stratum];
        s.w += w;
        s.x[x] += w;
        s.y[y] += w;
        s.xy[{x, y}] += w;
    }

    void finish(const std::string& label, double& worst, std::string& witness) const {
        for (const auto& [key, s] : strata_) {
            for (const auto& [x, px] : s.x)
                for (const auto& [y, py] : s.y) {
                    const auto it = s.xy.find({x, y});
                    const double pxy = it == s.xy.end() ? 0.0 : it->second;
                    const double dev = std::abs(pxy / s.w - (px / s.w) * (py / s.w));
                    if (dev > worst) {
                        worst = dev;
                        witness = label + " at stratum (";
                        for (std::size_t i = 0; i < key.size(); ++i) witness += (i ? "," : "") + std::to_string(key[i]);
                        witness += "), cell (" + std::to_string(x) + "," + std::to_string(y) + ")";
                    }
                }
        }
    }

private:
    struct Stratum {
        double w = 0.0;
        std::map<Level, double> x, y;
        std::map<std::pair<Level, Level>, double> xy;
    };
    std::map<Key, Stratum> strata_;
};

}  // namespace

AssumptionVerdict check_assumption(const CounterfactualTable& t, Assumption which) {
    AssumptionVerdict v;
    v.assumption = which;
    const std::size_t nm = t.m_support.size();
    auto y_label = [&](int k, std::size_t j) {
        return "Y(" + std::to_string(t.exposure(k)) + "," + std::to_string(t.m_support[j]) + ")";
    };

    if (which == Assumption::A6) {
        std::set<Level> m_levels;
        std::map<Key, double> pc, cell;
        for (const auto& u : t.units) {
            m_levels.insert(u.m);
            m_levels.insert(u.m_cf[0]);
            m_levels.insert(u.m_cf[1]);
            pc[u.c] += u.weight;
            cell[key(u.c, {u.a})] += u.weight;
            cell[key(u.c, {u.a, u.m})] += u.weight;
        }
        for (const auto& [c, p] : pc) {
            (void)p;
            for (int k = 0; k < 2; ++k) {
                const Level a = t.exposure(k);
                std::string stratum = "C=(";
                for (std::size_t i = 0; i < c.size(); ++i) stratum += (i ? "," : "") + std::to_string(c[i]);
                stratum += ")";
                if (!(get(cell, key(c, {a})) > 0.0)) {
                    v.holds = false;
                    v.worst_violation = 1.0;
                    v.witness = "P(A=" + std::to_string(a) + " | " + stratum + ") = 0";
                    return v;
                }
                for (Level m : m_levels) {
                    if (!(get(cell, key(c, {a, m})) > 0.0)) {
                        v.holds = false;
                        v.worst_violation = 1.0;
                        v.witness = "f(M=" + std::to_string(m) + " | A=" + std::to_string(a) + ", " + stratum + ") = 0";
                        return v;
                    }
                }
            }
        }
        return v;
    }

    double worst = 0.0;
    std::string witness;
    switch (which) {
        case Assumption::A1:
            for (int k = 0; k < 2; ++k)
                for (std::size_t j = 0; j < nm; ++j) {
                    IndependenceCheck ci;
                    for (const auto& u : t.units) ci.add(u.c, u.a, u.y_cf[k][j], u.weight);
                    ci.finish(y_label(k, j) + " vs A given C", worst, witness);
                }
            break;
        case Assumption::A2:
        case Assumption::A7:
            for (int k = 0; k < 2; ++k)
                for (std::size_t j = 0; j < nm; ++j) {
                    IndependenceCheck ci;
                    for (const auto& u : t.units) {
                        if (u.a != t.exposure(k)) continue;
                        ci.add(which == Assumption::A7 ? key(u.c, {u.l}) : u.c, u.m, u.y_cf[k][j], u.weight);
                    }
                    ci.finish(y_label(k, j) + " vs M given " + (which == Assumption::A7 ? "L, C" : "C") +
                                  ", A=" + std::to_string(t.exposure(k)),
                              worst, witness);
                }
            break;
        case Assumption::A3:
            for (int k = 0; k < 2; ++k) {
                IndependenceCheck ci;
                for (const auto& u : t.units) ci.add(u.c, u.a, u.m_cf[k], u.weight);
                ci.finish("M(" + std::to_string(t.exposure(k)) + ") vs A given C", worst, witness);
            }
            break;
        case Assumption::A4:
            for (std::size_t j = 0; j < nm; ++j) {
                IndependenceCheck ci;
                for (const auto& u : t.units) ci.add(u.c, u.m_cf[0], u.y_cf[1][j], u.weight);
                ci.finish(y_label(1, j) + " vs M(" + std::to_string(t.levels.a_star) + ") given C", worst, witness);
            }
            break;
        case Assumption::A6: break;
    }
    v.worst_violation = worst;
    v.holds = worst <= kIndependenceTolerance;
    if (!v.holds) v.witness = witness;
    return v;
}

}  // namespace medcrit
