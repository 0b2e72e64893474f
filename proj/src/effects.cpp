#include "medcrit/effects.hpp"

#include <cmath>
#include <cstdio>

#include "medcrit/errors.hpp"

namespace medcrit {

namespace {

// E[Y(a_k, M(a_j))].
double nested_mean(const CounterfactualTable& t, int k, int j) {
    double s = 0.0;
    for (const auto& u : t.units) s += u.weight * t.nested(u, k, j);
    return s;
}

// E[Y(a_k, m)].
double controlled_mean(const CounterfactualTable& t, int k, std::size_t m_pos) {
    double s = 0.0;
    for (const auto& u : t.units) s += u.weight * u.y_cf[k][m_pos];
    return s;
}

void check_identity(const char* what, double lhs, double rhs, double tolerance) {
    if (!(std::abs(lhs - rhs) <= tolerance)) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s: %.17g vs %.17g", what, lhs, rhs);
        throw InternalConsistencyError(buf);
    }
}

bool binary_mediator(const CounterfactualTable& t) { return t.m_support == std::vector<Level>{0, 1}; }

}  // namespace

double total_effect(const CounterfactualTable& t) { return nested_mean(t, 1, 1) - nested_mean(t, 0, 0); }

double controlled_direct_effect(const CounterfactualTable& t, Level m) {
    const std::size_t j = t.m_pos(m);
    return controlled_mean(t, 1, j) - controlled_mean(t, 0, j);
}

NaturalEffects natural_effects(const CounterfactualTable& t) {
    const double y11 = nested_mean(t, 1, 1), y10 = nested_mean(t, 1, 0), y00 = nested_mean(t, 0, 0);
    return {y11 - y10, y10 - y00};
}

RandomizedEffects randomized_effects(const CounterfactualTable& t) {
    const Level a = t.levels.a, as = t.levels.a_star;
    const double g11 = g_draw_mean(t, a, a, Conditioning::C);
    const double g10 = g_draw_mean(t, a, as, Conditioning::C);
    const double g00 = g_draw_mean(t, as, as, Conditioning::C);
    return {g11 - g10, g10 - g00, g11 - g00};
}

LConditionedEffects l_conditioned_randomized_effects(const CounterfactualTable& t) {
    if (!t.has_l) throw DomainError("L-conditioned randomized effects need a model with an induced confounder");
    const Level a = t.levels.a, as = t.levels.a_star;
    return {g_draw_mean(t, a, a, Conditioning::CAndObservedL) - g_draw_mean(t, a, as, Conditioning::CAndObservedL),
            g_draw_mean(t, a, a, Conditioning::CAndCounterfactualL) -
                g_draw_mean(t, a, as, Conditioning::CAndCounterfactualL)};
}

double reference_interaction(const CounterfactualTable& t, Level m, Level m_prime) {
    if (!binary_mediator(t)) throw DomainError("the reference interaction is defined for a mediator with support {0, 1}");
    const std::size_t i = t.m_pos(m), j = t.m_pos(m_prime);
    double s = 0.0;
    for (const auto& u : t.units) {
        const double contrast = u.y_cf[1][i] - u.y_cf[1][j] - u.y_cf[0][i] + u.y_cf[0][j];
        s += u.weight * contrast * u.m_cf[0];
    }
    return s;
}

double h_contrast(const CounterfactualTable& t) {
    return h_draw_mean(t, t.levels.a, t.levels.a) - h_draw_mean(t, t.levels.a, t.levels.a_star);
}

EffectReport effect_report(const CounterfactualTable& t, double tolerance) {
    EffectReport r;
    r.model_name = t.model_name;
    r.te = total_effect(t);
    const auto nat = natural_effects(t);
    r.nie = nat.nie;
    r.nde = nat.nde;
    const auto ran = randomized_effects(t);
    r.nie_r = ran.nie_r;
    r.nde_r = ran.nde_r;
    r.te_r = ran.te_r;
    for (Level m : t.m_support) {
        r.cde[m] = controlled_direct_effect(t, m);
        r.pe[m] = r.te - r.cde[m];
    }
    if (binary_mediator(t)) {
        for (Level m : t.m_support)
            for (Level mp : t.m_support) r.int_ref[{m, mp}] = reference_interaction(t, m, mp);
    }
    if (t.has_l) {
        const auto lc = l_conditioned_randomized_effects(t);
        r.nie_r_L = lc.nie_r_L;
        r.nie_r_La = lc.nie_r_La;
    }
    try {
        r.h_contrast = h_contrast(t);
    } catch (const DegenerateStratumError&) {
        r.h_contrast.reset();
    }

    check_identity("te = nie + nde", r.te, r.nie + r.nde, tolerance);
    check_identity("te_r = nie_r + nde_r", r.te_r, r.nie_r + r.nde_r, tolerance);
    for (const auto& [m, cde] : r.cde) check_identity("pe(m) = te - cde(m)", r.pe[m], r.te - cde, tolerance);
    if (!r.int_ref.empty()) {
        check_identity("te = cde(0) + int_ref(1,0) + nie", r.te, r.cde[0] + r.int_ref[{1, 0}] + r.nie, tolerance);
    }
    return r;
}

EffectReport effect_report(const CausalModel& model, double tolerance) {
    return effect_report(counterfactual_table(model), tolerance);
}

}  // namespace medcrit
