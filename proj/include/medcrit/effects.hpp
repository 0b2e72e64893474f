#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "medcrit/engine.hpp"

namespace medcrit {

/// Effect measures on the difference scale, computed from the counterfactual
/// ground truth.
struct EffectReport {
    std::string model_name;
    double te = 0.0, nde = 0.0, nie = 0.0;
    double te_r = 0.0, nde_r = 0.0, nie_r = 0.0;
    std::map<Level, double> cde, pe;
    /// Present only when the mediator support is {0, 1}.
    std::map<std::pair<Level, Level>, double> int_ref;
    /// Present only for models with an induced confounder.
    std::optional<double> nie_r_L, nie_r_La;
    /// Absent when a conditioning cell of the H draw is empty.
    std::optional<double> h_contrast;
};

struct NaturalEffects {
    double nie = 0.0, nde = 0.0;
};

struct RandomizedEffects {
    double nie_r = 0.0, nde_r = 0.0, te_r = 0.0;
};

struct LConditionedEffects {
    double nie_r_L = 0.0, nie_r_La = 0.0;
};

[[nodiscard]] double total_effect(const CounterfactualTable& t);
/// DomainError if m is outside the mediator support.
[[nodiscard]] double controlled_direct_effect(const CounterfactualTable& t, Level m);
[[nodiscard]] NaturalEffects natural_effects(const CounterfactualTable& t);
[[nodiscard]] RandomizedEffects randomized_effects(const CounterfactualTable& t);
/// DomainError without an induced confounder.
[[nodiscard]] LConditionedEffects l_conditioned_randomized_effects(const CounterfactualTable& t);
/// E[{Y(a,m) - Y(a,m') - Y(a*,m) + Y(a*,m')} M(a*)]; DomainError unless the
/// mediator support is {0, 1}.
[[nodiscard]] double reference_interaction(const CounterfactualTable& t, Level m, Level m_prime);
/// h_draw_mean(a, a) - h_draw_mean(a, a*).
[[nodiscard]] double h_contrast(const CounterfactualTable& t);

/// Everything above, with the decomposition identities checked:
///   te = nie + nde, te_r = nie_r + nde_r, pe(m) = te - cde(m),
///   te = cde(0) + int_ref(1, 0) + nie (binary M).
/// InternalConsistencyError if any identity fails by more than `tolerance`.
[[nodiscard]] EffectReport effect_report(const CounterfactualTable& t, double tolerance = 1e-12);
[[nodiscard]] EffectReport effect_report(const CausalModel& model, double tolerance = 1e-12);

}  // namespace medcrit
