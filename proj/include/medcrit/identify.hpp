#pragma once

#include <string>
#include <string_view>

#include "medcrit/engine.hpp"
#include "medcrit/observed_law.hpp"

namespace medcrit {

// Identification functionals. They read the observed law only; a needed
// conditional on an empty cell raises DegenerateStratumError naming the cell.

/// E{E(Y | a, C)} - E{E(Y | a*, C)}.
[[nodiscard]] double psi_te(const ObservedLaw& law);

/// E{E(Y | m, a, C)} - E{E(Y | m, a*, C)}; with an induced confounder the
/// g-formula sum_l P(l | a', C) E(Y | m, l, a', C) replaces E(Y | m, a', C).
[[nodiscard]] double psi_cde(const ObservedLaw& law, Level m);

/// psi_te - psi_cde(m).
[[nodiscard]] double psi_pe(const ObservedLaw& law, Level m);

/// Mediation formula E{E(Y | a, C)} - E[E{E(Y | M, a, C) | a*, C}]. Requires
/// f(m | a', C) > 0 for every mediator level carrying mass.
[[nodiscard]] double psi_nie(const ObservedLaw& law);

/// E[sum_m sum_l E(Y | m, l, a, C) P(l | a, C) {P(m | a, C) - P(m | a*, C)}].
[[nodiscard]] double psi_nie_r_L(const ObservedLaw& law);

/// E{E(Y | L, a, C)} - E[E{E(Y | M, L, a, C) | L, a*, C}], the functional of
/// the G(a' | C, L) contrast.
[[nodiscard]] double psi_nie_rl(const ObservedLaw& law);

/// Estimand selector shared by the estimation and CLI layers.
struct Estimand {
    enum class Kind { Te, Cde, Pe, Nie, NieRL, NieRl };
    Kind kind = Kind::Nie;
    Level m = 0;  // Cde and Pe only
};

/// Accepts psi_te, psi_cde(m), psi_pe(m), psi_nie, psi_nie_r_L, psi_nie_rl.
[[nodiscard]] Estimand parse_estimand(std::string_view text);
[[nodiscard]] std::string estimand_name(const Estimand& e);
[[nodiscard]] double evaluate(const ObservedLaw& law, const Estimand& e);

enum class Assumption {
    A1,  // Y(a', m) indep A | C
    A2,  // Y(a', m) indep M | C, A = a'
    A3,  // M(a') indep A | C
    A4,  // Y(a, m) indep M(a*) | C
    A6,  // positivity
    A7,  // Y(a', m) indep M | L, C, A = a'
};

[[nodiscard]] std::string_view assumption_name(Assumption a) noexcept;

struct AssumptionVerdict {
    Assumption assumption = Assumption::A1;
    bool holds = true;
    /// Largest |P(x, y | s) - P(x | s) P(y | s)| over strata s and cells; for
    /// positivity, 1 if a required cell is empty and 0 otherwise.
    double worst_violation = 0.0;
    std::string witness;  // empty when the assumption holds
};

inline constexpr double kIndependenceTolerance = 1e-9;

[[nodiscard]] AssumptionVerdict check_assumption(const CounterfactualTable& t, Assumption which);

}  // namespace medcrit
