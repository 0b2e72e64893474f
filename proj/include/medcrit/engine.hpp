#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "medcrit/model.hpp"
#include "medcrit/observed_law.hpp"

namespace medcrit {

inline constexpr std::size_t kDefaultUnitCap = 100'000'000;

/// One joint configuration of the exogenous noise. `noise[i]` is the level of
/// `Scm::noise[i]`.
struct Unit {
    std::vector<Level> noise;
    double weight = 0.0;
};

struct Intervention {
    std::map<std::string, Level> fixed;
};

struct World {
    std::map<std::string, Level> assignment;
    Intervention regime;
};

/// Every counterfactual of one unit that the effect and criteria code needs.
/// Index k of each array is 0 for a* and 1 for a; mediator and L values are
/// stored as levels, vectors over m or l are indexed by support position.
struct UnitProfile {
    double weight = 0.0;
    std::vector<Level> c;
    Level a = 0, l = 0, m = 0, y = 0;       // factual values
    std::array<Level, 2> l_cf{};             // L(a')
    std::array<Level, 2> m_cf{};             // M(a')
    std::array<std::vector<Level>, 2> y_cf;  // Y(a', m), L left at L(a')
    std::array<std::vector<Level>, 2> m_at_l;  // M(a', l) by position of l
    std::array<std::vector<Level>, 2> y_at_l;  // Y(a', l, m) at [pos(l) * |M| + pos(m)]
};

/// Counterfactual profiles of every positive-weight unit (or atom).
struct CounterfactualTable {
    std::string model_name;
    bool has_l = false;
    ExposureLevels levels;
    std::vector<std::string> covariate_names;
    std::vector<Level> l_support, m_support, y_support;
    std::vector<UnitProfile> units;

    [[nodiscard]] std::size_t m_pos(Level m) const;
    [[nodiscard]] std::size_t l_pos(Level l) const;
    [[nodiscard]] Level exposure(int k) const noexcept { return k == 0 ? levels.a_star : levels.a; }
    /// Y(a_k, M(a_j)) of a unit.
    [[nodiscard]] Level nested(const UnitProfile& u, int k, int j) const { return u.y_cf[k][m_pos(u.m_cf[j])]; }
};

/// Positive-weight units of the noise product space, in lexicographic order
/// of noise levels. SizeError if the product space exceeds `cap`.
[[nodiscard]] std::vector<Unit> enumerate_units(const Scm& scm, std::size_t cap = kDefaultUnitCap);

/// Evaluates structural tables of a validated SCM.
class Engine {
public:
    /// With `enumerate` false the unit list stays empty and only evaluation
    /// of given units is available (the sampling path).
    explicit Engine(Scm scm, std::size_t cap = kDefaultUnitCap, bool enumerate = true);
    ~Engine();
    Engine(Engine&&) noexcept;
    Engine& operator=(Engine&&) noexcept;

    [[nodiscard]] const Scm& scm() const noexcept;
    [[nodiscard]] const std::vector<Unit>& units() const noexcept;

    /// DomainError if an intervened level is outside its variable's support.
    [[nodiscard]] World evaluate(const Unit& unit, const Intervention& iv) const;

    /// Y(a_outer, M(a_inner)) for one unit.
    [[nodiscard]] Level nested_outcome(const Unit& unit, Level a_outer, Level a_inner) const;

    /// Factual (c, a, l, m, y) of one unit.
    [[nodiscard]] ObservedKey observe(const Unit& unit) const;

    [[nodiscard]] ObservedLaw observational_law() const;

    /// Profiles of every unit, in unit order.
    [[nodiscard]] CounterfactualTable counterfactuals() const;

    struct Impl;

private:
    std::unique_ptr<Impl> impl_;
};

/// Y(a_outer, M(a_inner)) for one atom of an explicit counterfactual joint.
[[nodiscard]] Level nested_outcome(const FfrcistgSpec& spec, const CounterfactualAtom& atom, Level a_outer,
                                   Level a_inner);

/// Validates the model (InvalidModelError) and enumerates it.
[[nodiscard]] CounterfactualTable counterfactual_table(const CausalModel& model, std::size_t cap = kDefaultUnitCap);

[[nodiscard]] ObservedLaw observational_law(const CounterfactualTable& table);
[[nodiscard]] ObservedLaw observational_law(const CausalModel& model);

/// How the randomized draw G(a_draw) is conditioned.
enum class Conditioning {
    C,                    // M(a_draw) | C
    CAndObservedL,        // M(a_draw) | C, L = l, with L held at l in both worlds
    CAndCounterfactualL,  // M(a_draw) | C, L(a_draw)
};

/// E[Y{a_set, G(a_draw)}] as a stratum-weighted closed-form sum. The L
/// variants need a model with an induced confounder (DomainError otherwise).
[[nodiscard]] double g_draw_mean(const CounterfactualTable& table, Level a_set, Level a_draw, Conditioning cond);

/// E over C of sum_m P(M = m | A = a_draw, C) E[Y(a_stratum, m) | A = a_stratum, C].
/// DegenerateStratumError if either conditioning cell is empty on a C stratum.
[[nodiscard]] double h_draw_mean(const CounterfactualTable& table, Level a_stratum, Level a_draw);

}  // namespace medcrit
