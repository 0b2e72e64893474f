#include <catch_amalgamated.hpp>

#include "medcrit/effects.hpp"
#include "medcrit/engine.hpp"
#include "medcrit/errors.hpp"
#include "medcrit/factories.hpp"
#include "oracle.hpp"

using namespace medcrit;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<Scm> random_models() {
    std::vector<Scm> out;
    for (std::uint64_t s = 0; s < 12; ++s) {
        out.push_back(random_scm({s, s % 2 == 1, false, true}));
        out.push_back(random_scm({s, s % 2 == 1, true, true}));
    }
    out.push_back(induced_confounder_scm(0.3, 0.8));
    out.push_back(three_level_confounder_scm(0.2, 0.3, 0.5, 0.9));
    out.push_back(additive_outcome_scm({3, true, true, false, true}));
    out.push_back(separable_scm({4, true, false}));
    return out;
}

}  // namespace

TEST_CASE("unit enumeration matches the noise product") {
    for (const auto& scm : random_models()) {
        const auto units = enumerate_units(scm);
        const auto atoms = oracle::atoms(scm);
        REQUIRE(units.size() == atoms.size());
        double total = 0;
        for (std::size_t i = 0; i < units.size(); ++i) {
            total += units[i].weight;
            CHECK_THAT(units[i].weight, WithinAbs(atoms[i].w, 1e-15));
        }
        CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("enumeration above the cap raises a size error") {
    CHECK_THROWS_AS(enumerate_units(three_level_confounder_scm(0.2, 0.3, 0.5, 0.9), 5), SizeError);
    CHECK_THROWS_AS(counterfactual_table(CausalModel(random_scm({1, true, true, true})), 3), SizeError);
}

TEST_CASE("nested counterfactuals agree with row-by-row evaluation") {
    for (const auto& scm : random_models()) {
        const Engine engine(scm);
        const auto atoms = oracle::atoms(scm);
        const std::string m = scm.find_role(Role::Mediator)->name, y = scm.find_role(Role::Outcome)->name,
                          a = scm.find_role(Role::Exposure)->name;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            for (Level outer : {0, 1})
                for (Level inner : {0, 1}) {
                    const Level mi = oracle::solve(scm, atoms[i], {{a, inner}}).at(m);
                    const Level expected = oracle::solve(scm, atoms[i], {{a, outer}, {m, mi}}).at(y);
                    REQUIRE(engine.nested_outcome(engine.units()[i], outer, inner) == expected);
                }
        }
    }
}

TEST_CASE("interventions outside the support are domain errors") {
    const Engine engine(pe_counterexample(0.5));
    CHECK_THROWS_AS(engine.evaluate(engine.units()[0], Intervention{{{"A", 7}}}), DomainError);
    CHECK_THROWS_AS(engine.evaluate(engine.units()[0], Intervention{{{"Q", 0}}}), DomainError);
}

TEST_CASE("observational law agrees with the oracle") {
    for (const auto& scm : random_models()) {
        const auto law = observational_law(CausalModel(scm));
        const auto expected = oracle::observed(scm);
        std::size_t positive = 0;
        for (const auto& [k, p] : expected) {
            if (p <= 0) continue;
            ++positive;
            REQUIRE(law.pmf().contains(k));
            CHECK_THAT(law.pmf().at(k), WithinAbs(p, 1e-14));
        }
        CHECK(law.pmf().size() == positive);
        CHECK_THAT(law.total(), WithinAbs(1.0, 1e-12));
    }
}

TEST_CASE("randomized draws match explicit pair sums") {
    for (const auto& scm : random_models()) {
        const auto t = counterfactual_table(CausalModel(scm));
        const auto o = oracle::effects(scm);
        const auto r = randomized_effects(t);
        CHECK_THAT(r.nie_r, WithinAbs(o.nie_r, 1e-12));
        CHECK_THAT(r.nde_r, WithinAbs(o.nde_r, 1e-12));
        if (t.has_l) {
            const auto l = l_conditioned_randomized_effects(t);
            CHECK_THAT(l.nie_r_L, WithinAbs(*o.nie_r_L, 1e-12));
            CHECK_THAT(l.nie_r_La, WithinAbs(*o.nie_r_La, 1e-12));
        }
    }
}

TEST_CASE("L-conditioned draws need an induced confounder") {
    const auto t = counterfactual_table(CausalModel(pe_counterexample(0.5)));
    CHECK_THROWS_AS(g_draw_mean(t, 1, 0, Conditioning::CAndObservedL), DomainError);
}

TEST_CASE("observed-stratum draws raise on an empty exposure arm") {
    auto scm = pe_counterexample(0.5);
    // Make A constant at 1 so the A = 0 arm is empty.
    for (auto& row : scm.tables[0].rows) row.value = 1;
    const auto t = counterfactual_table(CausalModel(scm));
    CHECK_THROWS_AS(h_draw_mean(t, 1, 0), DegenerateStratumError);
}
