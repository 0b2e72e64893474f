#include <catch_amalgamated.hpp>

#include "medcrit/effects.hpp"
#include "medcrit/errors.hpp"
#include "medcrit/factories.hpp"
#include "oracle.hpp"

using namespace medcrit;
using Catch::Matchers::WithinAbs;

TEST_CASE("natural and controlled effects agree with the oracle") {
    for (std::uint64_t s = 0; s < 15; ++s) {
        for (const Scm& scm : {random_scm({s, s % 2 == 0, false, true}), random_scm({s, s % 2 == 0, true, true}),
                               always_affects_scm({s, true})}) {
            const auto r = effect_report(CausalModel(scm));
            const auto o = oracle::effects(scm);
            CHECK_THAT(r.te, WithinAbs(o.te, 1e-12));
            CHECK_THAT(r.nie, WithinAbs(o.nie, 1e-12));
            CHECK_THAT(r.nde, WithinAbs(o.nde, 1e-12));
            CHECK_THAT(r.nie_r, WithinAbs(o.nie_r, 1e-12));
            REQUIRE(r.cde.size() == o.cde.size());
            for (const auto& [m, v] : o.cde) {
                CHECK_THAT(r.cde.at(m), WithinAbs(v, 1e-12));
                CHECK_THAT(r.pe.at(m), WithinAbs(o.te - v, 1e-12));
            }
        }
    }
}

TEST_CASE("induced-confounder counterexample closed forms") {
    // NIE^R = pi(1-pi)(2 beta - 1), NIE^R_L = beta - 1/2, NIE = NIE^R_La = 0.
    for (double pi : {0.1, 0.3, 0.5, 0.9})
        for (double beta : {0.05, 0.5, 0.8}) {
            const auto r = effect_report(CausalModel(induced_confounder_scm(pi, beta)));
            CHECK_THAT(r.nie_r, WithinAbs(pi * (1 - pi) * (2 * beta - 1), 1e-12));
            CHECK_THAT(*r.nie_r_L, WithinAbs(beta - 0.5, 1e-12));
            CHECK_THAT(r.nie, WithinAbs(0.0, 1e-12));
            CHECK_THAT(*r.nie_r_La, WithinAbs(0.0, 1e-12));
        }
}

TEST_CASE("interventional effect example values") {
    CHECK_THAT(effect_report(CausalModel(induced_confounder_scm(0.5, 0.9))).nie_r, WithinAbs(0.2, 1e-12));
    CHECK_THAT(effect_report(CausalModel(induced_confounder_scm(0.3, 0.8))).nie_r, WithinAbs(0.126, 1e-12));
}

TEST_CASE("three-level confounder model matches enumeration form") {
    // Derived by summing the structural equations by hand: (1 - pi1)(pi1 (2 beta - 1) + pi2).
    for (double pi1 : {0.1, 0.3, 0.45})
        for (double pi2 : {0.05, 0.2, 0.5})
            for (double beta : {0.1, 0.6, 0.9}) {
                const double pi0 = 1 - pi1 - pi2;
                const auto r = effect_report(CausalModel(three_level_confounder_scm(pi0, pi1, pi2, beta)));
                CHECK_THAT(r.nie_r, WithinAbs((1 - pi1) * (pi1 * (2 * beta - 1) + pi2), 1e-12));
            }
}

TEST_CASE("cross-world joint closed form") {
    const double pi = 0.1, b1 = 0.1, b2 = 0.2, b3 = 0.4, b4 = 0.3;
    const auto r = effect_report(CausalModel(cross_world_joint(pi, b1, b2, b3, b4, 0.5)));
    CHECK_THAT(r.nie_r, WithinAbs(((1 - pi) * b4 - pi * b1) * (b3 - b2), 1e-12));
    CHECK_THAT(r.nie_r, WithinAbs(0.052, 1e-12));
    CHECK_THAT(r.nie, WithinAbs(0.0, 1e-12));
}

TEST_CASE("PE toy model") {
    for (int i = 1; i <= 9; ++i) {
        const double p = i / 10.0;
        const auto r = effect_report(CausalModel(pe_counterexample(p)));
        CHECK_THAT(r.te, WithinAbs(p, 1e-12));
        CHECK_THAT(r.nie, WithinAbs(0.0, 1e-12));
        for (Level m : {0, 1}) {
            CHECK_THAT(r.cde.at(m), WithinAbs(m, 1e-12));
            CHECK_THAT(r.pe.at(m), WithinAbs(p - m, 1e-12));
        }
    }
}

TEST_CASE("reference interaction on the PE toy model") {
    // Y = A M: the interaction contrast is 1 on m = 1 vs 0, weighted by M(a*) ~ Bern(p).
    const auto r = effect_report(CausalModel(pe_counterexample(0.5)));
    CHECK_THAT(r.int_ref.at({1, 0}), WithinAbs(0.5, 1e-12));
    CHECK_THAT(r.int_ref.at({0, 1}), WithinAbs(-0.5, 1e-12));
    CHECK_THAT(r.te, WithinAbs(r.cde.at(0) + r.int_ref.at({1, 0}) + r.nie, 1e-12));
}

TEST_CASE("reference interaction needs a binary mediator") {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto t = counterfactual_table(CausalModel(random_scm({s, false, false, true})));
        if (t.m_support.size() == 3) {
            CHECK_THROWS_AS(reference_interaction(t, 1, 0), DomainError);
            CHECK(effect_report(t).int_ref.empty());
            return;
        }
    }
    FAIL("no ternary mediator among the seeds tried");
}

TEST_CASE("decomposition identities hold on random models") {
    for (std::uint64_t s = 0; s < 40; ++s) {
        const auto r = effect_report(CausalModel(random_scm({s, true, s % 2 == 0, true})));
        CHECK_THAT(r.te, WithinAbs(r.nie + r.nde, 1e-12));
        CHECK_THAT(r.te_r, WithinAbs(r.nie_r + r.nde_r, 1e-12));
    }
}

TEST_CASE("H equals NIE^R when the exposure is randomized") {
    // Without confounding of A, the observed-stratum draws coincide with the counterfactual ones.
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto r = effect_report(CausalModel(random_scm({s, false, false, true})));
        REQUIRE(r.h_contrast);
        CHECK_THAT(*r.h_contrast, WithinAbs(r.nie_r, 1e-12));
    }
}
