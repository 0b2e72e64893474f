#include <catch_amalgamated.hpp>

#include <algorithm>

#include "medcrit/errors.hpp"
#include "medcrit/factories.hpp"
#include "medcrit/scm_builder.hpp"
#include "medcrit/scm_json.hpp"

using namespace medcrit;

namespace {

bool mentions(const std::vector<Violation>& vs, const std::string& text) {
    return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.to_string().find(text) != std::string::npos; });
}

Scm simple() {
    return ScmBuilder("simple")
        .add("A", Role::Exposure, {0, 1}, {}, {{0, 0.5}, {1, 0.5}}, [](auto&, Level e) { return e; })
        .add("M", Role::Mediator, {0, 1}, {"A"}, {{0, 0.3}, {1, 0.7}}, [](auto& p, Level e) { return p[0] * e; })
        .add("Y", Role::Outcome, {0, 1}, {"A", "M"}, {{0, 1.0}}, [](auto& p, Level) { return p[0] | p[1]; })
        .build();
}

}  // namespace

TEST_CASE("factory models validate") {
    CHECK(validate(induced_confounder_scm(0.3, 0.8)).empty());
    CHECK(validate(three_level_confounder_scm(0.2, 0.3, 0.5, 0.9)).empty());
    CHECK(validate(cross_world_joint(0.1, 0.1, 0.2, 0.4, 0.3, 0.5)).empty());
    CHECK(validate(pe_counterexample(0.5)).empty());
    for (std::uint64_t s = 0; s < 10; ++s) {
        CHECK(validate(random_scm({s, s % 2 == 0, s % 3 == 0, true})).empty());
        CHECK(validate(separable_scm({s, true, false})).empty());
        CHECK(validate(additive_outcome_scm({s, true, true, false, true})).empty());
        CHECK(validate(always_affects_scm({s, true})).empty());
    }
}

TEST_CASE("shapes are classified") {
    CHECK(shape_of(pe_counterexample(0.5)) == Shape::NoConfounder);
    CHECK(shape_of(induced_confounder_scm(0.5, 0.5)) == Shape::InducedConfounder);
    CHECK(shape_of(separable_scm({1, false, false})) == Shape::Separable);
}

TEST_CASE("noise pmf must sum to one") {
    Scm s = simple();
    s.noise[1].pmf[1] = 0.71;
    const auto v = validate(s);
    CHECK(mentions(v, "pmf sums to 1.01"));
    CHECK_THROWS_AS(require_valid(s), InvalidModelError);
}

TEST_CASE("negative probabilities are rejected") {
    Scm s = simple();
    s.noise[1].pmf = {{0, -0.5}, {1, 1.5}};
    CHECK_FALSE(validate(s).empty());
}

TEST_CASE("structural tables must be total") {
    Scm s = simple();
    s.tables[2].rows.pop_back();
    CHECK(mentions(validate(s), "configurations defined"));
}

TEST_CASE("table outputs must lie in the support") {
    Scm s = simple();
    s.tables[2].rows[0].value = 5;
    CHECK(mentions(validate(s), "not in support"));
}

TEST_CASE("edges outside the mediation shapes are rejected") {
    Scm s = simple();
    // M -> A reverses the exposure-mediator edge.
    s.edges["A"] = {"M"};
    s.tables[0].parents = {"M"};
    CHECK_FALSE(validate(s).empty());
}

TEST_CASE("exactly one exposure, mediator and outcome") {
    Scm s = simple();
    s.variables[1].role = Role::Outcome;
    CHECK(mentions(validate(s), "expected exactly one"));
}

TEST_CASE("exposure levels must differ and lie in the support") {
    Scm s = simple();
    s.exposure_levels = {1, 1};
    CHECK(mentions(validate(s), "a_star and a must differ"));
    s.exposure_levels = {0, 3};
    CHECK_FALSE(validate(s).empty());
}

TEST_CASE("a valid model reports no violations and an invalid one reports all") {
    CHECK(validate(simple()).empty());
    Scm s = simple();
    s.noise[0].pmf[0] = 0.1;
    s.tables[1].rows.pop_back();
    CHECK(validate(s).size() >= 2);
}

TEST_CASE("explicit joints check the one-world factorization") {
    auto spec = cross_world_joint(0.1, 0.1, 0.2, 0.4, 0.3, 0.5);
    CHECK(validate(spec).empty());
    // Moving mass between exposure arms of one joint configuration breaks A ⊥ counterfactuals.
    std::size_t from = 0, to = 0;
    for (std::size_t i = 0; i < spec.atoms.size(); ++i) {
        for (std::size_t j = 0; j < spec.atoms.size(); ++j) {
            if (spec.atoms[i].exposure == 0 && spec.atoms[j].exposure == 1 &&
                spec.atoms[i].mediator == spec.atoms[j].mediator && spec.atoms[i].outcome == spec.atoms[j].outcome &&
                spec.atoms[i].probability > 0.01) {
                from = i;
                to = j;
            }
        }
    }
    REQUIRE(from != to);
    spec.atoms[from].probability -= 0.01;
    spec.atoms[to].probability += 0.01;
    CHECK(mentions(validate(spec), "factorize"));
}

TEST_CASE("explicit joints must use exactly two exposure levels") {
    auto spec = cross_world_joint(0.1, 0.1, 0.2, 0.4, 0.3, 0.5);
    spec.exposure_support = {0, 1, 2};
    CHECK_FALSE(validate(spec).empty());
}

TEST_CASE("factories reject parameters outside their domain") {
    CHECK_THROWS_AS(induced_confounder_scm(0.0, 0.5), DomainError);
    CHECK_THROWS_AS(induced_confounder_scm(0.5, 1.2), DomainError);
    CHECK_THROWS_AS(three_level_confounder_scm(0.5, 0.5, 0.5, 0.5), DomainError);
    CHECK_THROWS_AS(pe_counterexample(-0.1), DomainError);
    CHECK_THROWS_AS(cross_world_joint(0.1, 0.5, 0.5, 0.5, 0.5, 0.5), DomainError);
}

TEST_CASE("JSON round trip preserves the model") {
    for (const CausalModel& m : {CausalModel(three_level_confounder_scm(0.2, 0.3, 0.5, 0.9)),
                                 CausalModel(random_scm({7, true, true, true})),
                                 CausalModel(cross_world_joint(0.1, 0.1, 0.2, 0.4, 0.3, 0.5))}) {
        const std::string text = model_to_json(m);
        const CausalModel back = parse_model_json(text);
        CHECK(model_to_json(back) == text);
        CHECK(validate(back).empty());
    }
}

TEST_CASE("probabilities may be decimal strings") {
    std::string text = model_to_json(pe_counterexample(0.5));
    const auto at = text.find("0.5");
    text.replace(at, 3, "\"0.5\"");
    CHECK(validate(parse_model_json(text)).empty());
}

TEST_CASE("malformed documents raise parse errors") {
    CHECK_THROWS_AS(parse_model_json("{"), ParseError);
    CHECK_THROWS_AS(parse_model_json("[]"), ParseError);
    CHECK_THROWS_AS(parse_model_json(R"({"variables": 3})"), ParseError);
    CHECK_THROWS_AS(load_model_file("/nonexistent/model.json"), IoError);
}
