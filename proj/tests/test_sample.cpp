#include <catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "medcrit/engine.hpp"
#include "medcrit/errors.hpp"
#include "medcrit/factories.hpp"
#include "medcrit/sample.hpp"

using namespace medcrit;
using Catch::Matchers::WithinAbs;

TEST_CASE("zero rows give an empty dataset") {
    const auto ds = draw_samples(CausalModel(induced_confounder_scm(0.5, 0.9)), 0, 1);
    CHECK(ds.rows.empty());
    CHECK(ds.has_l);
    CHECK_THROWS_AS(empirical_law(ds), DomainError);
}

TEST_CASE("sampling is deterministic and row-addressable") {
    const CausalModel m = random_scm({5, true, true, true});
    const auto a = draw_samples(m, 500, 42);
    const auto b = draw_samples(m, 500, 42);
    CHECK(a.rows == b.rows);
    const auto prefix = draw_samples(m, 100, 42);
    CHECK(std::equal(prefix.rows.begin(), prefix.rows.end(), a.rows.begin()));
    CHECK_FALSE(draw_samples(m, 500, 43).rows == a.rows);
}

TEST_CASE("exposure frequency at a million rows") {
    const auto ds = draw_samples(CausalModel(induced_confounder_scm(0.5, 0.9)), 1'000'000, 7);
    double ones = 0;
    for (const auto& r : ds.rows) ones += r.a;
    CHECK(std::abs(ones / 1e6 - 0.5) < 0.002);
}

TEST_CASE("empirical law converges in total variation") {
    for (const CausalModel& m : {CausalModel(induced_confounder_scm(0.5, 0.9)),
                                 CausalModel(three_level_confounder_scm(0.2, 0.3, 0.5, 0.9)),
                                 CausalModel(cross_world_joint(0.1, 0.1, 0.2, 0.4, 0.3, 0.5))}) {
        const auto exact = observational_law(m);
        const auto emp = empirical_law(draw_samples(m, 1'000'000, 11));
        std::map<ObservedKey, double> diff;
        for (const auto& [k, p] : exact.pmf()) diff[k] += p;
        for (const auto& [k, p] : emp.pmf()) diff[k] -= p;
        double tv = 0;
        for (const auto& [k, d] : diff) tv += std::abs(d);
        CHECK(tv / 2 < 0.01);
        CHECK(emp.sample_size() == 1'000'000);
    }
}

TEST_CASE("one row gives a point-mass law") {
    Dataset ds;
    ds.rows = {{{}, 1, 0, 1, 0}};
    const auto law = empirical_law(ds);
    REQUIRE(law.pmf().size() == 1);
    CHECK(law.pmf().begin()->second == 1.0);
}

TEST_CASE("CSV round trip is exact") {
    const auto ds = draw_samples(CausalModel(random_scm({9, true, true, true})), 300, 3);
    std::stringstream buf;
    write_csv(ds, buf);
    const std::string text = buf.str();
    CHECK(text.rfind("C,A,L,M,Y\n", 0) == 0);
    std::stringstream in(text);
    const auto back = read_csv(in);
    CHECK(back.rows == ds.rows);
    CHECK(back.covariate_names == ds.covariate_names);
    CHECK(back.has_l);
    std::stringstream again;
    write_csv(back, again);
    CHECK(again.str() == text);
}

TEST_CASE("malformed CSV is rejected") {
    std::stringstream no_y("A,M\n0,1\n");
    CHECK_THROWS_AS(read_csv(no_y), ParseError);
    std::stringstream short_row("A,M,Y\n0,1\n");
    CHECK_THROWS_AS(read_csv(short_row), ParseError);
    std::stringstream text_cell("A,M,Y\n0,x,1\n");
    CHECK_THROWS_AS(read_csv(text_cell), ParseError);
    CHECK_THROWS_AS(read_csv_file("/nonexistent.csv"), IoError);
}

TEST_CASE("missing exposure-mediator cell makes psi_nie degenerate") {
    Dataset ds;
    for (int i = 0; i < 50; ++i) {
        ds.rows.push_back({{}, 0, 0, 0, i % 2});
        ds.rows.push_back({{}, 1, 0, i % 2, 1});
    }
    CHECK_THROWS_AS(estimate(ds, parse_estimand("psi_nie"), 0), DegenerateStratumError);
    CHECK_NOTHROW(estimate(ds, parse_estimand("psi_te"), 0));
}

TEST_CASE("constant outcome gives a zero estimate with a degenerate interval") {
    const auto ds = draw_samples(CausalModel(separable_scm({2, false, true})), 2000, 5);
    const auto e = estimate(ds, parse_estimand("psi_nie"), 200, 1);
    CHECK(e.value == 0.0);
    REQUIRE(e.has_ci);
    CHECK(e.ci_low == 0.0);
    CHECK(e.ci_high == 0.0);
}

TEST_CASE("n_boot zero returns the value only") {
    const auto ds = draw_samples(CausalModel(induced_confounder_scm(0.5, 0.9)), 1000, 5);
    const auto e = estimate(ds, parse_estimand("psi_nie_r_L"), 0);
    CHECK_FALSE(e.has_ci);
}

TEST_CASE("bootstrap is reproducible and ordered") {
    const auto ds = draw_samples(CausalModel(induced_confounder_scm(0.5, 0.9)), 5000, 8);
    const auto a = estimate(ds, parse_estimand("psi_nie_r_L"), 300, 4);
    const auto b = estimate(ds, parse_estimand("psi_nie_r_L"), 300, 4);
    CHECK(a.ci_low == b.ci_low);
    CHECK(a.ci_high == b.ci_high);
    CHECK(a.ci_low <= a.ci_high);
}

TEST_CASE("plug-in estimate near the exact value at 1e5 rows") {
    const auto ds = draw_samples(CausalModel(induced_confounder_scm(0.5, 0.9)), 100'000, 2);
    const auto e = estimate(ds, parse_estimand("psi_nie_r_L"), 0);
    CHECK(std::abs(e.value - 0.2) < 0.02);
}
