#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <string>

#include "medcrit.h"

namespace {

std::string lookup(const medcrit_table* t, const char* key) {
    const char* v = medcrit_table_lookup(t, key);
    return v ? v : "<missing>";
}

}  // namespace

TEST_CASE("builtin model effects through the C interface") {
    medcrit_model* m = nullptr;
    REQUIRE(medcrit_model_builtin("pe", "p=0.5", &m) == MEDCRIT_OK);
    CHECK(std::string(medcrit_model_name(m)) == "pe");
    medcrit_table* t = nullptr;
    REQUIRE(medcrit_effects(m, &t) == MEDCRIT_OK);
    CHECK(lookup(t, "PE(0)") == "0.5");
    CHECK(lookup(t, "NIE") == "0");
    CHECK(medcrit_table_columns(t) == 2);
    CHECK(std::string(medcrit_table_render(t, MEDCRIT_FORMAT_CSV)).rfind("key,value\n", 0) == 0);
    medcrit_table_free(t);
    medcrit_model_free(m);
}

TEST_CASE("status codes map errors") {
    medcrit_model* m = nullptr;
    CHECK(medcrit_model_builtin("t1", "pi=2", &m) == MEDCRIT_DOMAIN_ERROR);
    CHECK(m == nullptr);
    CHECK(std::string(medcrit_last_error()).find("pi") != std::string::npos);
    CHECK(medcrit_model_builtin("t1", "pi", &m) == MEDCRIT_PARSE_ERROR);
    CHECK(medcrit_model_builtin("unknown", nullptr, &m) == MEDCRIT_DOMAIN_ERROR);
    CHECK(medcrit_model_from_json("{", &m) == MEDCRIT_PARSE_ERROR);
    CHECK(medcrit_model_load_file("/nonexistent.json", &m) == MEDCRIT_IO_ERROR);
    CHECK(medcrit_model_builtin(nullptr, nullptr, &m) == MEDCRIT_INVALID_ARGUMENT);
    medcrit_table* t = nullptr;
    CHECK(medcrit_reproduce("T9", nullptr, &t) == MEDCRIT_DOMAIN_ERROR);
    CHECK(medcrit_estimate("/nonexistent.csv", "psi_te", 0, 0, 0, 1, &t) == MEDCRIT_IO_ERROR);
}

TEST_CASE("invalid models report violations") {
    medcrit_model* m = nullptr;
    const char* doc = R"({"name": "bad", "variables": [{"name": "A", "role": "A", "support": [0, 1]}],
                         "edges": {}, "noise": [], "tables": [], "exposure_levels": {"a_star": 0, "a": 1}})";
    REQUIRE(medcrit_model_from_json(doc, &m) == MEDCRIT_OK);
    medcrit_table* t = nullptr;
    CHECK(medcrit_validate(m, &t) == MEDCRIT_INVALID_MODEL);
    REQUIRE(t != nullptr);
    CHECK(lookup(t, "valid") == "FALSE");
    CHECK(lookup(t, "violation") != "<missing>");
    medcrit_table_free(t);
    CHECK(medcrit_effects(m, &t) == MEDCRIT_INVALID_MODEL);
    medcrit_model_free(m);
}

TEST_CASE("reproduce and sweep tables") {
    medcrit_table* t = nullptr;
    REQUIRE(medcrit_reproduce("T1", "pi=0.5;beta=0.9", &t) == MEDCRIT_OK);
    CHECK(lookup(t, "NIE^R closed form") == "0.2");
    CHECK(lookup(t, "sharp null") == "TRUE");
    medcrit_table_free(t);

    medcrit_sweep_options o = medcrit_sweep_defaults();
    o.grid = 2;
    REQUIRE(medcrit_sweep("t1", "NIE^R", &o, &t) == MEDCRIT_OK);
    CHECK(medcrit_table_rows(t) == 4);
    CHECK(std::string(medcrit_table_column_name(t, 0)) == "beta");
    CHECK(medcrit_table_cell(t, 99, 0) == nullptr);
    medcrit_table_free(t);
}

TEST_CASE("sample and estimate round trip through a file") {
    const std::string path = "c_api_sample.csv";
    medcrit_model* m = nullptr;
    REQUIRE(medcrit_model_builtin("t1", nullptr, &m) == MEDCRIT_OK);
    REQUIRE(medcrit_sample(m, 20000, 3, path.c_str(), nullptr) == MEDCRIT_OK);
    medcrit_table* t = nullptr;
    REQUIRE(medcrit_estimate(path.c_str(), "psi_nie_r_L", 100, 1, 0, 1, &t) == MEDCRIT_OK);
    CHECK(std::abs(std::stod(lookup(t, "value")) - 0.2) < 0.05);
    CHECK(lookup(t, "n") == "20000");
    medcrit_table_free(t);
    CHECK(medcrit_estimate(path.c_str(), "psi_te", 0, 0, 1, 1, &t) == MEDCRIT_INVALID_ARGUMENT);
    medcrit_model_free(m);
    std::remove(path.c_str());
}

TEST_CASE("exported models load back") {
    const std::string path = "c_api_model.json";
    medcrit_model* m = nullptr;
    REQUIRE(medcrit_model_builtin("t3", nullptr, &m) == MEDCRIT_OK);
    REQUIRE(medcrit_model_write_json(m, path.c_str()) == MEDCRIT_OK);
    medcrit_model* back = nullptr;
    REQUIRE(medcrit_model_load_file(path.c_str(), &back) == MEDCRIT_OK);
    medcrit_table* t = nullptr;
    REQUIRE(medcrit_effects(back, &t) == MEDCRIT_OK);
    CHECK(lookup(t, "NIE^R") == "0.052");
    medcrit_table_free(t);
    medcrit_model_free(back);
    medcrit_model_free(m);
    std::remove(path.c_str());
}

TEST_CASE("unit cap is enforced") {
    medcrit_model* m = nullptr;
    REQUIRE(medcrit_model_builtin("t2", nullptr, &m) == MEDCRIT_OK);
    medcrit_set_unit_cap(4);
    medcrit_table* t = nullptr;
    CHECK(medcrit_effects(m, &t) == MEDCRIT_SIZE_ERROR);
    medcrit_set_unit_cap(100000000);
    CHECK(medcrit_effects(m, &t) == MEDCRIT_OK);
    medcrit_table_free(t);
    medcrit_model_free(m);
}
