#include <catch2/catch_amalgamated.hpp>

#include "conevol/io.hpp"
#include "test_util.hpp"

using namespace conevol;

TEST_CASE("form JSON round trip") {
    Form p = motzkin_form();
    json j = form_to_json(p);
    REQUIRE(j["n"] == 3);
    REQUIRE(j["degree"] == 6);
    REQUIRE(j["terms"].size() == 4);
    // exponents emitted in lexicographic order
    REQUIRE(j["terms"][0]["exp"] == json::array({0, 0, 6}));

    Form q = form_from_json(j);
    REQUIRE(q.coeff_distance(p) == 0.0);
}

TEST_CASE("form JSON property: round trip over random forms") {
    std::mt19937_64 rng(301);
    for (int t = 0; t < 30; ++t) {
        Form p = testutil::random_form(2 + (t % 3), 4, rng);
        Form q = form_from_json(form_to_json(p));
        REQUIRE(q.coeff_distance(p) == 0.0);
    }
}

TEST_CASE("form JSON rejects malformed input") {
    REQUIRE_THROWS(form_from_json(json::parse(R"({"n": 2, "terms": []})")));
    REQUIRE_THROWS_AS(form_from_json(json::parse(
                          R"({"n": 2, "degree": 2, "terms": [{"exp": [1, 0], "coef": 1.0}]})")),
                      DegreeMismatch);
}

TEST_CASE("bound report JSON carries every field") {
    json j = bound_report_to_json(build_report(3, 2));
    for (const char* key : {"n", "d", "dim_P", "D_M", "D_bi", "dim_M_bi", "k", "alpha_k",
                            "alpha_numeric", "theorem1_bound", "theorem2_bound",
                            "theorem2_bound_mbi", "metric_ratio", "reference_exponents"})
        REQUIRE(j.contains(key));
    REQUIRE(j["D_bi"] == 36);
}

TEST_CASE("volume estimate JSON schema") {
    VolumeEstimate e;
    e.power_mean_root = 0.5;
    e.inverse_mean = 0.4;
    e.harmonic_mean = 0.3;
    e.ci_low = 0.45;
    e.ci_high = 0.55;
    e.samples = 1000;
    e.seed = 42;
    e.dim = 14;
    e.flagged_fraction = 0.0;
    json j = volume_to_json(e);
    REQUIRE(j["estimator"]["power_mean_root"] == 0.5);
    REQUIRE(j["ci"] == json::array({0.45, 0.55}));
    REQUIRE(j["samples"] == 1000);
    REQUIRE(j["seed"] == 42);
    REQUIRE(j["dim"] == 14);
}
