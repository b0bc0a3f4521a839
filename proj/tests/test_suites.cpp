#include "qkin/suites.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

using namespace qkin;

TEST_CASE("config parsing is strict") {
    std::istringstream good("unit_system = natural\nhbar = 2.0\nseed = 11\n# comment\n");
    SuiteConfig cfg = load_config(good);
    CHECK(cfg.hbar == 2.0);
    CHECK(cfg.seed == 11);

    std::istringstream unknown("hbars = 2.0\n");
    CHECK_THROWS_WITH(load_config(unknown), Catch::Matchers::ContainsSubstring("hbars"));

    std::istringstream malformed("hbar 2.0\n");
    CHECK_THROWS_AS(load_config(malformed), ConfigError);

    std::istringstream nonpositive("hbar = -1\n");
    CHECK_THROWS_AS(load_config(nonpositive), ConfigError);

    std::istringstream times("times = 1e-4, 1e-3\n");
    CHECK(load_config(times).spreading.times == std::vector<double>{1e-4, 1e-3});
}

TEST_CASE("unknown suite names are rejected") {
    CHECK_THROWS_AS(run_suite("nope", SuiteConfig{}), ConfigError);
}

TEST_CASE("fock suite passes at hbar = 2") {
    SuiteConfig cfg;
    cfg.hbar = 2.0;
    for (const auto& c : run_suite("fock", cfg)) {
        INFO(c.name);
        CHECK(c.passed);
    }
}

TEST_CASE("every check carries an anchor and honors the pass contract") {
    SuiteConfig cfg;
    for (const char* s : {"photon", "scaffold", "opexpr"}) {
        for (const auto& c : run_suite(s, cfg)) {
            INFO(c.name);
            CHECK_FALSE(c.anchor.empty());
            CHECK(c.passed == (c.measured_error <= c.tolerance));
        }
    }
}

TEST_CASE("identical config and seed give byte-identical report bodies") {
    SuiteConfig cfg;
    cfg.seed = 19;
    auto doc1 = report_document("modular", run_suite("modular", cfg));
    auto doc2 = report_document("modular", run_suite("modular", cfg));
    CHECK(doc1.dump() == doc2.dump());
}

TEST_CASE("report entries are sorted by check name") {
    SuiteConfig cfg;
    auto doc = report_document("scaffold", run_suite("scaffold", cfg));
    std::string prev;
    for (const auto& entry : doc["checks"]) {
        std::string name = entry["name"];
        CHECK(prev <= name);
        prev = name;
    }
}
