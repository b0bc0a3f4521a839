#include "qkin/hegerfeldt.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qkin;

TEST_CASE("bump state is normalized with exactly compact support") {
    GridWavefunction psi = bump_state(1024, 100.0, 0.5);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
    for (std::size_t j = 0; j < psi.samples.size(); ++j) {
        double x = psi.coordinate(j);
        if (std::abs(x) > 0.5) CHECK(psi.samples[j] == Complex(0.0));
    }
}

TEST_CASE("free evolution is unitary on the grid") {
    GridWavefunction psi = bump_state(1024, 100.0, 0.5);
    for (double t : {1e-4, 1e-2, 1.0}) {
        CHECK(std::abs(evolve_free(psi, 1.0, 1.0, t).norm() - 1.0) < 1e-12);
        CHECK(std::abs(evolve_hopping(psi, 1.0, 1.0, t).norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("leakage vanishes at t = 0 and is positive for every later time") {
    SpreadingConfig cfg;
    SpreadingReport rep = spreading_report(cfg);
    CHECK(rep.check.passed);
    REQUIRE(rep.rows.size() == cfg.times.size() + 1);
    CHECK(rep.rows[0].t == 0.0);
    CHECK(rep.rows[0].free_leakage == 0.0);
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        INFO("t = " << rep.rows[i].t);
        CHECK(rep.rows[i].free_leakage > cfg.floor);
    }
}

TEST_CASE("bounded-velocity hopping leaks far less than the free evolution early on") {
    SpreadingConfig cfg;
    SpreadingReport rep = spreading_report(cfg);
    bool found = false;
    for (const auto& row : rep.rows) {
        if (row.t <= 0.0 || row.t > 1e-4) continue;
        found = true;
        CHECK(row.hopping_leakage < row.free_leakage);
    }
    CHECK(found);
}

TEST_CASE("leakage is robust to doubling the domain at fixed spacing") {
    SpreadingConfig small;
    SpreadingConfig big = small;
    big.grid_points *= 2;
    big.domain_length *= 2.0;
    SpreadingReport a = spreading_report(small);
    SpreadingReport b = spreading_report(big);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        if (a.rows[i].t <= 0.0 || a.rows[i].t > 1e-3) continue;
        double rel = std::abs(a.rows[i].free_leakage - b.rows[i].free_leakage) /
                     a.rows[i].free_leakage;
        INFO("t = " << a.rows[i].t);
        CHECK(rel < 0.1);
    }
}

TEST_CASE("initial data outside the declared support is rejected") {
    GridWavefunction psi = bump_state(256, 50.0, 2.0);
    LocalizationProjector tight{-1.0, 1.0};
    CHECK_THROWS_AS(leakage(tight, psi, psi, 0.25), SupportViolation);
}
