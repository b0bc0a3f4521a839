#include "qkin/modular.hpp"

#include "qkin/fock.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace qkin;

TEST_CASE("algebra closure and double commutant") {
    // the full matrix algebra: commutant is the scalars
    FiniteAlgebra full = build_algebra({random_matrix(3, 201), random_matrix(3, 202)});
    CHECK(full.commutant_basis.size() == 1);
    CHECK(double_commutant_residual(full) < 1e-10);

    // a maximal abelian algebra: commutant is itself
    ComplexMatrix d = ComplexMatrix::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    d(2, 2) = 5.0;
    FiniteAlgebra diag = build_algebra({d});
    CHECK(diag.commutant_basis.size() == 3);
    CHECK(double_commutant_residual(diag) < 1e-10);
}

TEST_CASE("GNS representation dimension equals the Gram rank") {
    ComplexMatrix pure = (ComplexMatrix(2, 2) << 1, 0, 0, 0).finished();
    CHECK(gns_construct(pure).rep_space_dim == 2);
    ComplexMatrix mixed = 0.5 * ComplexMatrix::Identity(2, 2);
    GnsResult g = gns_construct(mixed);
    CHECK(g.rep_space_dim == 4);
    for (int i = 0; i < 20; ++i) {
        ComplexMatrix a = random_matrix(2, 300 + i);
        CHECK(std::abs(gns_state_value(g, a) - (mixed * a).trace()) < 1e-10);
    }
    ComplexMatrix not_state = -ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(gns_construct(not_state), NotAState);
}

TEST_CASE("cyclic and separating diagnostics match the rank/kernel oracle") {
    for (int n : {2, 3, 4}) {
        ComplexMatrix rho = ComplexMatrix::Zero(n, n);
        double z = 0.0;
        for (int i = 0; i < n; ++i) z += std::exp(-double(i));
        for (int i = 0; i < n; ++i) rho(i, i) = std::exp(-double(i)) / z;
        StandardForm sf = standard_form(rho);
        CyclicSeparating cs = cyclic_separating_check(sf.algebra, sf.omega_vec);
        CHECK(cs.cyclic);
        CHECK(cs.separating);
        CHECK(cs.orbit_dim == n * n);
    }
    // a basis vector is cyclic for the full matrix algebra but not separating
    FiniteAlgebra full = build_algebra({random_matrix(2, 210)});
    ComplexVector e0 = ComplexVector::Zero(2);
    e0(0) = 1.0;
    CyclicSeparating cs = cyclic_separating_check(full, e0);
    CHECK(cs.cyclic);
    CHECK_FALSE(cs.separating);
    CHECK(cs.separating_witness->norm() > 0.0);
    CHECK((*cs.separating_witness * e0).norm() < 1e-10);
}

TEST_CASE("modular triple on qubit and qutrit standard forms") {
    std::vector<ComplexMatrix> states;
    states.push_back((ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished());
    states.push_back((ComplexMatrix(3, 3) << 0.5, 0, 0, 0, 0.3, 0, 0, 0, 0.2).finished());
    for (const auto& rho : states) {
        StandardForm sf = standard_form(rho);
        ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
        TripleResiduals r = triple_residuals(triple);
        CHECK(r.s_definition < 1e-8);
        CHECK(r.reconstruction < 1e-8);
        CHECK(r.delta_fixes_omega < 1e-8);
        CHECK(r.j_fixes_omega < 1e-8);
        CHECK(r.j_squared < 1e-8);
        CHECK(r.jmj_commutant < 1e-8);
        for (double t : {0.1, 0.7, 2.0})
            for (const auto& a : triple.algebra.closure)
                CHECK(detail::distance_to_span(modular_flow(t, triple, a),
                                               triple.algebra.closure) < 1e-8);
    }
}

TEST_CASE("Delta spectrum is the eigenvalue-ratio set") {
    ComplexMatrix rho = (ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished();
    StandardForm sf = standard_form(rho);
    ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
    HermitianEig ed = hermitian_eig(triple.delta);
    std::vector<double> expected = {1.0 / 3.0, 1.0, 1.0, 3.0};
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(ed.eigenvalues[i] - expected[i]) < 1e-10);
}

TEST_CASE("KMS identity holds and the corrupted continuation is detected") {
    ComplexMatrix rho = (ComplexMatrix(2, 2) << 0.7, 0, 0, 0.3).finished();
    StandardForm sf = standard_form(rho);
    ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
    CHECK(delta_condition_number(triple.delta) < 1e6);
    ComplexMatrix a = amplify(random_matrix(2, 221));
    ComplexMatrix b = amplify(random_matrix(2, 222));
    for (double t : {-1.3, 0.0, 0.7}) {
        CheckReport rep = kms_check(triple, a, b, t);
        CHECK(rep.passed);
        CHECK(rep.measured_error < 1e-9);
        CheckReport bad = kms_check(triple, a, b, t, {1e-9, 0.0}, true);
        CHECK(bad.measured_error > 1e-3);
    }
}

TEST_CASE("ill-conditioned Delta is refused for analytic continuation") {
    ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
    rho(0, 0) = 1.0 - 1e-7;
    rho(1, 1) = 1e-7;
    StandardForm sf = standard_form(rho);
    ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
    ComplexMatrix a = amplify(random_matrix(2, 223));
    CHECK_THROWS_AS(kms_check(triple, a, a, 0.5), IllConditioned);
}

TEST_CASE("Gibbs state: KMS, Heisenberg flow, detailed balance") {
    TruncatedFock fock(4, HbarScale(1.0));
    ComplexMatrix h = number_operator(fock);
    GibbsKmsResult g = gibbs_kms_check(h, 2.0, random_matrix(4, 224), random_matrix(4, 225), 0.4);
    CHECK(g.kms.passed);
    CHECK(g.flow_vs_heisenberg < 1e-8);
    CHECK(g.delta_spectrum_error < 1e-9);
    CHECK(g.detailed_balance_error < 1e-10);
}

TEST_CASE("Connes cocycle: intertwining, chain rule, unitarity") {
    auto battery = [](const ComplexMatrix& rho1, const ComplexMatrix& rho2, std::uint64_t seed) {
        const Eigen::Index n = rho1.rows();
        auto flow = [](const ComplexMatrix& rho, double t, const ComplexMatrix& x) {
            ComplexMatrix u = complex_power(rho, Complex(0.0, t));
            return ComplexMatrix(u * x * u.adjoint());
        };
        double t = 0.3, s = 0.5;
        ComplexMatrix ut = connes_cocycle(rho1, rho2, t);
        ComplexMatrix us = connes_cocycle(rho1, rho2, s);
        ComplexMatrix uts = connes_cocycle(rho1, rho2, t + s);
        CHECK((connes_cocycle(rho1, rho2, 0.0) - ComplexMatrix::Identity(n, n)).norm() == 0.0);
        CHECK((ut * ut.adjoint() - ComplexMatrix::Identity(n, n)).norm() < 1e-12);
        ComplexMatrix a = random_matrix(n, seed);
        CHECK((flow(rho2, t, a) - ut * flow(rho1, t, a) * ut.adjoint()).norm() < 1e-8);
        CHECK((uts - ut * flow(rho1, t, us)).norm() < 1e-8);
    };
    battery((ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished(),
            (ComplexMatrix(2, 2) << 0.5, 0, 0, 0.5).finished(), 231);
    ComplexMatrix h1 = random_hermitian(3, 232), h2 = random_hermitian(3, 233);
    battery(gibbs_state(h1, 1.0), gibbs_state(h2, 0.7), 234);
    ComplexMatrix singular = ComplexMatrix::Zero(2, 2);
    singular(0, 0) = 1.0;
    CHECK_THROWS_AS(connes_cocycle(singular, 0.5 * ComplexMatrix::Identity(2, 2), 0.3),
                    SingularState);
}

TEST_CASE("thermal parameters of uniform acceleration") {
    PhysicalConstants nat = PhysicalConstants::natural();
    ThermalParameters p = unruh_chain(2.0 * std::numbers::pi, nat);
    CHECK(std::abs(p.temperature - 1.0) < 1e-12);
    CHECK(std::abs(p.beta_tau - 1.0) < 1e-12);
    CHECK(p.consistency_residual(nat) < 1e-12);

    PhysicalConstants si = PhysicalConstants::si();
    ThermalParameters q = unruh_chain(9.81, si);
    double expected = si.hbar * 9.81 / (2.0 * std::numbers::pi * si.c * si.k_B);
    CHECK(std::abs(q.temperature - expected) / expected < 1e-6);
    CHECK(q.temperature == Catch::Approx(3.98e-20).epsilon(0.01));
    CHECK(q.consistency_residual(si) < 1e-12);
    CHECK_THROWS_AS(unruh_chain(0.0, si), NonpositiveInput);
}
