// Acceptance gate: one line per criterion, exit 0 iff all pass.

#include "qkin/suites.hpp"

#include <chrono>
#include <cstdio>

using namespace qkin;

namespace {

int failures = 0;

void criterion(int id, const char* label, bool ok) {
    std::printf("criterion %2d  %-34s %s\n", id, label, ok ? "pass" : "FAIL");
    if (!ok) ++failures;
}

bool integer_spectrum() {
    for (int cutoff : {4, 16, 64})
        for (double hbar : {0.5, 1.0, 2.0}) {
            TruncatedFock fock(cutoff, HbarScale(hbar));
            HermitianEig eig = hermitian_eig(number_operator(fock));
            for (int n = 0; n < cutoff; ++n)
                if (std::abs(eig.eigenvalues[n] - n) >= 1e-10) return false;
        }
    return true;
}

bool planck_relation() {
    std::vector<std::vector<ModeLabel>> sets = {
        {{{1.0, 0.0, 0.0}, +1}},
        {{{1.0, 0.0, 0.0}, +1}, {{0.0, 2.0, 0.0}, -1}},
        {{{1.0, 0.0, 0.0}, +1}, {{0.0, 1.7, 0.0}, -1}, {{0.0, 0.0, 0.9}, +1}}};
    for (const auto& modes : sets) {
        int cutoff = modes.size() == 3 ? 3 : 4;
        ModeSet ms(modes, cutoff, HbarScale(0.5));
        HermitianEig eig = hermitian_eig(build_hamiltonian(ms, Ordering::Symmetric).matrix);
        std::vector<double> expected;
        for (long b = 0; b < ms.total_dimension(); ++b) {
            auto occ = occupations(ms, b);
            double e = 0.0;
            for (std::size_t i = 0; i < ms.mode_count(); ++i)
                e += 0.5 * ms.frequency(i) * (occ[i] + 0.5);
            expected.push_back(e);
        }
        std::sort(expected.begin(), expected.end());
        for (long b = 0; b < ms.total_dimension(); ++b)
            if (std::abs(eig.eigenvalues[b] - expected[b]) >= 1e-9) return false;
    }
    return true;
}

bool spin_spectrum() {
    ModeSet ms({{{1.0, 0.0, 0.0}, +1}, {{0.0, 2.0, 0.0}, -1}}, 3, HbarScale(1.0));
    MultimodeOperator lam = build_helicity_operator(ms);
    MultimodeOperator h = build_hamiltonian(ms, Ordering::Symmetric);
    if ((h.matrix * lam.matrix - lam.matrix * h.matrix).norm() >= 1e-12) return false;
    for (std::size_t i = 0; i < 2; ++i) {
        ComplexVector one = mode_annihilator(ms, i).matrix.adjoint() * fock_vacuum(ms);
        one.normalize();
        Complex val = one.dot(lam.matrix * one);
        if (std::abs(val - Complex(double(ms.modes[i].helicity))) >= 1e-12) return false;
    }
    if (!joint_quantization_check(ms).passed) return false;
    if (joint_quantization_check(ms, {}, 0.5).passed) return false;
    return true;
}

bool weyl_relations() {
    std::vector<std::pair<WeylArgument, WeylArgument>> pairs = {
        {{0.7, 0.4}, {-0.3, 0.9}}, {{1.0, 0.0}, {0.0, -1.0}}, {{0.5, -0.2}, {0.7, 0.4}}};
    for (const auto& [xi, eta] : pairs) {
        double prev = 1e300;
        for (int cutoff : {16, 32, 64, 128}) {
            TruncatedFock fock(cutoff, HbarScale(1.0));
            double r = weyl_relation_residual(fock, xi, eta);
            if (r >= prev) return false;
            prev = r;
        }
        if (prev >= 1e-6) return false;
    }
    return true;
}

bool stone_von_neumann() {
    TruncatedFock fock(16, HbarScale(1.0));
    SvnResult fine = svn_intertwine(fock, make_grid(512, 40.0, 1.0), 10);
    if (fine.max_error >= 1e-6) return false;
    double coarse = svn_intertwine(fock, make_grid(48, 40.0, 1.0), 10).max_error;
    double refined = svn_intertwine(fock, make_grid(96, 40.0, 1.0), 10).max_error;
    return refined * 2.0 <= coarse;
}

bool normal_ordering() {
    SuiteConfig cfg;
    for (const auto& c : run_opexpr_suite(cfg))
        if (!c.passed) return false;
    return true;
}

bool tomita_takesaki() {
    std::vector<ComplexMatrix> states;
    states.push_back((ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished());
    states.push_back((ComplexMatrix(3, 3) << 0.5, 0, 0, 0, 0.3, 0, 0, 0, 0.2).finished());
    for (const auto& rho : states) {
        StandardForm sf = standard_form(rho);
        ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
        TripleResiduals r = triple_residuals(triple);
        double worst = std::max({r.s_definition, r.reconstruction, r.delta_fixes_omega,
                                 r.j_fixes_omega, r.j_squared, r.jmj_commutant});
        if (worst >= 1e-8) return false;
        for (double t : {0.1, 0.7, 2.0})
            for (const auto& a : triple.algebra.closure)
                if (detail::distance_to_span(modular_flow(t, triple, a),
                                             triple.algebra.closure) >= 1e-8)
                    return false;
    }
    ComplexMatrix rho = states[0];
    StandardForm sf = standard_form(rho);
    ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
    HermitianEig ed = hermitian_eig(triple.delta);
    std::vector<double> expected = {1.0 / 3.0, 1.0, 1.0, 3.0};
    for (int i = 0; i < 4; ++i)
        if (std::abs(ed.eigenvalues[i] - expected[i]) >= 1e-10) return false;
    return true;
}

bool kms_identity() {
    std::vector<ComplexMatrix> states;
    states.push_back((ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished());
    states.push_back((ComplexMatrix(3, 3) << 0.5, 0, 0, 0, 0.3, 0, 0, 0, 0.2).finished());
    for (const auto& rho : states) {
        StandardForm sf = standard_form(rho);
        ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
        if (delta_condition_number(triple.delta) >= 1e6) return false;
        const Eigen::Index n = rho.rows();
        ComplexMatrix a = amplify(random_matrix(n, 401));
        ComplexMatrix b = amplify(random_matrix(n, 402));
        CheckReport rep = kms_check(triple, a, b, 0.7);
        if (!rep.passed || rep.measured_error >= 1e-9) return false;
        if (kms_check(triple, a, b, 0.7, {1e-9, 0.0}, true).measured_error <= 1e-3)
            return false;
    }
    return true;
}

bool connes_cocycle_ok() {
    std::vector<std::pair<ComplexMatrix, ComplexMatrix>> pairs;
    pairs.push_back({(ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished(),
                     0.5 * ComplexMatrix::Identity(2, 2)});
    pairs.push_back({gibbs_state(random_hermitian(3, 403), 1.0),
                     gibbs_state(random_hermitian(3, 404), 0.7)});
    for (const auto& [rho1, rho2] : pairs) {
        const Eigen::Index n = rho1.rows();
        auto flow = [](const ComplexMatrix& rho, double t, const ComplexMatrix& x) {
            ComplexMatrix u = complex_power(rho, Complex(0.0, t));
            return ComplexMatrix(u * x * u.adjoint());
        };
        double t = 0.3, s = 0.5;
        ComplexMatrix ut = connes_cocycle(rho1, rho2, t);
        ComplexMatrix us = connes_cocycle(rho1, rho2, s);
        ComplexMatrix uts = connes_cocycle(rho1, rho2, t + s);
        if ((connes_cocycle(rho1, rho2, 0.0) - ComplexMatrix::Identity(n, n)).norm() != 0.0)
            return false;
        ComplexMatrix a = random_matrix(n, 405);
        if ((flow(rho2, t, a) - ut * flow(rho1, t, a) * ut.adjoint()).norm() >= 1e-8)
            return false;
        if ((uts - ut * flow(rho1, t, us)).norm() >= 1e-8) return false;
    }
    return true;
}

bool unruh_formula() {
    PhysicalConstants nat = PhysicalConstants::natural();
    if (std::abs(unruh_chain(2.0 * std::numbers::pi, nat).temperature - 1.0) >= 1e-12)
        return false;
    PhysicalConstants si = PhysicalConstants::si();
    ThermalParameters q = unruh_chain(9.81, si);
    double expected = si.hbar * 9.81 / (2.0 * std::numbers::pi * si.c * si.k_B);
    if (std::abs(q.temperature - expected) / expected >= 1e-6) return false;
    return q.consistency_residual(si) < 1e-12;
}

bool hegerfeldt() {
    SpreadingConfig cfg;
    SpreadingReport rep = spreading_report(cfg);
    if (!rep.check.passed) return false;
    SpreadingConfig big = cfg;
    big.grid_points *= 2;
    big.domain_length *= 2.0;
    SpreadingReport rep2 = spreading_report(big);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        if (rep.rows[i].t <= 0.0 || rep.rows[i].t > 1e-3) continue;
        if (std::abs(rep.rows[i].free_leakage - rep2.rows[i].free_leakage) /
                rep.rows[i].free_leakage >=
            0.1)
            return false;
    }
    return true;
}

bool galilean_obstruction() {
    for (int cutoff : {2, 3, 4}) {
        ModeSet ms({{{1.0, 0.0, 0.0}, +1}, {{0.0, 2.0, 0.0}, -1}}, cutoff, HbarScale(1.0));
        SeparatingDiagnostic d = vacuum_separating_diagnostic(ms);
        if (d.separating || d.witness_norm <= 0.0 || d.witness_on_vacuum != 0.0) return false;
    }
    for (int n : {2, 3, 4}) {
        // separating case: faithful standard form; non-separating: basis vector
        ComplexMatrix rho = ComplexMatrix::Zero(n, n);
        double z = 0.0;
        for (int i = 0; i < n; ++i) z += i + 1.0;
        for (int i = 0; i < n; ++i) rho(i, i) = (i + 1.0) / z;
        StandardForm sf = standard_form(rho);
        CyclicSeparating cs = cyclic_separating_check(sf.algebra, sf.omega_vec);
        if (!cs.cyclic || !cs.separating || cs.orbit_dim != n * n) return false;
        FiniteAlgebra full = build_algebra({random_matrix(n, 406 + n)});
        ComplexVector e0 = ComplexVector::Zero(n);
        e0(0) = 1.0;
        CyclicSeparating cv = cyclic_separating_check(full, e0);
        if (!cv.cyclic || cv.separating) return false;
        if ((*cv.separating_witness * e0).norm() >= 1e-10) return false;
    }
    return true;
}

bool scaffold_layer() {
    SuiteConfig cfg;
    for (const auto& c : run_scaffold_suite(cfg))
        if (!c.passed) return false;
    return true;
}

}  // namespace

int main() {
    auto t0 = std::chrono::steady_clock::now();
    criterion(1, "integer number spectrum", integer_spectrum());
    criterion(2, "Planck energy relation", planck_relation());
    criterion(3, "helicity spin spectrum", spin_spectrum());
    criterion(4, "Weyl relations", weyl_relations());
    criterion(5, "grid-Fock intertwiner", stone_von_neumann());
    criterion(6, "normal-ordering soundness", normal_ordering());
    criterion(7, "modular triple", tomita_takesaki());
    criterion(8, "KMS identity", kms_identity());
    criterion(9, "cocycle intertwining", connes_cocycle_ok());
    criterion(10, "Unruh temperature", unruh_formula());
    criterion(11, "localization leakage", hegerfeldt());
    criterion(12, "no separating Fock vacuum", galilean_obstruction());
    criterion(13, "classical scaffold", scaffold_layer());
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d/13 criteria passed in %.1f s\n", 13 - failures, dt);
    return failures == 0 ? 0 : 1;
}
