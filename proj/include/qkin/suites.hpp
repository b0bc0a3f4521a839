#ifndef QKIN_SUITES_HPP
#define QKIN_SUITES_HPP

#include "qkin/classical.hpp"
#include "qkin/constants.hpp"
#include "qkin/fock.hpp"
#include "qkin/hegerfeldt.hpp"
#include "qkin/modes.hpp"
#include "qkin/modular.hpp"
#include "qkin/opexpr.hpp"
#include "qkin/report.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

// Suite orchestration: configuration loading, per-module check batteries,
// and deterministic report assembly.

namespace qkin {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SuiteConfig {
    UnitSystem unit_system = UnitSystem::Natural;
    double hbar = 1.0;  // ignored in SI mode (constants table wins)
    std::uint64_t seed = 7;
    SpreadingConfig spreading;

    PhysicalConstants constants() const {
        PhysicalConstants k = PhysicalConstants::for_system(unit_system);
        if (unit_system == UnitSystem::Natural) k.hbar = hbar;
        return k;
    }
    double hbar_value() const { return constants().hbar; }
};

// Strict key = value text: unknown keys are rejected with a diagnostic
// naming the key.
inline SuiteConfig load_config(std::istream& in) {
    static const std::set<std::string> known = {
        "unit_system", "hbar",          "seed",
        "grid_points", "domain_length", "support_halfwidth",
        "mass",        "margin",        "times"};
    SuiteConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed;
        for (char c : line)
            if (!std::isspace(static_cast<unsigned char>(c))) trimmed += c;
        if (trimmed.empty() || trimmed[0] == '#') continue;
        auto eq = trimmed.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
        std::string key = trimmed.substr(0, eq);
        std::string value = trimmed.substr(eq + 1);
        if (!known.count(key))
            throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" +
                              key + "'");
        try {
            if (key == "unit_system")
                cfg.unit_system = parse_unit_system(value);
            else if (key == "hbar")
                cfg.hbar = std::stod(value);
            else if (key == "seed")
                cfg.seed = std::stoull(value);
            else if (key == "grid_points")
                cfg.spreading.grid_points = std::stoi(value);
            else if (key == "domain_length")
                cfg.spreading.domain_length = std::stod(value);
            else if (key == "support_halfwidth")
                cfg.spreading.support_halfwidth = std::stod(value);
            else if (key == "mass")
                cfg.spreading.mass = std::stod(value);
            else if (key == "margin")
                cfg.spreading.margin = std::stod(value);
            else if (key == "times") {
                cfg.spreading.times.clear();
                std::stringstream ss(value);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    if (!tok.empty()) cfg.spreading.times.push_back(std::stod(tok));
            }
        } catch (const std::invalid_argument& e) {
            throw ConfigError("config line " + std::to_string(lineno) + ": bad value for '" +
                              key + "': " + e.what());
        }
    }
    if (!(cfg.hbar > 0.0)) throw ConfigError("config: hbar must be positive");
    return cfg;
}

inline SuiteConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    return load_config(in);
}

// ---------------------------------------------------------------------------
// Per-module batteries
// ---------------------------------------------------------------------------

inline std::vector<CheckReport> run_fock_suite(const SuiteConfig& cfg) {
    std::vector<CheckReport> out;
    const double hbar = cfg.hbar_value();
    for (int cutoff : {4, 16, 64}) {
        TruncatedFock fock(cutoff, HbarScale(hbar));
        out.push_back(check_ccr(fock));
        out.back().name += ".cutoff" + std::to_string(cutoff);

        ComplexMatrix n_op = number_operator(fock);
        HermitianEig eig = hermitian_eig(n_op);
        double dev = 0.0;
        for (int m = 0; m < cutoff; ++m) dev = std::max(dev, std::abs(eig.eigenvalues[m] - m));
        out.push_back(CheckReport::make("fock.number_spectrum.cutoff" + std::to_string(cutoff),
                                        dev, 1e-10, "spec(N) = {0, 1, 2, ...}"));
    }
    {
        double prev = 1e300;
        bool monotone = true;
        double final_residual = 0.0;
        for (int cutoff : {16, 32, 64, 128}) {
            TruncatedFock fock(cutoff, HbarScale(hbar));
            double r = weyl_relation_residual(fock, {0.7, 0.4}, {-0.3, 0.9});
            if (r > prev) monotone = false;
            prev = r;
            final_residual = r;
        }
        out.push_back(CheckReport::make("fock.weyl_relation.residual_128", final_residual,
                                        1e-6, "W(xi) W(eta) = phase * W(xi+eta)"));
        out.push_back(CheckReport::boolean("fock.weyl_relation.monotone", monotone,
                                           "Weyl residual decreases with cutoff"));
    }
    {
        TruncatedFock fock(16, HbarScale(1.0));  // SvN check is run in natural units
        GridRep grid = make_grid(512, 40.0, 1.0);
        out.push_back(svn_intertwiner_check(fock, grid, 10));
        double coarse = svn_intertwine(fock, make_grid(48, 40.0, 1.0), 10).max_error;
        double fine = svn_intertwine(fock, make_grid(96, 40.0, 1.0), 10).max_error;
        out.push_back(CheckReport::boolean("fock.svn_refinement_halves", fine * 2.0 <= coarse,
                                           "intertwiner error halves under refinement"));
    }
    return out;
}

inline ModeSet default_two_mode_set(double hbar, double c = 1.0) {
    std::vector<ModeLabel> modes = {{{1.0, 0.0, 0.0}, +1}, {{0.0, 2.0, 0.0}, -1}};
    return ModeSet(modes, 4, HbarScale(hbar), c);
}

inline std::vector<CheckReport> run_photon_suite(const SuiteConfig& cfg) {
    std::vector<CheckReport> out;
    const double hbar = cfg.hbar_value();
    ModeSet ms = default_two_mode_set(hbar);

    {
        MultimodeOperator h = build_hamiltonian(ms, Ordering::Symmetric);
        HermitianEig eig = hermitian_eig(h.matrix);
        std::vector<double> expected;
        for (long b = 0; b < ms.total_dimension(); ++b) {
            auto occ = occupations(ms, b);
            double e = 0.0;
            for (std::size_t i = 0; i < ms.mode_count(); ++i)
                e += hbar * ms.frequency(i) * (occ[i] + 0.5);
            expected.push_back(e);
        }
        std::sort(expected.begin(), expected.end());
        double dev = 0.0;
        for (long b = 0; b < ms.total_dimension(); ++b)
            dev = std::max(dev, std::abs(eig.eigenvalues[b] - expected[b]));
        out.push_back(CheckReport::make("photon.planck_spectrum", dev, 1e-9,
                                        "spec(H) = { sum hbar omega (n + 1/2) }"));
    }
    {
        MultimodeOperator h = build_hamiltonian(ms, Ordering::Normal);
        MultimodeOperator lam = build_helicity_operator(ms);
        double comm = (h.matrix * lam.matrix - lam.matrix * h.matrix).norm();
        out.push_back(
            CheckReport::make("photon.h_lambda_commute", comm, 1e-12, "[H, Lambda] = 0"));
        // single-quantum helicity eigenvalues
        double dev = 0.0;
        for (std::size_t i = 0; i < ms.mode_count(); ++i) {
            ComplexVector v = fock_vacuum(ms);
            ComplexMatrix ad = mode_annihilator(ms, i).matrix.adjoint();
            ComplexVector one = ad * v;
            one.normalize();
            Complex val = one.dot(lam.matrix * one);
            dev = std::max(dev, std::abs(val - Complex(hbar * ms.modes[i].helicity, 0.0)));
        }
        out.push_back(CheckReport::make("photon.helicity_single_quantum", dev, 1e-12,
                                        "Lambda |k,sigma> = sigma hbar |k,sigma>"));
    }
    out.push_back(joint_quantization_check(ms));
    {
        CheckReport negative = joint_quantization_check(ms, {}, 0.5);
        out.push_back(CheckReport::boolean("photon.joint_quantization_negative_control",
                                           !negative.passed,
                                           "injected weight defect must be detected"));
    }
    {
        std::vector<ModeLabel> modes = {
            {{1.0, 0.0, 0.0}, +1}, {{0.0, 2.0, 0.0}, -1}, {{0.0, 0.0, 3.0}, +1}};
        ModeSet ms3(modes, 3, HbarScale(hbar));
        ComplexVector f = random_vector(3, cfg.seed + 11);
        ComplexVector g = random_vector(3, cfg.seed + 12);
        out.push_back(smeared_field_ccr(ms3, f, g, CcrForm::PsiPsiDagger));
        out.back().name += ".psi_form";
        ComplexVector fr = f.real().cast<Complex>(), gr = g.real().cast<Complex>();
        out.push_back(smeared_field_ccr(ms3, fr, gr, CcrForm::PhiPi));
        out.back().name += ".phi_form";
    }
    {
        SeparatingDiagnostic d = vacuum_separating_diagnostic(ms);
        bool ok = !d.separating && d.witness_norm > 0.0 && d.witness_on_vacuum == 0.0 &&
                  d.hermitian_combination_on_vacuum > 0.0;
        auto rep = CheckReport::boolean("photon.vacuum_not_separating", ok,
                                        "annihilators kill the Fock vacuum");
        rep.details.push_back({"witness_norm", std::to_string(d.witness_norm)});
        rep.details.push_back(
            {"hermitian_combination", std::to_string(d.hermitian_combination_on_vacuum)});
        out.push_back(rep);
    }
    return out;
}

inline std::vector<CheckReport> run_scaffold_suite(const SuiteConfig& cfg) {
    std::vector<CheckReport> out;
    out.push_back(poisson_bracket_check());
    {
        double res = 0.0;
        std::mt19937_64 rng(cfg.seed + 5);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (int i = 0; i < 100; ++i) {
            Vec3 k{u(rng), u(rng), u(rng)};
            double w = dispersion(k, 2.0);
            res = std::max(res, std::abs(w * w / 4.0 - norm3(k) * norm3(k)));
        }
        out.push_back(
            CheckReport::make("scaffold.null_cone_residual", res, 0.0, "omega = c |k|"));
    }
    {
        // symplectic Jacobians and group law for seeded random elements
        std::mt19937_64 rng(cfg.seed + 9);
        std::normal_distribution<double> gauss(0.0, 1.0);
        auto random_element = [&]() {
            GalileiElement g;
            Eigen::Vector3d axis(gauss(rng), gauss(rng), gauss(rng));
            double angle = gauss(rng);
            g.rotation = Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
            g.translation = {gauss(rng), gauss(rng), gauss(rng)};
            g.boost = {gauss(rng), gauss(rng), gauss(rng)};
            g.time_shift = gauss(rng);
            return g;
        };
        double symp = 0.0, law = 0.0;
        for (int i = 0; i < 100; ++i) {
            GalileiElement g1 = random_element();
            symp = std::max(symp, galilei_symplectic_residual(g1));
            GalileiElement g2 = random_element();
            PhasePoint x{{gauss(rng), gauss(rng), gauss(rng)},
                         {gauss(rng), gauss(rng), gauss(rng)},
                         1.5};
            double t = gauss(rng);
            PhasePoint seq = galilei_act(galilei_act(x, g1, t), g2, t);
            PhasePoint prod = galilei_act(x, galilei_compose(g2, g1), t);
            for (int c = 0; c < 3; ++c) {
                law = std::max(law, std::abs(seq.q[c] - prod.q[c]));
                law = std::max(law, std::abs(seq.p[c] - prod.p[c]));
            }
        }
        out.push_back(CheckReport::make("scaffold.galilei_symplectic", symp, 1e-12,
                                        "phase-space action preserves dq ^ dp"));
        out.push_back(CheckReport::make("scaffold.galilei_group_law", law, 1e-10,
                                        "composition matches element product"));
    }
    {
        ModeSet ms = default_two_mode_set(1.0);
        ClassicalModeState u0{random_vector(2, cfg.seed + 2)};
        double drift = 0.0;
        double e0 = classical_energy(u0, ms);
        Complex n0 = kg_inner(u0, u0);
        for (double t : {0.1, 1.0, 10.0, 100.0}) {
            ClassicalModeState ut = evolve_classical(u0, ms, t);
            drift = std::max(drift, std::abs(kg_inner(ut, ut) - n0));
            drift = std::max(drift, std::abs(classical_energy(ut, ms) - e0) /
                                        std::max(1.0, e0));
        }
        out.push_back(CheckReport::make("scaffold.evolution_conserves", drift,
                                        1e-12 * std::abs(n0), "KG norm and energy conserved"));
    }
    {
        // Gaussian saturates; off-Gaussian envelopes exceed the bound
        const int n = 1024;
        const double dt = 0.05;
        SampledEnvelope gauss_env{std::vector<Complex>(n), dt};
        SampledEnvelope square_env{std::vector<Complex>(n), dt};
        SampledEnvelope chirp_env{std::vector<Complex>(n), dt};
        for (int j = 0; j < n; ++j) {
            double t = (j - n / 2) * dt;
            gauss_env.samples[j] = std::exp(-t * t / 2.0);
            square_env.samples[j] = std::abs(t) < 2.0 ? 1.0 : 0.0;
            chirp_env.samples[j] = std::exp(-t * t / 2.0) * std::polar(1.0, 0.7 * t * t);
        }
        SpreadProduct pg = bandwidth_duration(gauss_env);
        SpreadProduct ps = bandwidth_duration(square_env);
        SpreadProduct pc = bandwidth_duration(chirp_env);
        out.push_back(CheckReport::make("scaffold.bandwidth_gaussian_saturates",
                                        std::abs(pg.product - 0.5), 1e-3,
                                        "Delta t Delta omega >= 1/2, Gaussian sharp"));
        double floor = 0.5 - 5.0 / n;
        bool ok = ps.product > 0.5 && pc.product > 0.5 && pg.product >= floor;
        out.push_back(CheckReport::boolean("scaffold.bandwidth_inequality", ok,
                                           "Delta t Delta omega >= 1/2"));
    }
    {
        std::vector<Eigen::Matrix2cd> hv = {
            (Eigen::Matrix2cd() << 1, 0, 0, 0).finished(),
            (Eigen::Matrix2cd() << 0, 0, 0, 1).finished()};
        auto p = born_probability(JonesVector::right_circular(), hv);
        double err = std::abs(p[0] - 0.5) + std::abs(p[1] - 0.5) + std::abs(p[0] + p[1] - 1.0);
        out.push_back(CheckReport::make("scaffold.born_circular_even_split", err, 1e-12,
                                        "|R> splits evenly in the (H, V) basis"));
    }
    return out;
}

inline std::vector<CheckReport> run_opexpr_suite(const SuiteConfig& cfg) {
    using namespace opexpr;
    std::vector<CheckReport> out;
    {
        NormalForm nf = normal_order(parse("a1*ad1"));
        bool ok = to_string(nf) == "ad1*a1 + hbar";
        out.push_back(
            CheckReport::boolean("opexpr.rewrite_axiom", ok, "a ad -> ad a + hbar"));
        NormalForm comm = normal_order(parse("[N1,a1]"));
        out.push_back(CheckReport::boolean("opexpr.number_lowers", to_string(comm) == "-1 * a1",
                                           "[N, a] = -a"));
    }
    {
        // soundness: seeded random expressions against the numeric bridge
        std::mt19937_64 rng(cfg.seed + 13);
        std::uniform_int_distribution<int> mode(1, 3), len(1, 4), kind(0, 1);
        std::vector<ModeLabel> modes = {
            {{1.0, 0.0, 0.0}, +1}, {{0.0, 1.0, 0.0}, -1}, {{0.0, 0.0, 1.0}, +1}};
        ModeSet ms(modes, 8, HbarScale(cfg.hbar_value()), 1.0, 1 << 10);
        // project onto per-mode occupation <= cutoff - 1 - max degree
        const int dmax = 4;
        const long dim = ms.total_dimension();
        ComplexMatrix proj = ComplexMatrix::Zero(dim, dim);
        for (long b = 0; b < dim; ++b) {
            auto occ = occupations(ms, b);
            bool keep = true;
            for (int o : occ)
                if (o + dmax >= ms.per_mode_cutoff) keep = false;
            if (keep) proj(b, b) = 1.0;
        }
        double worst = 0.0;
        bool confluent = true;
        for (int trial = 0; trial < 200; ++trial) {
            std::string text;
            int l = len(rng);
            for (int i = 0; i < l; ++i) {
                if (i) text += "*";
                text += (kind(rng) ? "ad" : "a") + std::to_string(mode(rng) - 1);
            }
            ExprPtr e = parse(text);
            NormalForm a = normal_order_with(e, RewriteStrategy::Leftmost);
            NormalForm b = normal_order_with(e, RewriteStrategy::SeededRandom, cfg.seed + trial);
            if (!(a == b)) confluent = false;
            ComplexMatrix direct = realize(e, ms);
            ComplexMatrix ordered = realize(a, ms);
            worst = std::max(worst, (proj * (direct - ordered) * proj).norm());
        }
        out.push_back(CheckReport::make("opexpr.soundness_vs_numeric", worst, 1e-9,
                                        "normal ordering preserves the realized operator"));
        out.push_back(CheckReport::boolean("opexpr.confluence", confluent,
                                           "rewrite order does not change the normal form"));
    }
    {
        // Jacobi identity on random degree <= 2 expressions
        std::mt19937_64 rng(cfg.seed + 17);
        std::uniform_int_distribution<int> mode(1, 2), kind(0, 1), deg(1, 2);
        auto random_word = [&]() {
            std::string text;
            int l = deg(rng);
            for (int i = 0; i < l; ++i) {
                if (i) text += "*";
                text += (kind(rng) ? "ad" : "a") + std::to_string(mode(rng));
            }
            return text;
        };
        bool ok = true;
        for (int trial = 0; trial < 40; ++trial) {
            std::string sa = random_word(), sb = random_word(), sc = random_word();
            std::string jac = "[[" + sa + "," + sb + "]," + sc + "] + [[" + sb + "," + sc +
                              "]," + sa + "] + [[" + sc + "," + sa + "]," + sb + "]";
            if (!normal_order(parse(jac)).is_zero()) ok = false;
        }
        out.push_back(CheckReport::boolean("opexpr.jacobi_identity", ok,
                                           "[[A,B],C] + [[B,C],A] + [[C,A],B] = 0"));
    }
    return out;
}

inline std::vector<CheckReport> run_modular_suite(const SuiteConfig& cfg) {
    std::vector<CheckReport> out;
    auto standard_battery = [&](const ComplexMatrix& rho, const std::string& tag) {
        StandardForm sf = standard_form(rho);
        ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
        TripleResiduals r = triple_residuals(triple);
        double worst = std::max({r.s_definition, r.reconstruction, r.delta_fixes_omega,
                                 r.j_fixes_omega, r.j_squared, r.jmj_commutant});
        out.push_back(CheckReport::make("modular.triple." + tag, worst, 1e-8,
                                        "S = J Delta^{1/2}, J M J = M'"));
        // algebra preservation of the flow
        double pres = 0.0;
        for (double t : {0.1, 0.7, 2.0})
            for (const auto& a : triple.algebra.closure)
                pres = std::max(pres, detail::distance_to_span(modular_flow(t, triple, a),
                                                                triple.algebra.closure));
        out.push_back(CheckReport::make("modular.flow_preserves_algebra." + tag, pres, 1e-8,
                                        "sigma_t(M) = M"));
        const Eigen::Index n = rho.rows();
        ComplexMatrix a = amplify(random_matrix(n, cfg.seed + 21));
        ComplexMatrix b = amplify(random_matrix(n, cfg.seed + 22));
        out.push_back(kms_check(triple, a, b, 0.7));
        out.back().name += "." + tag;
        CheckReport corrupted = kms_check(triple, a, b, 0.7, {1e-9, 0.0}, true);
        out.push_back(CheckReport::boolean("modular.kms_negative_control." + tag,
                                           corrupted.measured_error > 1e-3,
                                           "corrupted continuation must be detected"));
    };
    standard_battery((ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished(), "qubit");
    {
        ComplexMatrix rho =
            (ComplexMatrix(3, 3) << 0.5, 0, 0, 0, 0.3, 0, 0, 0, 0.2).finished();
        standard_battery(rho, "qutrit");
    }
    {
        // Delta spectrum against the eigenvalue-ratio oracle
        ComplexMatrix rho = (ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished();
        StandardForm sf = standard_form(rho);
        ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);
        HermitianEig ed = hermitian_eig(triple.delta);
        std::vector<double> expected = {1.0 / 3.0, 1.0, 1.0, 3.0};
        double dev = 0.0;
        for (int i = 0; i < 4; ++i) dev = std::max(dev, std::abs(ed.eigenvalues[i] - expected[i]));
        out.push_back(CheckReport::make("modular.delta_ratio_oracle", dev, 1e-10,
                                        "spec(Delta) = { lambda_i / lambda_j }"));
    }
    {
        // Connes cocycle on the qubit factor
        ComplexMatrix rho1 = (ComplexMatrix(2, 2) << 0.75, 0, 0, 0.25).finished();
        ComplexMatrix rho2 = (ComplexMatrix(2, 2) << 0.5, 0, 0, 0.5).finished();
        double t = 0.3, s = 0.5;
        ComplexMatrix ut = connes_cocycle(rho1, rho2, t);
        ComplexMatrix a = random_matrix(2, cfg.seed + 23);
        auto flow = [](const ComplexMatrix& rho, double tt, const ComplexMatrix& x) {
            ComplexMatrix u = complex_power(rho, Complex(0.0, tt));
            return ComplexMatrix(u * x * u.adjoint());
        };
        double intertwine =
            (flow(rho2, t, a) - ut * flow(rho1, t, a) * ut.adjoint()).norm();
        ComplexMatrix us = connes_cocycle(rho1, rho2, s);
        ComplexMatrix uts = connes_cocycle(rho1, rho2, t + s);
        double chain = (uts - ut * flow(rho1, t, us)).norm();
        double unitary =
            (ut * ut.adjoint() - ComplexMatrix::Identity(2, 2)).norm();
        double u0 = (connes_cocycle(rho1, rho2, 0.0) - ComplexMatrix::Identity(2, 2)).norm();
        out.push_back(CheckReport::make("modular.cocycle_intertwining",
                                        std::max({intertwine, unitary, u0}), 1e-8,
                                        "sigma^2_t = u_t sigma^1_t u_t^*"));
        out.push_back(CheckReport::make("modular.cocycle_chain_rule", chain, 1e-8,
                                        "u_{t+s} = u_t sigma^1_t(u_s)"));
    }
    {
        // Gibbs state of the truncated oscillator
        TruncatedFock fock(4, HbarScale(1.0));
        ComplexMatrix h = number_operator(fock);  // omega = hbar = 1
        ComplexMatrix a = random_matrix(4, cfg.seed + 24);
        ComplexMatrix b = random_matrix(4, cfg.seed + 25);
        GibbsKmsResult g = gibbs_kms_check(h, 2.0, a, b, 0.4);
        out.push_back(CheckReport::make("modular.gibbs_kms", g.kms.measured_error,
                                        g.kms.tolerance, "KMS for the Gibbs state"));
        out.push_back(CheckReport::make("modular.gibbs_flow_is_heisenberg",
                                        g.flow_vs_heisenberg, 1e-8,
                                        "modular flow = Heisenberg flow at s = -beta hbar t"));
        out.push_back(CheckReport::make("modular.gibbs_detailed_balance",
                                        g.detailed_balance_error, 1e-10,
                                        "transition ratio e^{-beta E}"));
    }
    {
        PhysicalConstants nat = PhysicalConstants::natural();
        ThermalParameters p = unruh_chain(2.0 * std::numbers::pi, nat);
        out.push_back(CheckReport::make("modular.unruh_natural",
                                        std::abs(p.temperature - 1.0), 1e-12,
                                        "T_U = hbar a / (2 pi c k_B)"));
        PhysicalConstants si = PhysicalConstants::si();
        ThermalParameters q = unruh_chain(9.81, si);
        double expected = si.hbar * 9.81 / (2.0 * std::numbers::pi * si.c * si.k_B);
        out.push_back(CheckReport::make(
            "modular.unruh_si", std::abs(q.temperature - expected) / expected, 1e-6,
            "T_U for a = 9.81 m/s^2"));
        out.push_back(CheckReport::make("modular.thermal_consistency",
                                        q.consistency_residual(si), 1e-12,
                                        "T beta_tau = hbar / k_B"));
    }
    {
        // GNS and cyclic/separating diagnostics
        ComplexMatrix pure = (ComplexMatrix(2, 2) << 1, 0, 0, 0).finished();
        ComplexMatrix mixed = 0.5 * ComplexMatrix::Identity(2, 2);
        GnsResult g1 = gns_construct(pure);
        GnsResult g2 = gns_construct(mixed);
        bool dims = g1.rep_space_dim == 2 && g2.rep_space_dim == 4;
        double reproduce = 0.0;
        for (int i = 0; i < 20; ++i) {
            ComplexMatrix a = random_matrix(2, cfg.seed + 31 + i);
            reproduce = std::max(reproduce,
                                 std::abs(gns_state_value(g2, a) - (mixed * a).trace()));
        }
        out.push_back(CheckReport::boolean("modular.gns_rank", dims,
                                           "GNS dimension = rank of the Gram matrix"));
        out.push_back(CheckReport::make("modular.gns_reproduces_state", reproduce, 1e-10,
                                        "omega(A) = <Omega, rep(A) Omega>"));
    }
    return out;
}

inline std::vector<CheckReport> run_hegerfeldt_suite(const SuiteConfig& cfg) {
    std::vector<CheckReport> out;
    SpreadingReport rep = spreading_report(cfg.spreading);
    out.push_back(rep.check);
    {
        // unitarity along the sweep
        GridWavefunction psi0 = bump_state(cfg.spreading.grid_points,
                                           cfg.spreading.domain_length,
                                           cfg.spreading.support_halfwidth);
        double drift = 0.0;
        for (double t : cfg.spreading.times) {
            GridWavefunction pt =
                evolve_free(psi0, cfg.spreading.mass, cfg.spreading.hbar, t);
            drift = std::max(drift, std::abs(pt.norm() - 1.0));
        }
        out.push_back(
            CheckReport::make("hegerfeldt.unitarity", drift, 1e-12, "norm preservation"));
    }
    {
        // doubling the domain at fixed dx changes leakage by < 10 %
        SpreadingConfig big = cfg.spreading;
        big.grid_points *= 2;
        big.domain_length *= 2.0;
        SpreadingReport rep2 = spreading_report(big);
        double rel = 0.0;
        for (std::size_t i = 0; i < rep.rows.size() && i < rep2.rows.size(); ++i) {
            if (rep.rows[i].t <= 0.0 || rep.rows[i].t > 1e-3) continue;
            rel = std::max(rel, std::abs(rep.rows[i].free_leakage - rep2.rows[i].free_leakage) /
                                    rep.rows[i].free_leakage);
        }
        out.push_back(CheckReport::make("hegerfeldt.grid_robustness", rel, 0.1,
                                        "wrap-around under control"));
    }
    return out;
}

inline std::vector<CheckReport> run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "fock") return run_fock_suite(cfg);
    if (name == "photon") return run_photon_suite(cfg);
    if (name == "scaffold") return run_scaffold_suite(cfg);
    if (name == "opexpr") return run_opexpr_suite(cfg);
    if (name == "modular") return run_modular_suite(cfg);
    if (name == "hegerfeldt") return run_hegerfeldt_suite(cfg);
    if (name == "all") {
        std::vector<CheckReport> out;
        for (const char* s : {"fock", "photon", "scaffold", "opexpr", "modular", "hegerfeldt"}) {
            auto sub = run_suite(s, cfg);
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }
    throw ConfigError("unknown suite: " + name);
}

}  // namespace qkin

#endif
