#ifndef QKIN_MODULAR_HPP
#define QKIN_MODULAR_HPP

#include "qkin/constants.hpp"
#include "qkin/linalg.hpp"
#include "qkin/report.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

// Finite-dimensional Tomita-Takesaki laboratory: *-algebra closures and
// commutants, GNS construction, cyclic/separating diagnostics, the
// (S, J, Delta) triple, modular flow, KMS and Gibbs checks, Connes
// cocycles, and the acceleration -> temperature chain.

namespace qkin {

struct NotAState : LinalgError {
    using LinalgError::LinalgError;
};
struct NotCyclicSeparating : LinalgError {
    using LinalgError::LinalgError;
};
struct NotInAlgebra : LinalgError {
    using LinalgError::LinalgError;
};
struct IllConditioned : LinalgError {
    using LinalgError::LinalgError;
};
struct SingularState : LinalgError {
    using LinalgError::LinalgError;
};
struct NonpositiveInput : LinalgError {
    using LinalgError::LinalgError;
};

namespace detail {

// Matrices treated as vectors in C^{d*d} for span computations.
inline ComplexVector vectorize(const ComplexMatrix& m) {
    ComplexVector v(m.size());
    for (Eigen::Index j = 0, k = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i, ++k) v[k] = m(i, j);
    return v;
}

// Orthonormal basis of the span of the given matrices (Gram-Schmidt with
// a fixed drop tolerance).
inline std::vector<ComplexMatrix> orthonormal_span(const std::vector<ComplexMatrix>& mats,
                                                   double drop_tol = 1e-10) {
    std::vector<ComplexMatrix> basis;
    std::vector<ComplexVector> vecs;
    for (const auto& m : mats) {
        ComplexVector v = vectorize(m);
        for (const auto& b : vecs) v -= b.dot(v) * b;
        double n = v.norm();
        if (n > drop_tol) {
            v /= n;
            vecs.push_back(v);
            ComplexMatrix mb(m.rows(), m.cols());
            for (Eigen::Index j = 0, k = 0; j < m.cols(); ++j)
                for (Eigen::Index i = 0; i < m.rows(); ++i, ++k) mb(i, j) = v[k];
            basis.push_back(mb);
        }
    }
    return basis;
}

// Distance from m to the span of an orthonormal matrix basis.
inline double distance_to_span(const ComplexMatrix& m,
                               const std::vector<ComplexMatrix>& basis) {
    ComplexVector v = vectorize(m);
    for (const auto& b : basis) v -= vectorize(b).dot(v) * vectorize(b);
    return v.norm();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FiniteAlgebra: unital *-algebra closure of a generator list, plus its
// commutant. Closure is computed by iterated products with adjoint closure
// each round until the span dimension stabilizes.
// ---------------------------------------------------------------------------

struct FiniteAlgebra {
    std::vector<ComplexMatrix> generators;
    std::vector<ComplexMatrix> closure;          // orthonormal basis
    std::vector<ComplexMatrix> commutant_basis;  // orthonormal basis

    Eigen::Index space_dim() const { return closure.empty() ? 0 : closure.front().rows(); }
};

inline FiniteAlgebra build_algebra(std::vector<ComplexMatrix> generators) {
    if (generators.empty()) throw LinalgError("build_algebra: no generators");
    const Eigen::Index d = generators.front().rows();
    for (const auto& g : generators) {
        require_square(g, "build_algebra");
        if (g.rows() != d) throw LinalgError("build_algebra: mixed dimensions");
    }
    std::vector<ComplexMatrix> pool;
    pool.push_back(ComplexMatrix::Identity(d, d));
    for (const auto& g : generators) {
        pool.push_back(g);
        pool.push_back(g.adjoint());
    }
    std::vector<ComplexMatrix> basis = detail::orthonormal_span(pool);
    while (true) {
        std::size_t before = basis.size();
        std::vector<ComplexMatrix> grown = basis;
        for (const auto& a : basis) {
            for (const auto& g : generators) {
                grown.push_back(a * g);
                grown.push_back(a * g.adjoint());
            }
        }
        basis = detail::orthonormal_span(grown);
        if (basis.size() == before) break;
        if (basis.size() > static_cast<std::size_t>(d) * d)
            throw LinalgError("build_algebra: closure exceeded full matrix algebra");
    }

    // Commutant: nullspace of X -> [X, g] over generators and adjoints.
    std::vector<ComplexMatrix> comm;
    {
        std::vector<ComplexMatrix> star_gens;
        for (const auto& g : generators) {
            star_gens.push_back(g);
            star_gens.push_back(g.adjoint());
        }
        const Eigen::Index d2 = d * d;
        ComplexMatrix stacked(static_cast<Eigen::Index>(star_gens.size()) * d2, d2);
        ComplexMatrix id = ComplexMatrix::Identity(d, d);
        for (std::size_t gi = 0; gi < star_gens.size(); ++gi) {
            const ComplexMatrix& g = star_gens[gi];
            // vec(gX - Xg) = (I (x) g - g^T (x) I) vec(X), column-major vec
            ComplexMatrix op = ComplexMatrix::Zero(d2, d2);
            for (Eigen::Index col = 0; col < d; ++col)
                op.block(col * d, col * d, d, d) += g;
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j)
                    op.block(j * d, i * d, d, d) -= g(i, j) * id;  // (g^T)(j,i) = g(i,j)
            stacked.block(static_cast<Eigen::Index>(gi) * d2, 0, d2, d2) = op;
        }
        Eigen::JacobiSVD<ComplexMatrix> svd(stacked, Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        double cut = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 0.0);
        std::vector<ComplexMatrix> null;
        for (Eigen::Index c = 0; c < svd.matrixV().cols(); ++c) {
            if (c < sv.size() && sv(c) > cut) continue;
            ComplexVector v = svd.matrixV().col(c);
            ComplexMatrix x(d, d);
            for (Eigen::Index j = 0, k = 0; j < d; ++j)
                for (Eigen::Index i = 0; i < d; ++i, ++k) x(i, j) = v[k];
            null.push_back(x);
        }
        comm = detail::orthonormal_span(null);
    }
    return {std::move(generators), std::move(basis), std::move(comm)};
}

// Re-closing the closure must add no dimension; the commutant of the
// commutant must re-span the closure.
inline double double_commutant_residual(const FiniteAlgebra& alg) {
    FiniteAlgebra of_comm = build_algebra(alg.commutant_basis);
    double res = 0.0;
    for (const auto& a : alg.closure)
        res = std::max(res, detail::distance_to_span(a, of_comm.commutant_basis));
    for (const auto& a : of_comm.commutant_basis)
        res = std::max(res, detail::distance_to_span(a, alg.closure));
    return res;
}

// ---------------------------------------------------------------------------
// GNS construction from a density matrix on the full matrix algebra M_n,
// via the inner product <A, B> = omega(A^dagger B) = Tr(rho A^dagger B).
// ---------------------------------------------------------------------------

struct GnsResult {
    Eigen::Index rep_space_dim;        // rank of the Gram matrix
    ComplexMatrix basis_coords;        // n^2 x dim: columns map algebra coords -> rep space
    ComplexVector omega_vec;           // class of the identity
    // rep(A) in the orthonormal rep basis
    std::vector<ComplexMatrix> unit_reps;  // representations of the matrix units E_ij
    Eigen::Index n;

    ComplexMatrix represent(const ComplexMatrix& a) const {
        ComplexMatrix out = ComplexMatrix::Zero(rep_space_dim, rep_space_dim);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                out += a(i, j) * unit_reps[static_cast<std::size_t>(i * n + j)];
        return out;
    }
};

inline GnsResult gns_construct(const ComplexMatrix& rho, double tol = 1e-10) {
    require_square(rho, "gns_construct");
    const Eigen::Index n = rho.rows();
    if ((rho - rho.adjoint()).norm() > tol * std::max(1.0, rho.norm()) ||
        std::abs(rho.trace().real() - 1.0) > 1e-8 || std::abs(rho.trace().imag()) > 1e-8)
        throw NotAState("gns_construct: density matrix must be Hermitian with unit trace");
    {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw NotAState("gns_construct: density matrix not positive");
    }

    const Eigen::Index n2 = n * n;
    auto unit = [&](Eigen::Index i, Eigen::Index j) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(i, j) = 1.0;
        return e;
    };
    // Gram matrix over the matrix-unit basis: G[(ij),(kl)] = Tr(rho E_ij^+ E_kl)
    ComplexMatrix gram(n2, n2);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index l = 0; l < n; ++l)
                    gram(i * n + j, k * n + l) =
                        (rho * unit(i, j).adjoint() * unit(k, l)).trace();
    gram = 0.5 * (gram + gram.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gram);
    const double cut = 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff());

    GnsResult r;
    r.n = n;
    std::vector<Eigen::Index> keep;
    for (Eigen::Index c = 0; c < n2; ++c)
        if (es.eigenvalues()[c] > cut) keep.push_back(c);
    r.rep_space_dim = static_cast<Eigen::Index>(keep.size());
    // isometric coords: |A> = D^{1/2} V^+ (coeffs of A in matrix units), so
    // <A|B> = A^+ V D V^+ B = A^+ G B = omega(A^+ B)
    ComplexMatrix v(n2, r.rep_space_dim);
    RealVector scale(r.rep_space_dim);
    for (Eigen::Index c = 0; c < r.rep_space_dim; ++c) {
        v.col(c) = es.eigenvectors().col(keep[c]);
        scale[c] = std::sqrt(es.eigenvalues()[keep[c]]);
    }
    r.basis_coords = v;
    auto embed_class = [&](const ComplexMatrix& a) {
        ComplexVector coeff(n2);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) coeff[i * n + j] = a(i, j);
        ComplexVector raw = v.adjoint() * coeff;
        for (Eigen::Index c = 0; c < r.rep_space_dim; ++c) raw[c] *= scale[c];
        return raw;
    };
    r.omega_vec = embed_class(ComplexMatrix::Identity(n, n));
    // rep(E_ij) acts by left multiplication; build from classes of E_ij E_kl
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            ComplexMatrix m(r.rep_space_dim, n2);
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index l = 0; l < n; ++l)
                    m.col(k * n + l) = embed_class(unit(i, j) * unit(k, l));
            // columns of m are rep(E_ij)|E_kl>; express against |E_kl> classes
            ComplexMatrix classes(r.rep_space_dim, n2);
            for (Eigen::Index k = 0; k < n; ++k)
                for (Eigen::Index l = 0; l < n; ++l)
                    classes.col(k * n + l) = embed_class(unit(k, l));
            // rep = m * pinv(classes)
            Eigen::JacobiSVD<ComplexMatrix> svd(classes,
                                                Eigen::ComputeThinU | Eigen::ComputeThinV);
            r.unit_reps.push_back(m * svd.solve(
                ComplexMatrix::Identity(r.rep_space_dim, r.rep_space_dim)));
        }
    }
    return r;
}

inline Complex gns_state_value(const GnsResult& r, const ComplexMatrix& a) {
    return r.omega_vec.dot(r.represent(a) * r.omega_vec);
}

// ---------------------------------------------------------------------------
// Cyclic / separating diagnostics
// ---------------------------------------------------------------------------

struct CyclicSeparating {
    bool cyclic;
    bool separating;
    std::optional<ComplexMatrix> separating_witness;  // nonzero A with A v = 0
    Eigen::Index orbit_dim;
};

inline CyclicSeparating cyclic_separating_check(const FiniteAlgebra& alg,
                                                const ComplexVector& v,
                                                double tol = 1e-10) {
    const Eigen::Index d = alg.space_dim();
    if (v.size() != d) throw LinalgError("cyclic_separating_check: dimension mismatch");
    // cyclic: span{A v} over the closure basis has full dimension
    ComplexMatrix orbit(d, static_cast<Eigen::Index>(alg.closure.size()));
    for (std::size_t i = 0; i < alg.closure.size(); ++i)
        orbit.col(static_cast<Eigen::Index>(i)) = alg.closure[i] * v;
    Eigen::JacobiSVD<ComplexMatrix> svd_orbit(orbit);
    const auto& sv = svd_orbit.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > tol * std::max(1.0, sv[0])) ++rank;

    // separating: the evaluation map A -> A v on the closure has trivial kernel
    ComplexMatrix eval(d, static_cast<Eigen::Index>(alg.closure.size()));
    for (std::size_t i = 0; i < alg.closure.size(); ++i)
        eval.col(static_cast<Eigen::Index>(i)) = alg.closure[i] * v;
    Eigen::JacobiSVD<ComplexMatrix> svd_eval(eval, Eigen::ComputeFullV);
    const auto& se = svd_eval.singularValues();
    bool separating = true;
    std::optional<ComplexMatrix> witness;
    Eigen::Index cols = eval.cols();
    Eigen::Index erank = 0;
    for (Eigen::Index i = 0; i < se.size(); ++i)
        if (se[i] > tol * std::max(1.0, se[0])) ++erank;
    if (erank < cols) {
        separating = false;
        ComplexVector ker = svd_eval.matrixV().col(cols - 1);
        ComplexMatrix w = ComplexMatrix::Zero(d, d);
        for (std::size_t i = 0; i < alg.closure.size(); ++i)
            w += ker[static_cast<Eigen::Index>(i)] * alg.closure[i];
        witness = w / w.norm();
    }
    return {rank == d, separating, witness, rank};
}

// ---------------------------------------------------------------------------
// The Tomita triple
// ---------------------------------------------------------------------------

struct ModularTriple {
    FiniteAlgebra algebra;
    ComplexVector omega_vec;
    AntilinearMap s_map;
    AntilinearMap j_map;
    ComplexMatrix delta;
};

// S (A Omega) = A^dagger Omega, extended over the full space (cyclicity),
// then polar-decomposed into J Delta^{1/2}.
inline ModularTriple tomita_triple(const FiniteAlgebra& alg, ComplexVector v) {
    v.normalize();
    CyclicSeparating cs = cyclic_separating_check(alg, v);
    if (!cs.cyclic || !cs.separating)
        throw NotCyclicSeparating("tomita_triple: vector not cyclic and separating");
    const Eigen::Index d = alg.space_dim();
    ComplexMatrix dom(d, static_cast<Eigen::Index>(alg.closure.size()));
    ComplexMatrix img(d, static_cast<Eigen::Index>(alg.closure.size()));
    for (std::size_t i = 0; i < alg.closure.size(); ++i) {
        dom.col(static_cast<Eigen::Index>(i)) = alg.closure[i] * v;
        img.col(static_cast<Eigen::Index>(i)) = alg.closure[i].adjoint() * v;
    }
    // antilinear S x = L conj(x) with L conj(dom) = img
    ComplexMatrix conj_dom = dom.conjugate();
    ComplexMatrix l = conj_dom.transpose()
                          .jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                          .solve(img.transpose())
                          .transpose();
    AntilinearMap s{l};
    AntilinearPolar polar = antilinear_polar(s);
    return {alg, v, s, polar.j, polar.delta};
}

struct TripleResiduals {
    double s_definition;      // max over basis of ||S(A v) - A^+ v||
    double reconstruction;    // ||S - J Delta^{1/2}|| on basis vectors
    double delta_fixes_omega;
    double j_fixes_omega;
    double j_squared;
    double jmj_commutant;     // span mismatch of J M J vs commutant
};

inline TripleResiduals triple_residuals(const ModularTriple& t) {
    TripleResiduals r{};
    const Eigen::Index d = t.algebra.space_dim();
    ComplexMatrix delta_sqrt = complex_power(t.delta, Complex(0.5, 0.0));
    for (const auto& a : t.algebra.closure) {
        ComplexVector av = a * t.omega_vec;
        r.s_definition = std::max(r.s_definition,
                                  (t.s_map.apply(av) - a.adjoint() * t.omega_vec).norm());
    }
    for (Eigen::Index c = 0; c < d; ++c) {
        ComplexVector e = ComplexVector::Zero(d);
        e[c] = 1.0;
        ComplexVector lhs = t.s_map.apply(e);
        ComplexVector rhs = t.j_map.apply(delta_sqrt * e);
        r.reconstruction = std::max(r.reconstruction, (lhs - rhs).norm());
    }
    r.delta_fixes_omega = (t.delta * t.omega_vec - t.omega_vec).norm();
    r.j_fixes_omega = (t.j_map.apply(t.omega_vec) - t.omega_vec).norm();
    r.j_squared = (t.j_map.squared() - ComplexMatrix::Identity(d, d)).norm();
    // J A J is linear with matrix K conj(A) conj(K) for J x = K conj(x)
    const ComplexMatrix& k = t.j_map.linear_part;
    double res = 0.0;
    for (const auto& a : t.algebra.closure) {
        ComplexMatrix jaj = k * a.conjugate() * k.conjugate();
        res = std::max(res, detail::distance_to_span(jaj, t.algebra.commutant_basis));
    }
    for (const auto& c : t.algebra.commutant_basis) {
        ComplexMatrix jcj = k * c.conjugate() * k.conjugate();
        res = std::max(res, detail::distance_to_span(jcj, t.algebra.closure));
    }
    r.jmj_commutant = res;
    return r;
}

// sigma_t(A) = Delta^{it} A Delta^{-it}
inline ComplexMatrix modular_flow(double t, const ModularTriple& triple,
                                  const ComplexMatrix& a, double membership_tol = 1e-8) {
    if (detail::distance_to_span(a, triple.algebra.closure) >
        membership_tol * std::max(1.0, a.norm()))
        throw NotInAlgebra("modular_flow: operator not in the algebra closure");
    ComplexMatrix u = complex_power(triple.delta, Complex(0.0, t));
    return u * a * u.adjoint();
}

inline double delta_condition_number(const ComplexMatrix& delta) {
    HermitianEig eig = hermitian_eig(delta);
    return eig.eigenvalues.maxCoeff() / eig.eigenvalues.minCoeff();
}

// KMS boundary identity for the flow sigma_t(B) = Delta^{it} B Delta^{-it}:
// omega(A sigma_{t-i}(B)) = omega(sigma_t(B) A), the continuation realized
// algebraically as sigma_{t-i}(B) = Delta^{it} Delta B Delta^{-1} Delta^{-it}.
// `corrupt_continuation` flips the continuation to the wrong half-strip
// (Delta^{-1} B Delta) for the negative control.
inline CheckReport kms_check(const ModularTriple& triple, const ComplexMatrix& a,
                             const ComplexMatrix& b, double t, Tolerance tol = {1e-9, 0.0},
                             bool corrupt_continuation = false) {
    if (delta_condition_number(triple.delta) > 1e12)
        throw IllConditioned("kms_check: cond(Delta) too large for continuation");
    const double dir = corrupt_continuation ? -1.0 : 1.0;
    ComplexMatrix dfwd = complex_power(triple.delta, Complex(dir, 0.0));
    ComplexMatrix dbwd = complex_power(triple.delta, Complex(-dir, 0.0));
    const ComplexVector& om = triple.omega_vec;
    double err = 0.0, scale = 1.0;
    for (double tt : {t, -t}) {
        ComplexMatrix u = complex_power(triple.delta, Complex(0.0, tt));
        ComplexMatrix b_cont = u * dfwd * b * dbwd * u.adjoint();
        ComplexMatrix b_flow = u * b * u.adjoint();
        Complex lhs = om.dot(a * b_cont * om);
        Complex rhs = om.dot(b_flow * a * om);
        err = std::max(err, std::abs(lhs - rhs));
        scale = std::max({scale, std::abs(lhs), std::abs(rhs)});
    }
    return CheckReport::make("modular.kms_identity", err, tol.bound(scale),
                             "omega(A sigma_{t-i}(B)) = omega(sigma_t(B) A)");
}

// ---------------------------------------------------------------------------
// Standard form on a doubled space: M = M_n (x) 1 with Omega built from a
// full-rank density. The unique finite-dimensional setting where every
// Tomita-Takesaki hypothesis holds exactly.
// ---------------------------------------------------------------------------

inline ComplexMatrix amplify(const ComplexMatrix& a) {  // A (x) 1
    const Eigen::Index n = a.rows();
    ComplexMatrix out = ComplexMatrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out.block(i * n, j * n, n, n) =
                a(i, j) * ComplexMatrix::Identity(n, n);
    return out;
}

struct StandardForm {
    FiniteAlgebra algebra;   // M_n (x) 1
    ComplexVector omega_vec; // sum_i sqrt(lambda_i) |i>|i> in the eigenbasis of rho
    ComplexMatrix rho;
    ComplexMatrix basis;     // eigenvectors of rho (columns)
};

inline StandardForm standard_form(const ComplexMatrix& rho, double floor_rel = 1e-12) {
    require_square(rho, "standard_form");
    const Eigen::Index n = rho.rows();
    HermitianEig eig = hermitian_eig(rho);
    if (eig.eigenvalues.minCoeff() <= floor_rel * eig.eigenvalues.maxCoeff())
        throw SingularState("standard_form: density matrix must be full rank");
    std::vector<ComplexMatrix> gens;
    auto unit = [&](Eigen::Index i, Eigen::Index j) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(i, j) = 1.0;
        return amplify(e);
    };
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) gens.push_back(unit(i, j));
    FiniteAlgebra alg = build_algebra(gens);
    ComplexVector omega = ComplexVector::Zero(n * n);
    for (Eigen::Index i = 0; i < n; ++i) {
        ComplexVector vi = eig.eigenvectors.col(i);
        double w = std::sqrt(eig.eigenvalues[i]);
        for (Eigen::Index a = 0; a < n; ++a)
            for (Eigen::Index b = 0; b < n; ++b) omega[a * n + b] += w * vi[a] * std::conj(vi[b]);
    }
    // conj in the second slot keeps (A (x) 1) expectations equal to Tr(rho A)
    return {std::move(alg), omega, rho, eig.eigenvectors};
}

// ---------------------------------------------------------------------------
// Gibbs states and physical-time KMS
// ---------------------------------------------------------------------------

inline ComplexMatrix gibbs_state(const ComplexMatrix& hamiltonian, double beta) {
    ComplexMatrix num = mat_exp(hamiltonian, Complex(-beta, 0.0));
    return num / num.trace().real();
}

struct GibbsKmsResult {
    CheckReport kms;
    double flow_vs_heisenberg;  // modular flow at t vs Heisenberg flow at s = -beta hbar t
    double delta_spectrum_error;  // spec(Delta) vs e^{-beta (E_i - E_j)}
    double detailed_balance_error;
};

// Builds the Gibbs standard form for H at inverse temperature beta and
// verifies: Delta realizes e^{-beta(E_i - E_j)}; modular flow equals
// Heisenberg evolution at physical time s = -beta hbar t; and the two-sided
// KMS identity for the modular flow.
inline GibbsKmsResult gibbs_kms_check(const ComplexMatrix& hamiltonian, double beta,
                                      const ComplexMatrix& a, const ComplexMatrix& b,
                                      double t, double hbar = 1.0,
                                      Tolerance tol = {1e-9, 0.0}) {
    ComplexMatrix rho = gibbs_state(hamiltonian, beta);
    StandardForm sf = standard_form(rho);
    ModularTriple triple = tomita_triple(sf.algebra, sf.omega_vec);

    GibbsKmsResult out{kms_check(triple, amplify(a), amplify(b), t, tol), 0.0, 0.0, 0.0};

    // Delta spectrum against Boltzmann ratios
    {
        HermitianEig eh = hermitian_eig(hamiltonian);
        std::vector<double> expected;
        const Eigen::Index n = hamiltonian.rows();
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                expected.push_back(std::exp(-beta * (eh.eigenvalues[i] - eh.eigenvalues[j])));
        std::sort(expected.begin(), expected.end());
        HermitianEig ed = hermitian_eig(triple.delta);
        double err = 0.0;
        for (Eigen::Index i = 0; i < ed.eigenvalues.size(); ++i)
            err = std::max(err, std::abs(ed.eigenvalues[i] -
                                         expected[static_cast<std::size_t>(i)]) /
                                    std::max(1.0, expected[static_cast<std::size_t>(i)]));
        out.delta_spectrum_error = err;
    }

    // sigma_t(A (x) 1) = (e^{-i beta H t} A e^{i beta H t}) (x) 1,
    // i.e. Heisenberg evolution e^{iHs/hbar} A e^{-iHs/hbar} at s = -beta hbar t.
    {
        ComplexMatrix flowed = modular_flow(t, triple, amplify(a));
        double s = -beta * hbar * t;
        ComplexMatrix u = mat_exp(hamiltonian, Complex(0.0, s / hbar));
        ComplexMatrix heis = amplify(u * a * u.adjoint());
        out.flow_vs_heisenberg = (flowed - heis).norm();
    }

    // Detailed balance on the first two eigenstates of H.
    {
        HermitianEig eh = hermitian_eig(hamiltonian);
        ComplexVector v0 = eh.eigenvectors.col(0), v1 = eh.eigenvectors.col(1);
        ComplexMatrix lower = v0 * v1.adjoint();  // |E0><E1|
        double gap = eh.eigenvalues[1] - eh.eigenvalues[0];
        double up_then_down = std::real((rho * lower * lower.adjoint()).trace());
        double down_then_up = std::real((rho * lower.adjoint() * lower).trace());
        out.detailed_balance_error =
            std::abs(down_then_up / up_then_down - std::exp(-beta * gap));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Connes cocycle: u_t = rho2^{it} rho1^{-it} (x) 1, the unitary relating the
// modular flows of two full-rank states on the same factor. Chain rule:
// u_{t+s} = u_t sigma_t^{omega1}(u_s).
// ---------------------------------------------------------------------------

inline ComplexMatrix connes_cocycle(const ComplexMatrix& rho1, const ComplexMatrix& rho2,
                                    double t) {
    {
        HermitianEig e1 = hermitian_eig(rho1);
        HermitianEig e2 = hermitian_eig(rho2);
        if (e1.eigenvalues.minCoeff() <= 1e-12 * e1.eigenvalues.maxCoeff() ||
            e2.eigenvalues.minCoeff() <= 1e-12 * e2.eigenvalues.maxCoeff())
            throw SingularState("connes_cocycle: states must be full rank");
    }
    if (t == 0.0) return ComplexMatrix::Identity(rho1.rows(), rho1.cols());
    return complex_power(rho2, Complex(0.0, t)) * complex_power(rho1, Complex(0.0, -t));
}

// ---------------------------------------------------------------------------
// Unruh chain: rapidity, inverse proper-time period, temperature
// ---------------------------------------------------------------------------

struct ThermalParameters {
    double rapidity;     // a tau / c
    double beta_tau;     // 2 pi c / a
    double temperature;  // hbar a / (2 pi c k_B)

    // consistency: T * beta_tau == hbar / k_B
    double consistency_residual(const PhysicalConstants& k) const {
        double lhs = temperature * beta_tau;
        double rhs = k.hbar / k.k_B;
        return std::abs(lhs - rhs) / rhs;
    }
};

inline ThermalParameters unruh_chain(double accel, const PhysicalConstants& k,
                                     double tau = 1.0) {
    if (!(accel > 0.0) || !(k.hbar > 0.0) || !(k.c > 0.0) || !(k.k_B > 0.0))
        throw NonpositiveInput("unruh_chain: acceleration and constants must be positive");
    ThermalParameters p;
    p.rapidity = accel * tau / k.c;
    p.beta_tau = 2.0 * std::numbers::pi * k.c / accel;
    p.temperature = k.hbar * accel / (2.0 * std::numbers::pi * k.c * k.k_B);
    return p;
}

}  // namespace qkin

#endif
