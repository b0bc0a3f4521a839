#ifndef QKIN_FOCK_HPP
#define QKIN_FOCK_HPP

#include "qkin/linalg.hpp"
#include "qkin/report.hpp"

#include <cmath>
#include <numbers>

// Single-mode truncated Fock space: ladder operators with hbar-scaled
// commutator [a, a^dagger] = hbar, Weyl operators, and the grid
// (Schrodinger) representation used for the Stone-von Neumann desk check.

namespace qkin {

struct CutoffTooSmall : LinalgError {
    using LinalgError::LinalgError;
};
struct GridUnderResolved : LinalgError {
    using LinalgError::LinalgError;
};

struct HbarScale {
    double value = 1.0;
    HbarScale() = default;
    explicit HbarScale(double v) : value(v) {
        if (!(v > 0.0)) throw LinalgError("HbarScale: value must be positive");
    }
};

struct TruncatedFock {
    int cutoff;  // states |0> ... |cutoff-1>
    HbarScale hbar;

    TruncatedFock(int n_max, HbarScale h) : cutoff(n_max), hbar(h) {
        if (n_max < 2) throw CutoffTooSmall("TruncatedFock: cutoff must be >= 2");
    }
};

struct LadderPair {
    ComplexMatrix a;
    ComplexMatrix a_dagger;
};

// <n-1| a |n> = sqrt(hbar n); everything else zero.
inline LadderPair build_ladder(const TruncatedFock& fock) {
    const int n = fock.cutoff;
    ComplexMatrix a = ComplexMatrix::Zero(n, n);
    for (int m = 1; m < n; ++m) a(m - 1, m) = std::sqrt(fock.hbar.value * m);
    return {a, a.adjoint()};
}

// N = a^dagger a / hbar: diagonal 0,1,...,cutoff-1 independent of hbar.
inline ComplexMatrix number_operator(const TruncatedFock& fock) {
    LadderPair l = build_ladder(fock);
    return (l.a_dagger * l.a) / fock.hbar.value;
}

// Projector onto |0> ... |cutoff-1-drop>; the top `drop` levels carry the
// truncation defect and are excluded from commutator checks.
inline ComplexMatrix truncation_projector(int cutoff, int drop = 1) {
    ComplexMatrix p = ComplexMatrix::Zero(cutoff, cutoff);
    for (int m = 0; m + drop < cutoff; ++m) p(m, m) = 1.0;
    return p;
}

// || P ([a,a^dagger] - hbar 1) P || with P excluding the top level.
inline CheckReport check_ccr(const TruncatedFock& fock, Tolerance tol = {}) {
    LadderPair l = build_ladder(fock);
    ComplexMatrix comm = l.a * l.a_dagger - l.a_dagger * l.a;
    ComplexMatrix defect =
        comm - fock.hbar.value * ComplexMatrix::Identity(fock.cutoff, fock.cutoff);
    ComplexMatrix p = truncation_projector(fock.cutoff);
    double err = (p * defect * p).norm();
    return CheckReport::make("fock.ccr_projected", err, tol.bound(fock.hbar.value),
                             "[a, a^dagger] = hbar (projected)");
}

// Quadrature operators with [q, p] = i hbar:
// q = sqrt(hbar/2)(atilde + atilde^dagger), atilde = a / sqrt(hbar).
inline ComplexMatrix quadrature_q(const TruncatedFock& fock) {
    LadderPair l = build_ladder(fock);
    return std::sqrt(0.5) * (l.a + l.a_dagger);  // sqrt(hbar/2) * a/sqrt(hbar) etc.
}

inline ComplexMatrix quadrature_p(const TruncatedFock& fock) {
    LadderPair l = build_ladder(fock);
    return Complex(0.0, 1.0) * std::sqrt(0.5) * (l.a_dagger - l.a);
}

struct WeylArgument {
    double a_coeff = 0.0;  // coefficient of q
    double b_coeff = 0.0;  // coefficient of p
};

inline double symplectic_form(const WeylArgument& xi, const WeylArgument& eta) {
    return xi.a_coeff * eta.b_coeff - eta.a_coeff * xi.b_coeff;
}

// W(xi) = exp(i (a q + b p) / hbar), unitary on the truncated space.
inline ComplexMatrix weyl_operator(const ComplexMatrix& q_op, const ComplexMatrix& p_op,
                                   const WeylArgument& xi, double hbar) {
    ComplexMatrix gen = xi.a_coeff * q_op + xi.b_coeff * p_op;
    return mat_exp(gen, Complex(0.0, 1.0 / hbar));
}

inline ComplexMatrix weyl_operator(const TruncatedFock& fock, const WeylArgument& xi) {
    return weyl_operator(quadrature_q(fock), quadrature_p(fock), xi, fock.hbar.value);
}

// Residual of W(xi) W(eta) = exp(-i sigma(xi,eta) / (2 hbar)) W(xi+eta),
// measured on the lowest three quarters of the levels: the top quarter is
// where the truncated generators fail to close the BCH identity.
inline double weyl_relation_residual(const TruncatedFock& fock, const WeylArgument& xi,
                                     const WeylArgument& eta) {
    ComplexMatrix q = quadrature_q(fock);
    ComplexMatrix p = quadrature_p(fock);
    const double hbar = fock.hbar.value;
    ComplexMatrix lhs = weyl_operator(q, p, xi, hbar) * weyl_operator(q, p, eta, hbar);
    WeylArgument sum{xi.a_coeff + eta.a_coeff, xi.b_coeff + eta.b_coeff};
    Complex phase = std::exp(Complex(0.0, -symplectic_form(xi, eta) / (2.0 * hbar)));
    ComplexMatrix rhs = phase * weyl_operator(q, p, sum, hbar);
    const int keep = (3 * fock.cutoff) / 4;
    return (lhs - rhs).topLeftCorner(keep, keep).norm();
}

// ---------------------------------------------------------------------------
// Grid (Schrodinger) representation: position as multiplication, momentum
// as spectral (Fourier) differentiation. p = F^dagger diag(hbar k) F is
// Hermitian because the symbol is real.
// ---------------------------------------------------------------------------

struct GridRep {
    int points;
    double length;
    double hbar;
    RealVector x;          // grid coordinates
    ComplexMatrix q_op;
    ComplexMatrix p_op;
};

inline ComplexMatrix dft_matrix(int n) {
    ComplexMatrix f(n, n);
    const double w = -2.0 * std::numbers::pi / n;
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) f(j, k) = std::polar(1.0 / std::sqrt(double(n)), w * j * k);
    return f;
}

inline GridRep make_grid(int points, double length, double hbar = 1.0) {
    if (points < 8) throw LinalgError("make_grid: need at least 8 points");
    GridRep g;
    g.points = points;
    g.length = length;
    g.hbar = hbar;
    const double dx = length / points;
    g.x = RealVector(points);
    for (int j = 0; j < points; ++j) g.x[j] = (j - points / 2) * dx;
    g.q_op = g.x.cast<Complex>().asDiagonal();

    RealVector k(points);
    const double dk = 2.0 * std::numbers::pi / length;
    for (int j = 0; j < points; ++j) {
        int m = (j <= points / 2) ? j : j - points;
        k[j] = dk * m;
    }
    if (points % 2 == 0) k[points / 2] = 0.0;  // drop the unpaired Nyquist mode
    ComplexMatrix f = dft_matrix(points);
    g.p_op = f.adjoint() * (hbar * k).cast<Complex>().asDiagonal() * f;
    g.p_op = 0.5 * (g.p_op + g.p_op.adjoint());
    return g;
}

inline ComplexMatrix weyl_operator(const GridRep& grid, const WeylArgument& xi) {
    return weyl_operator(grid.q_op, grid.p_op, xi, grid.hbar);
}

// Stone-von Neumann desk check: diagonalize the grid oscillator
// H = (p^2 + q^2) / 2 (natural units), fix eigenvector phases so that
// a_grid = (q + i p)/sqrt(2 hbar) acts with positive matrix elements,
// and compare the intertwined ladder action against the Fock ladder.
struct SvnResult {
    double max_error = 0.0;
    double orthonormality_error = 0.0;
    double vacuum_overlap = 0.0;
};

inline SvnResult svn_intertwine(const TruncatedFock& fock, const GridRep& grid,
                                int n_states) {
    if (n_states < 1 || n_states > fock.cutoff)
        throw LinalgError("svn_intertwine: n_states out of range");
    const double hbar = grid.hbar;
    // classical turning-point extent of the top requested state; the grid
    // must cover it in position and at least half of it in momentum
    // (between half and full coverage is the pre-asymptotic sweep regime)
    const double extent = std::sqrt(2.0 * hbar * (n_states - 0.5));
    const double dx = grid.length / grid.points;
    const double p_nyquist = hbar * std::numbers::pi / dx;
    if (grid.length / 2.0 < extent || p_nyquist < 0.5 * extent)
        throw GridUnderResolved("svn_intertwine: grid cannot hold the requested states");
    ComplexMatrix h = (grid.p_op * grid.p_op + grid.q_op * grid.q_op) / 2.0;
    h = 0.5 * (h + h.adjoint());
    HermitianEig eig = hermitian_eig(h);
    ComplexMatrix v = eig.eigenvectors.leftCols(n_states);

    ComplexMatrix a_grid = (grid.q_op + Complex(0.0, 1.0) * grid.p_op) / std::sqrt(2.0 * hbar);

    // Phase convention: ground state real-positive at its peak, then
    // <phi_{n-1}| a |phi_n> real positive recursively.
    Eigen::Index peak;
    v.col(0).cwiseAbs().maxCoeff(&peak);
    v.col(0) *= std::polar(1.0, -std::arg(v(peak, 0)));
    for (int n = 1; n < n_states; ++n) {
        Complex c = v.col(n - 1).dot(a_grid * v.col(n));
        v.col(n) *= std::polar(1.0, -std::arg(c));
    }

    SvnResult r;
    r.orthonormality_error =
        (v.adjoint() * v - ComplexMatrix::Identity(n_states, n_states)).norm();
    if (r.orthonormality_error > 1e-6)
        throw GridUnderResolved("svn_intertwine: grid eigenfunctions not orthonormal");

    // In the intertwined picture U phi_n = |n>, comparing U a_grid U^dagger
    // with a_fock on |n> is comparing a_grid phi_n with sqrt(n) phi_{n-1}.
    for (int n = 0; n < n_states; ++n) {
        ComplexVector av = a_grid * v.col(n);
        ComplexVector target = ComplexVector::Zero(grid.points);
        if (n > 0) target = std::sqrt(double(n)) * v.col(n - 1);
        r.max_error = std::max(r.max_error, (av - target).norm());
    }

    // Gaussian ground-state cross-check against the closed form.
    ComplexVector gauss(grid.points);
    for (int j = 0; j < grid.points; ++j)
        gauss[j] = std::exp(-grid.x[j] * grid.x[j] / (2.0 * hbar));
    gauss.normalize();
    r.vacuum_overlap = std::abs(gauss.dot(v.col(0)));
    return r;
}

inline CheckReport svn_intertwiner_check(const TruncatedFock& fock, const GridRep& grid,
                                         int n_states, Tolerance tol = {1e-6, 0.0}) {
    SvnResult r = svn_intertwine(fock, grid, n_states);
    auto rep = CheckReport::make("fock.svn_intertwiner", r.max_error, tol.bound(),
                                 "Stone-von Neumann uniqueness (desk check)");
    rep.details.push_back({"orthonormality_error", std::to_string(r.orthonormality_error)});
    rep.details.push_back({"vacuum_overlap", std::to_string(r.vacuum_overlap)});
    return rep;
}

}  // namespace qkin

#endif
