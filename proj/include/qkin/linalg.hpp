#ifndef QKIN_LINALG_HPP
#define QKIN_LINALG_HPP

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

// Dense complex linear-algebra kernels shared by every other header:
// Hermitian eigendecomposition, matrix exponential, complex powers of
// positive operators, and the antilinear polar decomposition.

namespace qkin {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct LinalgError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotHermitian : LinalgError {
    using LinalgError::LinalgError;
};
struct NotPositiveDefinite : LinalgError {
    using LinalgError::LinalgError;
};
struct SingularMap : LinalgError {
    using LinalgError::LinalgError;
};
struct ConvergenceFailure : LinalgError {
    using LinalgError::LinalgError;
};

struct Tolerance {
    double absolute = 1e-10;
    double relative = 1e-12;

    // pass criterion: error <= absolute + relative * scale
    bool accepts(double error, double scale = 1.0) const {
        return error <= absolute + relative * scale;
    }
    double bound(double scale = 1.0) const { return absolute + relative * scale; }
};

inline void require_finite(const ComplexMatrix& m, const std::string& who) {
    if (!m.allFinite()) throw LinalgError(who + ": non-finite entries");
}

inline void require_square(const ComplexMatrix& m, const std::string& who) {
    if (m.rows() != m.cols()) throw LinalgError(who + ": matrix not square");
}

// An antilinear operator stored as (linear matrix, conjugation-first):
// apply(v) = linear_part * conj(v).
struct AntilinearMap {
    ComplexMatrix linear_part;

    ComplexVector apply(const ComplexVector& v) const {
        return linear_part * v.conjugate();
    }
    // Composition (this after other): x -> L1 conj(L2 conj(x)) = L1 conj(L2) x,
    // which is linear, so we only compose antilinear-after-linear here.
    ComplexVector apply(const ComplexMatrix& a, const ComplexVector& v) const {
        return linear_part * (a * v).conjugate();
    }
    bool is_antiunitary(double tol = 1e-10) const {
        ComplexMatrix g = linear_part.adjoint() * linear_part;
        return (g - ComplexMatrix::Identity(g.rows(), g.cols())).norm() <= tol;
    }
    // J o J: x -> L conj(L conj(x)) = L conj(L) x
    ComplexMatrix squared() const { return linear_part * linear_part.conjugate(); }
};

struct HermitianEig {
    RealVector eigenvalues;   // ascending
    ComplexMatrix eigenvectors;  // unitary, columns
};

inline HermitianEig hermitian_eig(const ComplexMatrix& m, double herm_tol = 1e-9) {
    require_square(m, "hermitian_eig");
    require_finite(m, "hermitian_eig");
    const double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > herm_tol * scale)
        throw NotHermitian("hermitian_eig: input not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    if (es.info() != Eigen::Success)
        throw ConvergenceFailure("hermitian_eig: eigensolver failed");
    return {es.eigenvalues(), es.eigenvectors()};
}

// m^z for positive-definite Hermitian m, via V diag(lambda^z) V^dagger.
// Eigenvalues below floor_rel * lambda_max are rejected: Delta^{-1}
// amplifies noise beyond that point.
inline ComplexMatrix complex_power(const ComplexMatrix& m, Complex z,
                                   double floor_rel = 1e-13) {
    HermitianEig eig = hermitian_eig(m);
    const double lmax = eig.eigenvalues.cwiseAbs().maxCoeff();
    ComplexVector powered(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
        double lam = eig.eigenvalues[i];
        if (lam <= floor_rel * lmax)
            throw NotPositiveDefinite("complex_power: eigenvalue below positivity floor");
        powered[i] = std::pow(Complex(lam, 0.0), z);
    }
    return eig.eigenvectors * powered.asDiagonal() * eig.eigenvectors.adjoint();
}

// Polar decomposition S = J Delta^{1/2} of an antilinear map,
// with Delta = S^dagger S (linear, positive) and J = S o Delta^{-1/2}.
struct AntilinearPolar {
    AntilinearMap j;
    ComplexMatrix delta;
};

inline AntilinearPolar antilinear_polar(const AntilinearMap& s,
                                        double rank_tol = 1e-10) {
    const ComplexMatrix& L = s.linear_part;
    require_square(L, "antilinear_polar");
    Eigen::JacobiSVD<ComplexMatrix> svd(L);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(sv.size() - 1) <= rank_tol * sv(0))
        throw SingularMap("antilinear_polar: linear part rank-deficient");
    // For S x = L conj(x), the adjoint is x -> L^T conj(x), so
    // Delta = S^dagger S has matrix L^T conj(L) = conj(L^dagger L).
    ComplexMatrix delta = (L.adjoint() * L).conjugate();
    delta = 0.5 * (delta + delta.adjoint());
    ComplexMatrix delta_inv_sqrt = complex_power(delta, Complex(-0.5, 0.0));
    // J x = S(Delta^{-1/2} x) = L conj(Delta^{-1/2}) conj(x)
    AntilinearMap j{L * delta_inv_sqrt.conjugate()};
    return {j, delta};
}

// exp(scale * m). (Anti-)Hermitian arguments go through the
// eigendecomposition so unitarity/positivity hold at machine precision;
// everything else uses scaling-and-squaring on the Taylor series.
inline ComplexMatrix mat_exp_series(const ComplexMatrix& m, Complex scale = 1.0) {
    require_square(m, "mat_exp_series");
    require_finite(m, "mat_exp_series");
    ComplexMatrix a = scale * m;
    int squarings = 0;
    double nrm = a.norm();
    while (nrm > 0.5 && squarings < 60) {
        a *= 0.5;
        nrm *= 0.5;
        ++squarings;
    }
    if (squarings >= 60) throw ConvergenceFailure("mat_exp_series: norm too large");
    const Eigen::Index n = a.rows();
    ComplexMatrix result = ComplexMatrix::Identity(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    for (int kk = 1; kk <= 40; ++kk) {
        term = (term * a) / static_cast<double>(kk);
        result += term;
        if (term.norm() < 1e-18 * std::max(1.0, result.norm())) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

inline ComplexMatrix mat_exp(const ComplexMatrix& m, Complex scale = 1.0) {
    require_square(m, "mat_exp");
    require_finite(m, "mat_exp");
    const double nrm = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() <= 1e-12 * nrm) {
        // exp(scale*H) = V exp(scale*lambda) V^dagger
        HermitianEig eig = hermitian_eig(m);
        ComplexVector e(eig.eigenvalues.size());
        for (Eigen::Index i = 0; i < e.size(); ++i)
            e[i] = std::exp(scale * eig.eigenvalues[i]);
        return eig.eigenvectors * e.asDiagonal() * eig.eigenvectors.adjoint();
    }
    if ((m + m.adjoint()).norm() <= 1e-12 * nrm) {
        // anti-Hermitian: m = iH with H Hermitian
        ComplexMatrix h = m / Complex(0.0, 1.0);
        h = 0.5 * (h + h.adjoint());
        HermitianEig eig = hermitian_eig(h);
        ComplexVector e(eig.eigenvalues.size());
        for (Eigen::Index i = 0; i < e.size(); ++i)
            e[i] = std::exp(scale * Complex(0.0, 1.0) * eig.eigenvalues[i]);
        return eig.eigenvectors * e.asDiagonal() * eig.eigenvectors.adjoint();
    }
    return mat_exp_series(m, scale);
}

// Seeded random matrices: every stochastic check in the artifact derives
// from a named seed so reports are byte-reproducible.
inline ComplexMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, std::uint64_t seed) {
    ComplexMatrix m = random_matrix(n, seed);
    return 0.5 * (m + m.adjoint());
}

inline ComplexVector random_vector(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(gauss(rng), gauss(rng));
    return v;
}

}  // namespace qkin

#endif
