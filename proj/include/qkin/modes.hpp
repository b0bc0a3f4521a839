#ifndef QKIN_MODES_HPP
#define QKIN_MODES_HPP

#include "qkin/fock.hpp"
#include "qkin/linalg.hpp"
#include "qkin/report.hpp"

#include <array>
#include <cmath>
#include <vector>

// Multimode truncated photon field on a tensor product of per-mode Fock
// spaces: Hamiltonian in both orderings, helicity operator, smeared-field
// commutators, and the Fock-vacuum separating diagnostic.

namespace qkin {

struct DimensionBudgetExceeded : LinalgError {
    using LinalgError::LinalgError;
};
struct LengthMismatch : LinalgError {
    using LinalgError::LinalgError;
};

struct ModeLabel {
    std::array<double, 3> wavevector{};
    int helicity = +1;  // +1 or -1

    double wavenumber() const {
        return std::sqrt(wavevector[0] * wavevector[0] + wavevector[1] * wavevector[1] +
                         wavevector[2] * wavevector[2]);
    }
};

// Dispersion omega = c |k|; enforced on construction, never stored.
inline double mode_frequency(const ModeLabel& m, double c) { return c * m.wavenumber(); }

struct ModeSet {
    std::vector<ModeLabel> modes;
    int per_mode_cutoff;
    HbarScale hbar;
    double c = 1.0;
    long dimension_budget = 4096;

    ModeSet(std::vector<ModeLabel> ms, int cutoff, HbarScale h, double c_ = 1.0,
            long budget = 4096)
        : modes(std::move(ms)), per_mode_cutoff(cutoff), hbar(h), c(c_),
          dimension_budget(budget) {
        if (cutoff < 2) throw CutoffTooSmall("ModeSet: per-mode cutoff must be >= 2");
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (modes[i].helicity != 1 && modes[i].helicity != -1)
                throw LinalgError("ModeSet: helicity must be +1 or -1");
            for (std::size_t j = i + 1; j < modes.size(); ++j) {
                if (modes[i].helicity == modes[j].helicity &&
                    modes[i].wavevector == modes[j].wavevector)
                    throw LinalgError("ModeSet: duplicate (wavevector, helicity) mode");
            }
        }
        if (total_dimension() > dimension_budget)
            throw DimensionBudgetExceeded("ModeSet: tensor dimension exceeds budget");
    }

    std::size_t mode_count() const { return modes.size(); }

    long total_dimension() const {
        long d = 1;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            d *= per_mode_cutoff;
            if (d > dimension_budget) return d;
        }
        return d;
    }

    double frequency(std::size_t mode_index) const {
        return mode_frequency(modes.at(mode_index), c);
    }
};

struct MultimodeOperator {
    ComplexMatrix matrix;
    std::vector<std::size_t> mode_support;  // tensor factors acted on nontrivially
};

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Embed a single-mode operator into the tensor product (factor 0 is the
// leftmost tensor slot).
inline ComplexMatrix embed(const ModeSet& ms, std::size_t mode_index,
                           const ComplexMatrix& op) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (std::size_t i = 0; i < ms.mode_count(); ++i) {
        if (i == mode_index)
            out = kron(out, op);
        else
            out = kron(out, ComplexMatrix::Identity(ms.per_mode_cutoff, ms.per_mode_cutoff));
    }
    return out;
}

inline MultimodeOperator mode_annihilator(const ModeSet& ms, std::size_t mode_index) {
    TruncatedFock f(ms.per_mode_cutoff, ms.hbar);
    return {embed(ms, mode_index, build_ladder(f).a), {mode_index}};
}

inline MultimodeOperator mode_number(const ModeSet& ms, std::size_t mode_index) {
    TruncatedFock f(ms.per_mode_cutoff, ms.hbar);
    return {embed(ms, mode_index, number_operator(f)), {mode_index}};
}

// Occupation tuple of a tensor-basis index, leftmost factor first.
inline std::vector<int> occupations(const ModeSet& ms, long basis_index) {
    std::vector<int> occ(ms.mode_count());
    for (std::size_t i = ms.mode_count(); i-- > 0;) {
        occ[i] = static_cast<int>(basis_index % ms.per_mode_cutoff);
        basis_index /= ms.per_mode_cutoff;
    }
    return occ;
}

enum class Ordering { Symmetric, Normal };

// Symmetric: sum_k hbar omega_k (N_k + 1/2); normal: sum_k hbar omega_k N_k.
inline MultimodeOperator build_hamiltonian(const ModeSet& ms, Ordering ordering) {
    const long dim = ms.total_dimension();
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < ms.mode_count(); ++i) {
        const double w = ms.frequency(i);
        ComplexMatrix n_i = mode_number(ms, i).matrix;
        h += ms.hbar.value * w * n_i;
        if (ordering == Ordering::Symmetric)
            h += 0.5 * ms.hbar.value * w * ComplexMatrix::Identity(dim, dim);
        support.push_back(i);
    }
    return {h, support};
}

inline double single_photon_energy(const ModeSet& ms, std::size_t mode_index) {
    return ms.hbar.value * ms.frequency(mode_index);
}

// Lambda = sum_k hbar sigma_k N_k.
inline MultimodeOperator build_helicity_operator(const ModeSet& ms) {
    const long dim = ms.total_dimension();
    ComplexMatrix lam = ComplexMatrix::Zero(dim, dim);
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < ms.mode_count(); ++i) {
        lam += ms.hbar.value * double(ms.modes[i].helicity) * mode_number(ms, i).matrix;
        support.push_back(i);
    }
    return {lam, support};
}

// The Fock vacuum |0,...,0> of the tensor product.
inline ComplexVector fock_vacuum(const ModeSet& ms) {
    ComplexVector v = ComplexVector::Zero(ms.total_dimension());
    v[0] = 1.0;
    return v;
}

// Both H (normal) and Lambda must be diagonal in the occupation basis and
// reconstruct from the same occupation readouts with weights hbar*omega and
// hbar*sigma. `perturb_weight` injects a defect for the negative control.
inline CheckReport joint_quantization_check(const ModeSet& ms, Tolerance tol = {},
                                            double perturb_weight = 0.0) {
    const long dim = ms.total_dimension();
    ComplexMatrix h = build_hamiltonian(ms, Ordering::Normal).matrix;
    ComplexMatrix lam = build_helicity_operator(ms).matrix;

    double offdiag = 0.0;
    for (long i = 0; i < dim; ++i)
        for (long j = 0; j < dim; ++j)
            if (i != j) offdiag = std::max(offdiag, std::abs(h(i, j)) + std::abs(lam(i, j)));

    double recon = 0.0;
    for (long b = 0; b < dim; ++b) {
        std::vector<int> occ = occupations(ms, b);
        double e = 0.0, s = 0.0;
        for (std::size_t i = 0; i < ms.mode_count(); ++i) {
            double w = ms.hbar.value * ms.frequency(i);
            if (i == 0) w += perturb_weight;
            e += w * occ[i];
            s += ms.hbar.value * ms.modes[i].helicity * occ[i];
        }
        recon = std::max(recon, std::abs(h(b, b).real() - e));
        recon = std::max(recon, std::abs(lam(b, b).real() - s));
    }
    double scale = std::max(h.norm(), 1.0);
    return CheckReport::make("photon.joint_quantization", std::max(offdiag, recon),
                             tol.bound(scale),
                             "H and Lambda quantize the same occupation readouts");
}

enum class CcrForm { PsiPsiDagger, PhiPi };

// Smeared-field commutators in either canonical form, checked against
// hbar (f,g) on the truncation-projected subspace.
inline CheckReport smeared_field_ccr(const ModeSet& ms, const ComplexVector& f,
                                     const ComplexVector& g, CcrForm form,
                                     Tolerance tol = {}) {
    const long nm = static_cast<long>(ms.mode_count());
    if (f.size() != nm || g.size() != nm)
        throw LengthMismatch("smeared_field_ccr: coefficient vector length mismatch");
    const long dim = ms.total_dimension();
    const double hbar = ms.hbar.value;

    std::vector<ComplexMatrix> a(nm);
    for (long k = 0; k < nm; ++k) a[k] = mode_annihilator(ms, k).matrix;

    // project out the top per-mode level everywhere
    ComplexMatrix p = ComplexMatrix::Zero(dim, dim);
    for (long b = 0; b < dim; ++b) {
        std::vector<int> occ = occupations(ms, b);
        bool keep = true;
        for (int o : occ)
            if (o >= ms.per_mode_cutoff - 1) keep = false;
        if (keep) p(b, b) = 1.0;
    }

    ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
    ComplexMatrix defect;
    Complex pairing = f.dot(g);  // sum conj(f_k) g_k
    if (form == CcrForm::PsiPsiDagger) {
        ComplexMatrix psi_f = ComplexMatrix::Zero(dim, dim);
        ComplexMatrix psid_g = ComplexMatrix::Zero(dim, dim);
        for (long k = 0; k < nm; ++k) {
            psi_f += std::conj(f[k]) * a[k];
            psid_g += g[k] * a[k].adjoint();
        }
        defect = psi_f * psid_g - psid_g * psi_f - hbar * pairing * id;
    } else {
        // phi(f) = sum f_k (a_k + a_k^dagger)/sqrt(2),
        // pi(g) = i sum g_k (a_k^dagger - a_k)/sqrt(2), real f, g.
        ComplexMatrix phi = ComplexMatrix::Zero(dim, dim);
        ComplexMatrix pi = ComplexMatrix::Zero(dim, dim);
        for (long k = 0; k < nm; ++k) {
            phi += (f[k].real() / std::sqrt(2.0)) * (a[k] + a[k].adjoint());
            pi += Complex(0.0, g[k].real() / std::sqrt(2.0)) * (a[k].adjoint() - a[k]);
        }
        Complex real_pairing = 0.0;
        for (long k = 0; k < nm; ++k) real_pairing += f[k].real() * g[k].real();
        defect = phi * pi - pi * phi - Complex(0.0, hbar) * real_pairing * id;
    }
    double err = (p * defect * p).norm();
    double scale = std::max(1.0, hbar * std::abs(pairing));
    const char* anchor = form == CcrForm::PsiPsiDagger
                             ? "[psi(f), psi^dagger(g)] = hbar (f,g)"
                             : "[phi(f), pi(g)] = i hbar (f,g)";
    return CheckReport::make("photon.smeared_ccr", err, tol.bound(scale), anchor);
}

// Exhibits the annihilator witness: a_1 has positive norm yet kills the
// Fock vacuum, so no operator set containing it is separated by Omega_0.
struct SeparatingDiagnostic {
    bool separating;
    double witness_norm;       // operator norm of a_1
    double witness_on_vacuum;  // || a_1 Omega_0 ||
    double hermitian_combination_on_vacuum;  // || (a_1 + a_1^dagger) Omega_0 ||
};

inline SeparatingDiagnostic vacuum_separating_diagnostic(const ModeSet& ms) {
    ComplexMatrix a1 = mode_annihilator(ms, 0).matrix;
    ComplexVector vac = fock_vacuum(ms);
    SeparatingDiagnostic d;
    Eigen::JacobiSVD<ComplexMatrix> svd(a1);
    d.witness_norm = svd.singularValues()(0);
    d.witness_on_vacuum = (a1 * vac).norm();
    d.hermitian_combination_on_vacuum = ((a1 + a1.adjoint()) * vac).norm();
    d.separating = !(d.witness_norm > 0.0 && d.witness_on_vacuum == 0.0);
    return d;
}

}  // namespace qkin

#endif
