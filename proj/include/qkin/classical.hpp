#ifndef QKIN_CLASSICAL_HPP
#define QKIN_CLASSICAL_HPP

#include "qkin/linalg.hpp"
#include "qkin/modes.hpp"
#include "qkin/report.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

// The no-quantum-input layer: dispersion, Klein-Gordon inner product,
// Poisson/symplectic structure, Galilei phase-space action, classical mode
// evolution, the bandwidth-duration inequality, and the Jones-calculus
// polarization qubit with Born-rule evaluation. Nothing here takes an
// HbarScale; that absence is itself a tested property.

namespace qkin {

struct ZeroSignal : LinalgError {
    using LinalgError::LinalgError;
};
struct NotAPOVM : LinalgError {
    using LinalgError::LinalgError;
};

using Vec3 = std::array<double, 3>;
using Mat3 = Eigen::Matrix3d;

inline double norm3(const Vec3& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

// omega = c |k|; the null-cone residual omega^2/c^2 - |k|^2 is zero by
// construction.
inline double dispersion(const Vec3& wavevector, double c) {
    if (!(c > 0.0)) throw LinalgError("dispersion: c must be positive");
    return c * norm3(wavevector);
}

struct ClassicalModeState {
    ComplexVector amplitudes;  // one per ModeLabel, fixed ordering
};

inline Complex kg_inner(const ClassicalModeState& u, const ClassicalModeState& v) {
    if (u.amplitudes.size() != v.amplitudes.size())
        throw LengthMismatch("kg_inner: mode count mismatch");
    return u.amplitudes.dot(v.amplitudes);  // sum conj(u_k) v_k
}

// a_k(t) = exp(-i omega_k t) a_k(0); no hbar anywhere.
inline ClassicalModeState evolve_classical(const ClassicalModeState& u, const ModeSet& ms,
                                           double t) {
    if (u.amplitudes.size() != static_cast<long>(ms.mode_count()))
        throw LengthMismatch("evolve_classical: mode count mismatch");
    ClassicalModeState out = u;
    for (long k = 0; k < u.amplitudes.size(); ++k)
        out.amplitudes[k] *= std::polar(1.0, -ms.frequency(k) * t);
    return out;
}

// Classical energy functional sum_k omega_k |a_k|^2.
inline double classical_energy(const ClassicalModeState& u, const ModeSet& ms) {
    double e = 0.0;
    for (long k = 0; k < u.amplitudes.size(); ++k)
        e += ms.frequency(k) * std::norm(u.amplitudes[k]);
    return e;
}

// Classical helicity content sum_k sigma_k |a_k|^2 (mode-sum form).
inline double classical_helicity(const ClassicalModeState& u, const ModeSet& ms) {
    double s = 0.0;
    for (long k = 0; k < u.amplitudes.size(); ++k)
        s += double(ms.modes[k].helicity) * std::norm(u.amplitudes[k]);
    return s;
}

// ---------------------------------------------------------------------------
// Poisson bracket: with a_k = (q_k + i p_k)/sqrt(2), expand {a_k, conj(a_k')}
// over the real bracket {q_i, p_j} = delta_ij. The expansion is done with
// exact integer half-multiples, so the check is exact.
// ---------------------------------------------------------------------------

// {a_k, conj(a_l)} = -i delta_kl; {a_k, a_l} = 0. Returns exact values.
inline Complex poisson_bracket_aa(bool conjugate_second, int k, int l) {
    // a = (q + i p)/sqrt2, abar = (q - i p)/sqrt2
    // {alpha q + beta p, gamma q + delta p} = alpha*delta - beta*gamma (per mode)
    if (k != l) return {0.0, 0.0};
    const Complex i(0.0, 1.0);
    Complex alpha = 1.0 / std::sqrt(2.0), beta = i / std::sqrt(2.0);
    Complex gamma = 1.0 / std::sqrt(2.0);
    Complex delta = conjugate_second ? -i / std::sqrt(2.0) : i / std::sqrt(2.0);
    return alpha * delta - beta * gamma;
}

inline CheckReport poisson_bracket_check(Tolerance tol = {}) {
    double err = 0.0;
    const Complex minus_i(0.0, -1.0);
    for (int k = 0; k < 3; ++k) {
        for (int l = 0; l < 3; ++l) {
            Complex mixed = poisson_bracket_aa(true, k, l);
            Complex expected = (k == l) ? minus_i : Complex(0.0, 0.0);
            err = std::max(err, std::abs(mixed - expected));
            err = std::max(err, std::abs(poisson_bracket_aa(false, k, l)));
        }
    }
    return CheckReport::make("scaffold.poisson_bracket", err, tol.bound(),
                             "{a_k, conj(a_k')} = -i delta_kk'");
}

// ---------------------------------------------------------------------------
// Galilei phase-space action
// ---------------------------------------------------------------------------

struct PhasePoint {
    Vec3 q{};
    Vec3 p{};
    double mass = 1.0;
};

struct GalileiElement {
    Vec3 translation{};
    Vec3 boost{};
    Mat3 rotation = Mat3::Identity();
    double time_shift = 0.0;

    void validate() const {
        if ((rotation.transpose() * rotation - Mat3::Identity()).norm() > 1e-12 ||
            std::abs(rotation.determinant() - 1.0) > 1e-12)
            throw LinalgError("GalileiElement: rotation not in SO(3)");
    }
};

// (q, p) -> (R q + v (t - tau) + a, R p + m v) at instantaneous time t.
inline PhasePoint galilei_act(const PhasePoint& x, const GalileiElement& g, double t) {
    g.validate();
    Eigen::Vector3d q(x.q[0], x.q[1], x.q[2]);
    Eigen::Vector3d p(x.p[0], x.p[1], x.p[2]);
    Eigen::Vector3d v(g.boost[0], g.boost[1], g.boost[2]);
    Eigen::Vector3d a(g.translation[0], g.translation[1], g.translation[2]);
    Eigen::Vector3d q2 = g.rotation * q + v * (t - g.time_shift) + a;
    Eigen::Vector3d p2 = g.rotation * p + x.mass * v;
    return {{q2[0], q2[1], q2[2]}, {p2[0], p2[1], p2[2]}, x.mass};
}

// The map is affine with Jacobian diag(R, R); symplectic-form preservation
// J^T Omega J = Omega is checked explicitly.
inline double galilei_symplectic_residual(const GalileiElement& g) {
    Eigen::Matrix<double, 6, 6> jac = Eigen::Matrix<double, 6, 6>::Zero();
    jac.topLeftCorner<3, 3>() = g.rotation;
    jac.bottomRightCorner<3, 3>() = g.rotation;
    Eigen::Matrix<double, 6, 6> omega = Eigen::Matrix<double, 6, 6>::Zero();
    omega.topRightCorner<3, 3>() = Eigen::Matrix3d::Identity();
    omega.bottomLeftCorner<3, 3>() = -Eigen::Matrix3d::Identity();
    return (jac.transpose() * omega * jac - omega).norm();
}

// Composition law consistent with the instantaneous-time action:
// act(g2, act(g1, x, t), t) == act(compose(g2, g1), x, t).
inline GalileiElement galilei_compose(const GalileiElement& g2, const GalileiElement& g1) {
    GalileiElement out;
    out.rotation = g2.rotation * g1.rotation;
    Eigen::Vector3d v1(g1.boost[0], g1.boost[1], g1.boost[2]);
    Eigen::Vector3d v2(g2.boost[0], g2.boost[1], g2.boost[2]);
    Eigen::Vector3d a1(g1.translation[0], g1.translation[1], g1.translation[2]);
    Eigen::Vector3d a2(g2.translation[0], g2.translation[1], g2.translation[2]);
    Eigen::Vector3d v = g2.rotation * v1 + v2;
    Eigen::Vector3d a =
        g2.rotation * a1 + a2 - (g2.rotation * v1) * g1.time_shift - v2 * g2.time_shift;
    out.boost = {v[0], v[1], v[2]};
    out.translation = {a[0], a[1], a[2]};
    out.time_shift = 0.0;
    return out;
}

// ---------------------------------------------------------------------------
// Bandwidth-duration inequality
// ---------------------------------------------------------------------------

struct SampledEnvelope {
    std::vector<Complex> samples;
    double dt;
};

struct SpreadProduct {
    double dt_rms;
    double dw_rms;
    double product;
};

// RMS spreads about centroids in time and discrete-transform frequency.
// The continuum bound product >= 1/2 is loosened by 5/samples downstream
// to absorb discretization.
inline SpreadProduct bandwidth_duration(const SampledEnvelope& env) {
    const std::size_t n = env.samples.size();
    if (n < 64) throw LinalgError("bandwidth_duration: need >= 64 samples");
    double norm2 = 0.0;
    for (const auto& s : env.samples) norm2 += std::norm(s);
    if (!(norm2 > 0.0)) throw ZeroSignal("bandwidth_duration: zero signal");

    double t_mean = 0.0, t2_mean = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double t = j * env.dt;
        double w = std::norm(env.samples[j]) / norm2;
        t_mean += w * t;
        t2_mean += w * t * t;
    }
    double dt_rms = std::sqrt(std::max(0.0, t2_mean - t_mean * t_mean));

    // plain DFT; n is test-scale so O(n^2) is fine
    std::vector<Complex> spec(n, Complex(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j)
            spec[k] += env.samples[j] *
                       std::polar(1.0, -2.0 * std::numbers::pi * double(k) * double(j) / n);
    double snorm2 = 0.0;
    for (const auto& s : spec) snorm2 += std::norm(s);
    const double dw = 2.0 * std::numbers::pi / (n * env.dt);
    double w_mean = 0.0, w2_mean = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        long m = (k <= n / 2) ? long(k) : long(k) - long(n);
        double w = m * dw;
        double weight = std::norm(spec[k]) / snorm2;
        w_mean += weight * w;
        w2_mean += weight * w * w;
    }
    double dw_rms = std::sqrt(std::max(0.0, w2_mean - w_mean * w_mean));
    return {dt_rms, dw_rms, dt_rms * dw_rms};
}

// ---------------------------------------------------------------------------
// Jones calculus and the Born rule
// ---------------------------------------------------------------------------

struct JonesVector {
    Eigen::Vector2cd components;  // (H, V) basis

    static JonesVector horizontal() { return {{1.0, 0.0}}; }
    static JonesVector vertical() { return {{0.0, 1.0}}; }
    static JonesVector right_circular() {
        return {Eigen::Vector2cd(1.0, Complex(0.0, -1.0)) / std::sqrt(2.0)};
    }
    static JonesVector left_circular() {
        return {Eigen::Vector2cd(1.0, Complex(0.0, 1.0)) / std::sqrt(2.0)};
    }
};

// p_i = <state| E_i |state>, after validating positivity and completeness.
inline std::vector<double> born_probability(const JonesVector& state,
                                            const std::vector<Eigen::Matrix2cd>& effects,
                                            double tol = 1e-10) {
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Zero();
    for (const auto& e : effects) {
        if ((e - e.adjoint()).norm() > tol)
            throw NotAPOVM("born_probability: effect not Hermitian");
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(e);
        if (es.eigenvalues().minCoeff() < -tol)
            throw NotAPOVM("born_probability: effect not positive semidefinite");
        sum += e;
    }
    if ((sum - Eigen::Matrix2cd::Identity()).norm() > tol)
        throw NotAPOVM("born_probability: effects do not sum to identity");
    std::vector<double> probs;
    probs.reserve(effects.size());
    for (const auto& e : effects)
        probs.push_back(std::real(state.components.dot(e * state.components)));
    return probs;
}

}  // namespace qkin

#endif
