// fields.hpp — mean force, friction tensor and random-force correlation at a nuclear point

#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "floquet_ef/integrands.hpp"
#include "floquet_ef/quadrature.hpp"

namespace floquet_ef {

struct EFSample {
    Vec2 force{Vec2::Zero()};
    Mat2 gamma{Mat2::Zero()};
    Mat2 diffusion{Mat2::Zero()};
    double local_current{0.0};
};

struct FrictionParts {
    Mat2 symmetric;
    double antisym_scalar;  // (γ_xy − γ_yx)/2
};

inline FrictionParts decompose_friction(const Mat2& gamma) {
    return {0.5 * (gamma + gamma.transpose()), 0.5 * (gamma(0, 1) - gamma(1, 0))};
}

inline constexpr double kResidueTol = 1e-9;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kCancellationFloor = 1e-12;

/// Raw trace integrals plus their error estimates.
struct TraceIntegrals {
    detail::Traces value;
    detail::Traces error;
    detail::Traces mass;
    double norm{1.0};  // 1 / (2N + 1)
};

inline TraceIntegrals integrate_traces(NuclearPoint r, const ModelParams& p, const QuadratureSpec& q,
                                       detail::TraceSelection sel) {
    detail::TraceIntegrand integrand(r, p, sel);
    auto res = integrate_real_line<detail::Traces>(integrand, integration_half_width(r, p, q), q.de);
    return {res.value, res.error, res.mass, 1.0 / p.replicas()};
}

namespace detail {

inline void require_converged(const TraceIntegrals& ti, std::initializer_list<int> group, double tol,
                              const char* what, NuclearPoint r) {
    double scale = 0.0, err = 0.0, mass = 0.0;
    for (int c : group) {
        scale = std::max(scale, std::abs(ti.value(c)));
        err = std::max(err, std::abs(ti.error(c)));
        mass = std::max(mass, std::abs(ti.mass(c)));
    }
    // A group that cancels to roundoff has no meaningful relative error; judge it against ∫|f|.
    if (err > tol * scale && err > kCancellationFloor * mass && err > 1e-14) {
        throw QuadratureNotConverged(std::string(what) + " quadrature not converged at R = " + format_point(r) +
                                         ": error estimate " + detail::sci(err) + " vs scale " + detail::sci(scale),
                                     err, scale);
    }
}

/// Imaginary residue of quantities that must be real, relative to the group scale.
inline void require_real(const Eigen::ArrayXcd& v, const char* what, NuclearPoint r) {
    const double scale = v.abs().maxCoeff();
    const double residue = v.imag().abs().maxCoeff();
    if (residue > kResidueTol * scale && residue > 1e-14) {
        throw ResidueCheckFailed(std::string(what) + " imaginary residue " + detail::sci(residue) +
                                 " at R = " + format_point(r));
    }
}

inline Vec2 force_from(const TraceIntegrals& ti, NuclearPoint r, const ModelParams& p) {
    // F_μ = −1/(2πi(2N+1)) ∫ Tr{∂_μh G_<} − ∂_μU
    Eigen::ArrayXcd raw(2);
    raw << ti.value(kForceX), ti.value(kForceY);
    const Eigen::ArrayXcd electronic = raw * (-ti.norm / (2.0 * PI * I_UNIT));
    require_real(electronic, "mean force", r);
    return Vec2(electronic(0).real(), electronic(1).real()) - bare_potential(r, p).gradient;
}

inline Mat2 friction_from(const TraceIntegrals& ti) {
    // γ_μν = 1/(2π(2N+1)) ∫ Tr{∂_μh ∂_εG_r ∂_νh G_<} + H.c., with ∂_εG_r = −G_r².
    const double pref = -ti.norm / (2.0 * PI);
    Mat2 g;
    g(0, 0) = 2.0 * pref * ti.value(kFrictionXX).real();
    g(0, 1) = 2.0 * pref * ti.value(kFrictionXY).real();
    g(1, 0) = 2.0 * pref * ti.value(kFrictionYX).real();
    g(1, 1) = 2.0 * pref * ti.value(kFrictionYY).real();
    return g;
}

inline Mat2 diffusion_from(const TraceIntegrals& ti, NuclearPoint r) {
    // ½(D_μν + D_νμ) = 1/(4π(2N+1)) ∫ Tr{∂_μh G_> ∂_νh G_<}
    Eigen::ArrayXcd raw(3);
    raw << ti.value(kDiffusionXX), ti.value(kDiffusionXY), ti.value(kDiffusionYY);
    raw *= ti.norm / (4.0 * PI);
    require_real(raw, "diffusion tensor", r);
    Mat2 dm;
    dm << raw(0).real(), raw(1).real(), raw(1).real(), raw(2).real();

    Eigen::SelfAdjointEigenSolver<Mat2> es;
    es.computeDirect(dm);
    Vec2 ev = es.eigenvalues();
    if (ev.minCoeff() < -kPsdTol) {
        throw NotPositiveSemidefinite("diffusion tensor eigenvalue " + detail::sci(ev.minCoeff()) +
                                          " at R = " + format_point(r),
                                      ev.minCoeff());
    }
    if (ev.minCoeff() < 0.0) {
        ev = ev.cwiseMax(0.0);
        dm = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
    }
    return dm;
}

}  // namespace detail

inline Mat2 friction_tensor(NuclearPoint r, const ModelParams& p, const QuadratureSpec& q) {
    const auto ti = integrate_traces(r, p, q, detail::TraceSelection::only_friction());
    detail::require_converged(ti, {detail::kFrictionXX, detail::kFrictionXY, detail::kFrictionYX, detail::kFrictionYY},
                              q.tail_tol, "friction", r);
    return detail::friction_from(ti);
}

inline Vec2 mean_force(NuclearPoint r, const ModelParams& p, const QuadratureSpec& q) {
    const auto ti = integrate_traces(r, p, q, detail::TraceSelection::only_force());
    detail::require_converged(ti, {detail::kForceX, detail::kForceY}, q.tail_tol, "mean force", r);
    return detail::force_from(ti, r, p);
}

inline Mat2 diffusion_tensor(NuclearPoint r, const ModelParams& p, const QuadratureSpec& q) {
    const auto ti = integrate_traces(r, p, q, detail::TraceSelection::only_diffusion());
    detail::require_converged(ti, {detail::kDiffusionXX, detail::kDiffusionXY, detail::kDiffusionYY}, q.tail_tol,
                              "diffusion", r);
    return detail::diffusion_from(ti, r);
}

/// Single-pass evaluation of all fields and the symmetric-form local current.
inline EFSample evaluate_sample(NuclearPoint r, const ModelParams& p, const QuadratureSpec& q) {
    const auto ti = integrate_traces(r, p, q, detail::TraceSelection{});
    using namespace detail;
    require_converged(ti, {kForceX, kForceY}, q.tail_tol, "mean force", r);
    require_converged(ti, {kFrictionXX, kFrictionXY, kFrictionYX, kFrictionYY}, q.tail_tol, "friction", r);
    require_converged(ti, {kDiffusionXX, kDiffusionXY, kDiffusionYY}, q.tail_tol, "diffusion", r);
    require_converged(ti, {kCurrentSymmetric, kCurrentGeneral}, q.tail_tol, "current", r);
    EFSample s;
    s.force = force_from(ti, r, p);
    s.gamma = friction_from(ti);
    s.diffusion = diffusion_from(ti, r);
    s.local_current = ti.norm / (2.0 * PI) * ti.value(kCurrentSymmetric).real();
    return s;
}

}  // namespace floquet_ef
