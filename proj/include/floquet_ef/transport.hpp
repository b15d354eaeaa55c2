// transport.hpp — Floquet–Landauer local current (e = hbar = 1)
//
// Positive current flows from the left lead to the right lead.

#pragma once

#include "floquet_ef/fields.hpp"

namespace floquet_ef {

struct CurrentSample {
    double i_general{0.0};
    double i_symmetric{0.0};
    NuclearPoint at{};
};

/// T^F(ε) = Γ_L^F G_r^F Γ_R^F G_a^F.
inline FloquetMatrix transmission(double energy, NuclearPoint r, const ModelParams& p) {
    const GreenSet g = greens_at(energy, r, p);
    const FloquetHybridization hyb = build_floquet_hybridization(p);
    FloquetMatrix t = hyb.left * g.g_r * hyb.right * g.g_a;
    const cplx tr = t.trace();
    const double scale = std::max(std::abs(tr), 1e-300);
    if (std::abs(tr.imag()) > 1e-10 * scale + 1e-300 || tr.real() < -1e-12) {
        throw ResidueCheckFailed("transmission trace not real and non-negative: (" + detail::sci(tr.real()) + ", " +
                                 detail::sci(tr.imag()) + ")");
    }
    return t;
}

/// Symmetric form (1/(2π(2N+1))) ∫ Tr{T^F (f_L − f_R)} and the two-transmission form
/// (1/(2π(2N+1))) ∫ Tr{T_RL f_L − T_LR f_R}, both through the shared quadrature engine.
inline CurrentSample local_current(NuclearPoint r, const ModelParams& p, const QuadratureSpec& q) {
    const auto ti = integrate_traces(r, p, q, detail::TraceSelection::only_current());
    detail::require_converged(ti, {detail::kCurrentSymmetric, detail::kCurrentGeneral}, q.tail_tol, "current", r);
    const double pref = ti.norm / (2.0 * PI);
    return {pref * ti.value(detail::kCurrentGeneral).real(), pref * ti.value(detail::kCurrentSymmetric).real(), r};
}

}  // namespace floquet_ef
