#include <gtest/gtest.h>

#include "floquet_ef/transport.hpp"

using namespace floquet_ef;

namespace {

// Static two-level Landauer current with T(ε) = Γ̃² |G_12|², by brute-force Riemann sum.
double landauer_oracle(NuclearPoint r, const ModelParams& p) {
    double s = 0.0;
    const double de = 1e-3;
    for (double e = -60.0; e <= 60.0; e += de) {
        const double a = r.x + p.delta;
        const cplx z(e, 0.5 * p.gamma_tilde);
        const cplx det = z * z - a * a - r.y * r.y;
        const double t = p.gamma_tilde * p.gamma_tilde * std::norm(r.y / det);
        s += t * (fermi(e - p.mu_left, p.kT) - fermi(e - p.mu_right, p.kT));
    }
    return s * de / (2.0 * PI);
}

}  // namespace

TEST(Transport, StaticCurrentMatchesLandauer) {
    ModelParams p = junction_preset(0.0, 1.0, 1.5);
    p.n_floquet = 0;
    const NuclearPoint r{-2.6, -1.8};
    const CurrentSample c = local_current(r, p, default_quadrature(p));
    EXPECT_NEAR(c.i_symmetric, landauer_oracle(r, p), 1e-6);
}

TEST(Transport, UndrivenFormsAgree) {
    ModelParams p = junction_preset(0.0, 1.0, 2.0);
    p.n_floquet = 2;
    for (NuclearPoint r : {NuclearPoint{-3.0, -2.0}, NuclearPoint{-1.5, -0.5}, NuclearPoint{-4.2, -2.9}}) {
        const CurrentSample c = local_current(r, p, default_quadrature(p));
        EXPECT_LE(std::abs(c.i_general - c.i_symmetric), 1e-6 * std::abs(c.i_symmetric));
        EXPECT_GT(c.i_symmetric, 0.0);
    }
}

TEST(Transport, ZeroBiasCurrentVanishes) {
    ModelParams p = junction_preset(0.0, 1.0, 0.0);
    p.n_floquet = 0;
    const CurrentSample c = local_current({-2.8, -2.2}, p, default_quadrature(p));
    EXPECT_LE(std::abs(c.i_symmetric), 1e-12);
    EXPECT_LE(std::abs(c.i_general), 1e-12);
}

TEST(Transport, CurrentIsOddInBias) {
    ModelParams fwd = junction_preset(1.0, 1.0, 1.2), rev = junction_preset(1.0, 1.0, -1.2);
    fwd.n_floquet = rev.n_floquet = 3;
    const NuclearPoint r{-3.1, -2.2};
    const double a = local_current(r, fwd, default_quadrature(fwd)).i_symmetric;
    const double b = local_current(r, rev, default_quadrature(rev)).i_symmetric;
    EXPECT_NEAR(a, -b, 1e-9 * std::abs(a));
}

TEST(Transport, TransmissionTraceIsBoundedByChannelCount) {
    ModelParams p = junction_preset(2.0, 1.0, 1.0);
    p.n_floquet = 3;
    for (double e : {-4.0, -0.5, 0.0, 1.0, 3.3}) {
        const cplx tr = transmission(e, {-3.0, -2.0}, p).trace();
        EXPECT_GE(tr.real(), 0.0);
        EXPECT_LE(tr.real(), p.replicas() + 1e-12);
    }
}
