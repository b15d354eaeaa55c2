#include <gtest/gtest.h>

#include <random>

#include "floquet_ef/floquet.hpp"

using namespace floquet_ef;

namespace {

double max_abs(const FloquetMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Floquet, LayoutRoundTrip) {
    const FloquetLayout lay(junction_preset());
    for (int idx = 0; idx < lay.dim(); ++idx) EXPECT_EQ(lay.index(lay.replica_of(idx), lay.orbital_of(idx)), idx);
    EXPECT_EQ(lay.index(-5, 0), 0);
    EXPECT_EQ(lay.index(5, 1), 21);
}

TEST(Floquet, FermiIsStableAndSymmetric) {
    EXPECT_DOUBLE_EQ(fermi(0.0, 0.5), 0.5);
    EXPECT_NEAR(fermi(1.0, 0.5) + fermi(-1.0, 0.5), 1.0, 1e-15);
    EXPECT_EQ(fermi(1e4, 0.5), 0.0);
    EXPECT_EQ(fermi(-1e4, 0.5), 1.0);
}

TEST(Floquet, HamiltonianIsHermitianWithReplicaShifts) {
    const ModelParams p = junction_preset(1.5, 0.7);
    const FloquetMatrix hf = build_floquet_hamiltonian({-2.0, -1.0}, p);
    EXPECT_LE(max_abs(hf - hf.adjoint()), 0.0);
    const FloquetLayout lay(p);
    EXPECT_DOUBLE_EQ(hf(lay.index(2, 0), lay.index(2, 0)).real(), 1.0 + 2 * 0.7);
    EXPECT_DOUBLE_EQ(hf(lay.index(2, 0), lay.index(1, 1)).real(), 0.75);
    EXPECT_DOUBLE_EQ(std::abs(hf(lay.index(2, 0), lay.index(0, 1))), 0.0);
}

TEST(Floquet, UndrivenHamiltonianIsBlockDiagonal) {
    const FloquetMatrix hf = build_floquet_hamiltonian({-2.0, -1.0}, junction_preset(0.0, 1.0));
    for (int i = 0; i < hf.rows(); ++i) {
        for (int j = 0; j < hf.cols(); ++j) {
            if (i / 2 != j / 2) {
                EXPECT_EQ(hf(i, j), cplx(0.0));
            }
        }
    }
}

TEST(Floquet, GreenIdentitiesAtRandomSamples) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-8, 2), uy(-7, 3), ue(-8, 8), ua(-3, 3), uw(0.5, 3), um(-4, 4);
    for (int k = 0; k < 100; ++k) {
        const ModelParams p = junction_preset(ua(rng), uw(rng), um(rng));
        ModelParams small = p;
        small.n_floquet = 2;
        const NuclearPoint r{ux(rng), uy(rng)};
        const double e = ue(rng);
        const GreenSet g = greens_at(e, r, small);
        EXPECT_EQ(max_abs(g.g_a - g.g_r.adjoint()), 0.0);
        const FloquetMatrix spectral = g.g_r - g.g_a;
        EXPECT_LE(max_abs(spectral - (g.g_greater - g.g_lesser)), 1e-10 * max_abs(spectral));
        const double h = 1e-5;
        const FloquetMatrix fd = (greens_at(e + h, r, small).g_r - greens_at(e - h, r, small).g_r) / (2 * h);
        const FloquetMatrix an = denergy_retarded(g.g_r);
        EXPECT_LE(max_abs(fd - an), 1e-6 * max_abs(an));
    }
}

TEST(Floquet, LesserIsAntiHermitianWithPositiveOccupation) {
    const ModelParams p = junction_preset(1.0, 1.0, 1.0);
    const GreenSet g = greens_at(0.3, {-3.0, -2.0}, p);
    EXPECT_LE(max_abs(g.g_lesser + g.g_lesser.adjoint()), 1e-14);
    const Eigen::VectorXd occ = (-I_UNIT * g.g_lesser).diagonal().real();
    EXPECT_GE(occ.minCoeff(), 0.0);
}

TEST(Floquet, SpectralResolventMatchesLinearSolve) {
    const ModelParams p = junction_preset(2.0, 1.3, 0.5);
    const NuclearPoint r{-2.2, -1.7};
    FloquetResolvent res(r, p);
    ASSERT_TRUE(res.spectral());
    FloquetMatrix g(p.floquet_dim(), p.floquet_dim()), g2(p.floquet_dim(), p.floquet_dim());
    for (double e : {-7.0, -1.1, 0.0, 0.4, 5.5}) {
        res.retarded(e, g, &g2);
        const GreenSet ref = greens_at(e, r, p);
        EXPECT_LE(max_abs(g - ref.g_r), 1e-12 * max_abs(ref.g_r));
        EXPECT_LE(max_abs(g2 - ref.g_r * ref.g_r), 1e-11 * max_abs(ref.g_r * ref.g_r));
    }
}

TEST(Floquet, SingleLevelRetardedIsLorentzian) {
    const ModelParams p = single_level_preset();
    const double x = -2.2, e = 0.9;
    const GreenSet g = greens_at(e, {x, 0.0}, p);
    const cplx expect = 1.0 / cplx(e - (x + p.delta), 0.5 * p.gamma_tilde);
    EXPECT_NEAR(std::abs(g.g_r(0, 0) - expect), 0.0, 1e-15);
}
