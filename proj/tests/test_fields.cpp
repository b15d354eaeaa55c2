#include <gtest/gtest.h>

#include <random>

#include "floquet_ef/fields.hpp"

using namespace floquet_ef;

namespace {

// Single level ε0 = x + Δ, Γ = 1, kT = 0.5; values from 30-digit adaptive quadrature of
//   n = ∫ dε/2π Γ f̄(ε)/((ε − ε0)² + Γ²/4),   γ = −π ∫ ρ² ∂_ε f̄,   D = π ∫ ρ² f̄ (1 − f̄)
// with ρ the Lorentzian density of states and f̄ the lead-averaged occupation.
struct SingleLevelCase {
    double x, mu_left, n, gamma, diffusion;
};

const SingleLevelCase kSingleLevel[] = {
    {-2.5, 0.0, 0.34855601787806486589, 0.36610856908513100905, 0.18305428454256550453},
    {-4.0, 0.0, 0.77043710977381163843, 0.22257489821346024121, 0.11128744910673012060},
    {-3.3, 0.0, 0.59336118575074358929, 0.41086109648262400011, 0.20543054824131200006},
    {-2.5, 1.5, 0.43752143656225101244, 0.13524412820515022098, 0.24153992575424454207},
};

double rel(const Mat2& a, const Mat2& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST(Fields, SingleLevelForceFrictionDiffusionOracle) {
    for (const auto& c : kSingleLevel) {
        ModelParams p = single_level_preset();
        p.mu_left = c.mu_left;
        p.mu_right = -c.mu_left;
        const QuadratureSpec q = default_quadrature(p);
        const EFSample s = evaluate_sample({c.x, 0.0}, p, q);
        EXPECT_NEAR(s.force(0), -c.n - (c.x + p.lambda_x), 1e-6) << "x = " << c.x;
        EXPECT_NEAR(s.gamma(0, 0), c.gamma, 1e-6 * c.gamma);
        EXPECT_NEAR(s.diffusion(0, 0), c.diffusion, 1e-6 * c.diffusion);
        EXPECT_GT(s.gamma(0, 0), 0.0);
    }
}

TEST(Fields, SeparateEntryPointsAgreeWithFusedSample) {
    const ModelParams p = junction_preset(1.0, 1.0, 1.0);
    ModelParams small = p;
    small.n_floquet = 2;
    const QuadratureSpec q = default_quadrature(small);
    const NuclearPoint r{-2.7, -1.6};
    const EFSample s = evaluate_sample(r, small, q);
    EXPECT_LE((friction_tensor(r, small, q) - s.gamma).norm(), 1e-14);
    EXPECT_LE((mean_force(r, small, q) - s.force).norm(), 1e-14);
    EXPECT_LE((diffusion_tensor(r, small, q) - s.diffusion).norm(), 1e-14);
}

TEST(Fields, EquilibriumFluctuationDissipationAndSymmetry) {
    ModelParams p = junction_preset();
    p.n_floquet = 0;
    const QuadratureSpec q = default_quadrature(p);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-8, 2), uy(-7, 3);
    for (int k = 0; k < 10; ++k) {
        const NuclearPoint r{ux(rng), uy(rng)};
        const EFSample s = evaluate_sample(r, p, q);
        EXPECT_LE(rel(s.diffusion, p.kT * s.gamma), 1e-4);
        EXPECT_LE(std::abs(s.gamma(0, 1) - s.gamma(1, 0)), 1e-8 * s.gamma.cwiseAbs().maxCoeff());
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat2>(s.gamma).eigenvalues().minCoeff(), 0.0);
    }
}

TEST(Fields, EquilibriumForceIsMinusGradientOfFreeEnergy) {
    // Exact: F = −∂_R Ω with Ω the grand potential; check curl-freeness by a closed loop instead.
    ModelParams p = junction_preset();
    p.n_floquet = 0;
    const QuadratureSpec q = default_quadrature(p);
    const NuclearPoint r{-2.6, -1.4};
    const double h = 1e-4;
    const Vec2 fxp = mean_force({r.x + h, r.y}, p, q), fxm = mean_force({r.x - h, r.y}, p, q);
    const Vec2 fyp = mean_force({r.x, r.y + h}, p, q), fym = mean_force({r.x, r.y - h}, p, q);
    const double curl = (fxp(1) - fxm(1)) / (2 * h) - (fyp(0) - fym(0)) / (2 * h);
    EXPECT_NEAR(curl, 0.0, 1e-6);
}

TEST(Fields, UndrivenFloquetReducesToStatic) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-6, 0), uy(-5, 1);
    ModelParams stat = junction_preset(0.0, 1.0, 1.5);
    stat.n_floquet = 0;
    const QuadratureSpec q = default_quadrature(stat);
    for (auto [n, w] : {std::pair{1, 0.7}, std::pair{3, 2.5}}) {
        ModelParams fl = stat;
        fl.n_floquet = n;
        fl.omega = w;
        for (int k = 0; k < 3; ++k) {
            const NuclearPoint r{ux(rng), uy(rng)};
            const EFSample a = evaluate_sample(r, fl, q), b = evaluate_sample(r, stat, q);
            EXPECT_LE(rel(a.gamma, b.gamma), 1e-10);
            EXPECT_LE(rel(a.diffusion, b.diffusion), 1e-10);
            EXPECT_LE((a.force - b.force).norm() / b.force.norm(), 1e-10);
            EXPECT_NEAR(a.local_current, b.local_current, 1e-10 * std::abs(b.local_current));
        }
    }
}

TEST(Fields, DrivingProducesAntisymmetricFriction) {
    ModelParams p = junction_preset(1.0, 1.0, 1.0);
    p.n_floquet = 3;
    const Mat2 g = friction_tensor({-3.0, -2.0}, p, default_quadrature(p));
    EXPECT_GT(std::abs(decompose_friction(g).antisym_scalar), 1e-3);
    const FrictionParts parts = decompose_friction(g);
    Mat2 back = parts.symmetric;
    back(0, 1) += parts.antisym_scalar;
    back(1, 0) -= parts.antisym_scalar;
    EXPECT_LE((back - g).norm(), 1e-15);
}

TEST(Fields, DrivingSignIsImmaterial) {
    // A → −A is a half-period time shift, which leaves period-averaged fields unchanged.
    ModelParams plus = junction_preset(1.0, 1.0, 0.0), minus = junction_preset(-1.0, 1.0, 0.0);
    plus.n_floquet = minus.n_floquet = 3;
    const QuadratureSpec q = default_quadrature(plus);
    const NuclearPoint r{-2.5, -2.3};
    const EFSample a = evaluate_sample(r, plus, q), b = evaluate_sample(r, minus, q);
    EXPECT_LE(rel(a.gamma, b.gamma), 1e-10);
    EXPECT_LE(rel(a.diffusion, b.diffusion), 1e-10);
}

TEST(Fields, CoarseQuadratureIsDetected) {
    const ModelParams p = junction_preset(0.0, 1.0, 0.0);
    ModelParams stat = p;
    stat.n_floquet = 0;
    QuadratureSpec q = default_quadrature(stat);
    q.de = 1.0;
    EXPECT_THROW(evaluate_sample({-3.0, -2.0}, stat, q), QuadratureNotConverged);
}
