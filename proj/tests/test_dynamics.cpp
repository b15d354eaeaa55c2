#include <gtest/gtest.h>

#include "floquet_ef/dynamics.hpp"

using namespace floquet_ef;

namespace {

ConstantFields constant(const Mat2& gamma, const Mat2& diffusion, bool harmonic) {
    ConstantFields f;
    f.sample.gamma = gamma;
    f.sample.diffusion = diffusion;
    f.include_harmonic = harmonic;
    f.params = junction_preset();
    return f;
}

}  // namespace

TEST(Dynamics, InitialConditionsFollowBoltzmann) {
    const ModelParams p = junction_preset();
    RngStream rng(5, 0);
    const int n = 100000;
    double sx = 0, sy = 0, ke = 0;
    for (int i = 0; i < n; ++i) {
        const TrajectoryState s = sample_initial_conditions(p, rng);
        sx += s.r.x;
        sy += s.r.y;
        ke += s.kinetic(p.mass);
        EXPECT_EQ(s.t, 0.0);
    }
    const double se = std::sqrt(p.kT / n);
    EXPECT_NEAR(sx / n, -p.lambda_x, 3 * se);
    EXPECT_NEAR(sy / n, -p.lambda_y, 3 * se);
    EXPECT_NEAR(ke / n, p.kT, 0.01 * p.kT);
}

TEST(Dynamics, StreamsAreReproducibleAndDistinct) {
    RngStream a(9, 3), b(9, 3), c(9, 4), d(10, 3);
    const double va = a.gaussian();
    EXPECT_EQ(va, b.gaussian());
    EXPECT_NE(va, c.gaussian());
    EXPECT_NE(va, d.gaussian());
}

TEST(Dynamics, RandomForceCovariance) {
    Mat2 d;
    d << 0.9, -0.35, -0.35, 0.25;
    const double dt = 0.01;
    RngStream rng(1, 2);
    const int n = 1000000;
    Mat2 acc = Mat2::Zero();
    for (int i = 0; i < n; ++i) {
        const Vec2 f = random_force(d, dt, rng);
        acc += f * f.transpose();
    }
    const Mat2 expect = 2.0 * d / dt;
    const Mat2 got = acc / n;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) EXPECT_NEAR(got(i, j), expect(i, j), 0.01 * std::abs(expect(i, j)));
}

TEST(Dynamics, RandomForceDegenerateCases) {
    RngStream rng(1, 1);
    EXPECT_EQ(random_force(Mat2::Zero(), 0.01, rng), Vec2::Zero());
    Mat2 bad;
    bad << 1.0, 0.0, 0.0, -1e-3;
    EXPECT_THROW(random_force(bad, 0.01, rng), NotPositiveSemidefinite);
    Mat2 iso = 0.3 * Mat2::Identity();
    double sxx = 0, syy = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const Vec2 f = random_force(iso, 0.02, rng);
        sxx += f(0) * f(0);
        syy += f(1) * f(1);
    }
    EXPECT_NEAR(sxx / n, 30.0, 0.6);
    EXPECT_NEAR(syy / n, 30.0, 0.6);
}

TEST(Dynamics, LorentzFrictionConservesKineticEnergy) {
    Mat2 g;
    g << 0.0, 0.6, -0.6, 0.0;
    const ConstantFields fields = constant(g, Mat2::Zero(), false);
    const ModelParams p = junction_preset();
    LangevinIntegrator<ConstantFields> integ(fields, p, 0.01, false);
    TrajectoryState s;
    s.p_momentum << 1.1, -0.4;
    integ.reset(s);
    RngStream rng(1, 1);
    for (int k = 0; k < 10000; ++k) {
        const double before = integ.state().kinetic(p.mass);
        integ.advance(rng);
        EXPECT_LE(std::abs(integ.state().kinetic(p.mass) - before), 1e-10 * before);
    }
}

TEST(Dynamics, HarmonicMotionConservesEnergy) {
    const ConstantFields fields = constant(Mat2::Zero(), Mat2::Zero(), true);
    const ModelParams p = junction_preset();
    LangevinIntegrator<ConstantFields> integ(fields, p, 0.01, false);
    TrajectoryState s;
    s.r = {-2.0, -2.5};
    s.p_momentum << 0.3, 0.7;
    integ.reset(s);
    auto energy = [&](const TrajectoryState& st) { return st.kinetic(p.mass) + bare_potential(st.r, p).energy; };
    const double e0 = energy(s);
    RngStream rng(1, 1);
    const long steps = std::lround(100 * 2 * PI / 0.01);
    double worst = 0.0;
    for (long k = 0; k < steps; ++k) {
        integ.advance(rng);
        worst = std::max(worst, std::abs(energy(integ.state()) - e0));
    }
    EXPECT_LE(worst, 1e-4 * std::abs(e0 - bare_potential({-3.0, -2.0}, p).energy));
}

TEST(Dynamics, SymmetricFrictionDampsMonotonically) {
    Mat2 g;
    g << 0.3, 0.1, 0.1, 0.2;
    const ConstantFields fields = constant(g, Mat2::Zero(), false);
    const ModelParams p = junction_preset();
    LangevinIntegrator<ConstantFields> integ(fields, p, 0.01, false);
    TrajectoryState s;
    s.p_momentum << 1.0, 1.0;
    integ.reset(s);
    RngStream rng(1, 1);
    double prev = s.kinetic(p.mass);
    for (int k = 0; k < 2000; ++k) {
        integ.advance(rng);
        EXPECT_LT(integ.state().kinetic(p.mass), prev);
        prev = integ.state().kinetic(p.mass);
    }
}

TEST(Dynamics, OrnsteinUhlenbeckEquipartition) {
    Mat2 g;
    g << 0.5, 0.2, -0.1, 0.4;
    const Mat2 sym = 0.5 * (g + g.transpose());
    const ModelParams p = junction_preset();
    const ConstantFields fields = constant(g, p.kT * sym, true);
    DynamicsSpec spec;
    spec.n_traj = 64;
    spec.t_burn = 20;
    spec.t_total = 220;
    const EnsembleStats st = simulate_ensemble(p, fields, spec).stats;
    EXPECT_NEAR(st.kinetic_mean, p.kT, 4 * st.kinetic_stderr + 0.01);
}

TEST(Dynamics, EnsembleIsIndependentOfWorkerCount) {
    Mat2 g;
    g << 0.2, 0.3, -0.1, 0.4;
    const ModelParams p = junction_preset();
    const ConstantFields fields = constant(g, 0.4 * Mat2::Identity(), true);
    DynamicsSpec spec;
    spec.n_traj = 12;
    spec.t_burn = 1;
    spec.t_total = 5;
    const EnsembleStats a = simulate_ensemble(p, fields, spec, {1, 0, 100}).stats;
    const EnsembleStats b = simulate_ensemble(p, fields, spec, {4, 0, 100}).stats;
    EXPECT_EQ(a.kinetic_mean, b.kinetic_mean);
    EXPECT_EQ(a.kinetic_stderr, b.kinetic_stderr);
    EXPECT_EQ(a.coupling_sq, b.coupling_sq);
    EXPECT_EQ(a.current_mean, b.current_mean);
}

TEST(Dynamics, EscapeReportsTrajectoryAndPartialStats) {
    FieldGrid grid;
    grid.spec.x_min = -3.05;
    grid.spec.x_max = -2.95;
    grid.spec.y_min = -2.05;
    grid.spec.y_max = -1.95;
    grid.spec.nx = 2;
    grid.spec.ny = 2;
    grid.samples.assign(4, EFSample{});
    DynamicsSpec spec;
    spec.n_traj = 3;
    spec.t_burn = 0;
    spec.t_total = 1;
    try {
        simulate_ensemble(junction_preset(), GridFields{&grid}, spec);
        FAIL() << "expected an escape";
    } catch (const TrajectoryEscape& e) {
        EXPECT_EQ(e.trajectory, 0);
        EXPECT_FALSE(grid.spec.contains(e.point));
    }
}

TEST(Dynamics, DumpIsDecimated) {
    const ConstantFields fields = constant(Mat2::Zero(), Mat2::Zero(), true);
    DynamicsSpec spec;
    spec.n_traj = 2;
    spec.t_burn = 0;
    spec.t_total = 1;
    spec.stochastic = false;
    const EnsembleRun run = simulate_ensemble(junction_preset(), fields, spec, {1, 1, 10});
    EXPECT_EQ(run.dump.size(), 10u);
    EXPECT_EQ(run.dump.front().trajectory, 0);
    EXPECT_NEAR(run.dump.back().t, 1.0, 1e-12);
}

TEST(Dynamics, SpecValidation) {
    DynamicsSpec d;
    d.t_total = d.t_burn;
    EXPECT_THROW(validate(d), ConfigError);
    d = DynamicsSpec{};
    d.dt = 0;
    EXPECT_THROW(validate(d), ConfigError);
}
