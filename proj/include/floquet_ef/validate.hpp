// validate.hpp — invariant suite behind the `validate` subcommand

#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "floquet_ef/config.hpp"
#include "floquet_ef/dynamics.hpp"
#include "floquet_ef/transport.hpp"

namespace floquet_ef {

struct CheckResult {
    std::string name;
    bool passed{false};
    std::string detail;
};

namespace detail {

inline std::vector<NuclearPoint> probe_points(const GridSpec& g, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(g.x_min, g.x_max), uy(g.y_min, g.y_max);
    std::vector<NuclearPoint> pts{{0.5 * (g.x_min + g.x_max), 0.5 * (g.y_min + g.y_max)}};
    while (static_cast<int>(pts.size()) < count) pts.push_back({ux(rng), uy(rng)});
    return pts;
}

inline double rel_diff(const Mat2& a, const Mat2& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline ModelParams equilibrium_of(ModelParams p) {
    p.amp = 0.0;
    p.mu_left = 0.0;
    p.mu_right = 0.0;
    return p;
}

}  // namespace detail

/// Runs every check against the configured physics; a check that throws is a failure.
inline std::vector<CheckResult> run_validation(const RunConfig& cfg) {
    const ModelParams& p = cfg.model;
    const QuadratureSpec& q = cfg.quad;
    const auto pts = detail::probe_points(cfg.grid, 4, cfg.dynamics.master_seed);
    std::vector<CheckResult> out;

    auto check = [&](const std::string& name, const std::function<std::string(bool&)>& body) {
        CheckResult r{name, false, {}};
        try {
            r.detail = body(r.passed);
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(r));
    };

    check("quadrature_convergence", [&](bool& ok) {
        // Halving de must not move any field by more than the convergence tolerance.
        QuadratureSpec fine = q;
        fine.de = 0.5 * q.de;
        double worst = 0.0;
        for (const auto& r : pts) {
            const EFSample a = evaluate_sample(r, p, q);
            const EFSample b = evaluate_sample(r, p, fine);
            const double scale = std::max({b.force.norm(), b.gamma.norm(), b.diffusion.norm(), 1e-12});
            const double d = std::max({(a.force - b.force).norm(), (a.gamma - b.gamma).norm(),
                                       (a.diffusion - b.diffusion).norm()}) /
                             scale;
            worst = std::max(worst, d);
        }
        ok = worst <= 10.0 * q.tail_tol;
        return "max relative change under de/2: " + detail::sci(worst);
    });

    check("green_identities", [&](bool& ok) {
        std::mt19937_64 rng(cfg.dynamics.master_seed + 17);
        std::uniform_real_distribution<double> ue(-6.0, 6.0);
        double adj = 0.0, wbl = 0.0, dg = 0.0;
        for (const auto& r : pts) {
            for (int k = 0; k < 5; ++k) {
                const double e = ue(rng);
                const GreenSet g = greens_at(e, r, p);
                adj = std::max(adj, (g.g_a - g.g_r.adjoint()).cwiseAbs().maxCoeff());
                const FloquetMatrix lhs = g.g_r - g.g_a;
                wbl = std::max(wbl, (lhs - (g.g_greater - g.g_lesser)).cwiseAbs().maxCoeff() /
                                        std::max(lhs.cwiseAbs().maxCoeff(), 1e-300));
                const double h = 1e-5;
                const FloquetMatrix fd = (greens_at(e + h, r, p).g_r - greens_at(e - h, r, p).g_r) / (2.0 * h);
                const FloquetMatrix an = denergy_retarded(g.g_r);
                dg = std::max(dg, (fd - an).cwiseAbs().maxCoeff() / std::max(an.cwiseAbs().maxCoeff(), 1e-300));
            }
        }
        ok = adj <= 1e-12 && wbl <= 1e-10 && dg <= 1e-6;
        return "adjoint " + detail::sci(adj) + ", wide-band " + detail::sci(wbl) + ", dG/de " + detail::sci(dg);
    });

    check("floquet_reduction", [&](bool& ok) {
        ModelParams undriven = p;
        undriven.amp = 0.0;
        ModelParams stat = undriven;
        stat.n_floquet = 0;
        double worst = 0.0;
        for (const auto& r : pts) {
            const EFSample a = evaluate_sample(r, undriven, q);
            const EFSample b = evaluate_sample(r, stat, q);
            worst = std::max({worst, detail::rel_diff(a.gamma, b.gamma), detail::rel_diff(a.diffusion, b.diffusion),
                              (a.force - b.force).norm() / std::max(b.force.norm(), 1e-300)});
        }
        ok = worst <= 1e-8;
        return "undriven N vs static max relative difference " + detail::sci(worst);
    });

    check("equilibrium_fluctuation_dissipation", [&](bool& ok) {
        const ModelParams eq = detail::equilibrium_of(p);
        double worst = 0.0, anti = 0.0;
        for (const auto& r : pts) {
            const EFSample s = evaluate_sample(r, eq, q);
            worst = std::max(worst, detail::rel_diff(s.diffusion, eq.kT * s.gamma));
            anti = std::max(anti, std::abs(s.gamma(0, 1) - s.gamma(1, 0)) / std::max(s.gamma.cwiseAbs().maxCoeff(), 1e-300));
        }
        ok = worst <= 1e-4 && anti <= 1e-8;
        return "D vs kT*gamma " + detail::sci(worst) + ", antisymmetry " + detail::sci(anti);
    });

    check("diffusion_psd", [&](bool& ok) {
        double min_eig = 1e300;
        for (const auto& r : pts) {
            const Mat2 d = evaluate_sample(r, p, q).diffusion;
            min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Mat2>(d).eigenvalues().minCoeff());
        }
        ok = min_eig >= 0.0;
        return "minimum diffusion eigenvalue " + detail::sci(min_eig);
    });

    check("current_cross_check", [&](bool& ok) {
        // The two forms only differ in how they use the bias, so compare at a nonzero one.
        ModelParams undriven = p;
        undriven.amp = 0.0;
        if (undriven.mu_left == undriven.mu_right) {
            undriven.mu_left = 1.0;
            undriven.mu_right = -1.0;
        }
        ModelParams zero_bias = p;
        zero_bias.mu_left = zero_bias.mu_right = 0.0;
        double worst = 0.0, zero = 0.0;
        for (const auto& r : pts) {
            const CurrentSample c = local_current(r, undriven, q);
            worst = std::max(worst, std::abs(c.i_general - c.i_symmetric) /
                                        std::max(std::abs(c.i_symmetric), 1e-300));
            zero = std::max(zero, std::abs(local_current(r, zero_bias, q).i_symmetric));
        }
        ok = worst <= 1e-6 && zero <= 1e-12;
        return "general vs symmetric " + detail::sci(worst) + ", zero-bias current " + detail::sci(zero);
    });

    check("random_force_covariance", [&](bool& ok) {
        Mat2 d;
        d << 0.7, 0.25, 0.25, 0.2;
        const double dt = cfg.dynamics.dt;
        RngStream rng(cfg.dynamics.master_seed, 0xfeedULL);
        const int n = 200000;
        Mat2 acc = Mat2::Zero();
        for (int i = 0; i < n; ++i) {
            const Vec2 f = random_force(d, dt, rng);
            acc += f * f.transpose();
        }
        const Mat2 expect = 2.0 * d / dt;
        const double worst = ((acc / n - expect).array() / expect.array()).abs().maxCoeff();
        ok = worst <= 0.02;
        return "max relative covariance error " + detail::sci(worst);
    });

    check("lorentz_energy_conservation", [&](bool& ok) {
        ConstantFields fields;
        fields.sample.gamma << 0.0, 0.4, -0.4, 0.0;
        ModelParams unit = p;
        TrajectoryState s;
        s.p_momentum << 0.8, -0.3;
        RngStream rng(1, 1);
        LangevinIntegrator<ConstantFields> integ(fields, unit, cfg.dynamics.dt, false);
        integ.reset(s);
        double worst = 0.0;
        for (int k = 0; k < 1000; ++k) {
            const double before = integ.state().kinetic(unit.mass);
            integ.advance(rng);
            worst = std::max(worst, std::abs(integ.state().kinetic(unit.mass) - before) / before);
        }
        ok = worst <= 1e-10;
        return "max per-step relative kinetic change " + detail::sci(worst);
    });

    return out;
}

}  // namespace floquet_ef
