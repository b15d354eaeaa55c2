// model.hpp — driven two-level junction: Hamiltonian, Fourier blocks, couplings, bare potential
//
// Reduced units throughout: hbar = k_B = e = 1, oscillator frequency 1.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "floquet_ef/types.hpp"

namespace floquet_ef {

struct ModelParams {
    double kT{0.5};
    double delta{3.0};
    double amp{0.0};
    double omega{1.0};
    double gamma_tilde{1.0};
    double mu_left{0.0};
    double mu_right{0.0};
    double lambda_x{3.0};
    double lambda_y{2.0};
    double mass{1.0};
    int n_floquet{5};
    int d{2};

    int floquet_dim() const { return d * (2 * n_floquet + 1); }
    int replicas() const { return 2 * n_floquet + 1; }
    double mu(Lead lead) const { return lead == Lead::Left ? mu_left : mu_right; }
};

/// Throws ConfigError naming the first violated invariant.
inline void validate(const ModelParams& p) {
    auto require = [](bool ok, const char* msg) {
        if (!ok) throw ConfigError(msg);
    };
    require(std::isfinite(p.kT) && p.kT > 0.0, "model.kT must be > 0");
    require(std::isfinite(p.gamma_tilde) && p.gamma_tilde > 0.0, "model.gamma_tilde must be > 0");
    require(std::isfinite(p.mass) && p.mass > 0.0, "model.mass must be > 0");
    require(p.n_floquet >= 0, "model.n_floquet must be >= 0");
    require(p.d == 1 || p.d == 2, "model.d must be 1 or 2");
    require(std::isfinite(p.amp) && std::isfinite(p.omega) && std::isfinite(p.delta),
            "model parameters must be finite");
    require(std::isfinite(p.mu_left) && std::isfinite(p.mu_right), "chemical potentials must be finite");
    require(std::isfinite(p.lambda_x) && std::isfinite(p.lambda_y), "potential shifts must be finite");
    require(p.amp == 0.0 || p.omega > 0.0, "model.omega must be > 0 when model.amp != 0");
    require(p.omega >= 0.0, "model.omega must be >= 0");
}

/// Figure-caption defaults: kT = 0.5, Δ = 3, Γ̃ = 1, λ = (3, 2), N = 5, μ_L = −μ_R.
inline ModelParams junction_preset(double amp = 0.0, double omega = 1.0, double mu_left = 0.0) {
    ModelParams p;
    p.amp = amp;
    p.omega = omega;
    p.mu_left = mu_left;
    p.mu_right = -mu_left;
    return p;
}

/// Single level h = x + Δ coupled symmetrically to both leads; used as an analytic oracle.
inline ModelParams single_level_preset() {
    ModelParams p;
    p.d = 1;
    p.n_floquet = 0;
    p.amp = 0.0;
    return p;
}

inline Eigen::MatrixXd system_hamiltonian(NuclearPoint r, double t, const ModelParams& p) {
    if (p.d == 1) {
        Eigen::MatrixXd h(1, 1);
        h(0, 0) = r.x + p.delta;
        return h;
    }
    const double coupling = r.y + p.amp * std::cos(p.omega * t);
    Eigen::MatrixXd h(2, 2);
    h << r.x + p.delta, coupling, coupling, -r.x - p.delta;
    return h;
}

/// Harmonics h^(n) of the periodic Hamiltonian; n outside [-max_n, max_n] vanish.
struct FourierBlocks {
    int max_n{0};
    std::vector<Eigen::MatrixXd> blocks;  // blocks[n + max_n]

    Eigen::MatrixXd at(int n) const {
        if (n < -max_n || n > max_n) {
            const auto dim = blocks.front().rows();
            return Eigen::MatrixXd::Zero(dim, dim);
        }
        return blocks[static_cast<std::size_t>(n + max_n)];
    }
};

inline FourierBlocks fourier_blocks(NuclearPoint r, const ModelParams& p) {
    FourierBlocks fb;
    if (p.d == 1) {
        fb.max_n = 0;
        fb.blocks.push_back(Eigen::MatrixXd::Constant(1, 1, r.x + p.delta));
        return fb;
    }
    fb.max_n = 1;
    Eigen::MatrixXd h0(2, 2);
    h0 << r.x + p.delta, r.y, r.y, -r.x - p.delta;
    Eigen::MatrixXd h1(2, 2);
    h1 << 0.0, 0.5 * p.amp, 0.5 * p.amp, 0.0;
    fb.blocks = {h1, h0, h1};
    return fb;
}

/// Nuclear gradients (∂_x h, ∂_y h); constant because h is linear in R.
struct Gradients {
    Eigen::MatrixXd dx;
    Eigen::MatrixXd dy;

    const Eigen::MatrixXd& operator[](int mu) const { return mu == 0 ? dx : dy; }
};

inline Gradients nuclear_gradients(const ModelParams& p) {
    Gradients g;
    if (p.d == 1) {
        g.dx = Eigen::MatrixXd::Ones(1, 1);
        g.dy = Eigen::MatrixXd::Zero(1, 1);
        return g;
    }
    g.dx.resize(2, 2);
    g.dx << 1.0, 0.0, 0.0, -1.0;
    g.dy.resize(2, 2);
    g.dy << 0.0, 1.0, 1.0, 0.0;
    return g;
}

struct BarePotential {
    double energy{0.0};
    Vec2 gradient{Vec2::Zero()};
};

inline BarePotential bare_potential(NuclearPoint r, const ModelParams& p) {
    BarePotential u;
    u.energy = 0.5 * r.x * r.x + p.lambda_x * r.x + 0.5 * r.y * r.y + p.lambda_y * r.y;
    u.gradient = Vec2(r.x + p.lambda_x, r.y + p.lambda_y);
    return u;
}

struct Hybridization {
    Eigen::MatrixXd left;
    Eigen::MatrixXd right;

    const Eigen::MatrixXd& operator[](Lead lead) const { return lead == Lead::Left ? left : right; }
};

/// Wide-band couplings. d = 2: orbital 1 to the left lead, orbital 2 to the right lead.
inline Hybridization hybridization_matrices(const ModelParams& p) {
    Hybridization h;
    if (p.d == 1) {
        h.left = Eigen::MatrixXd::Constant(1, 1, 0.5 * p.gamma_tilde);
        h.right = h.left;
        return h;
    }
    h.left = Eigen::MatrixXd::Zero(2, 2);
    h.right = Eigen::MatrixXd::Zero(2, 2);
    h.left(0, 0) = p.gamma_tilde;
    h.right(1, 1) = p.gamma_tilde;
    return h;
}

}  // namespace floquet_ef
