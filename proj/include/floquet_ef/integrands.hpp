// integrands.hpp — per-energy Green's-function traces used by the field and current integrals
//
// All traces run over orbitals and replicas. Gradients act block-diagonally (∂h ⊗ I_n), and
// Γ_ζ^F and the Floquet Fermi matrices are diagonal, so everything beyond the dense
// products G_r, G_r² and G_< costs O(dim²).

#pragma once

#include <vector>

#include "floquet_ef/floquet.hpp"

namespace floquet_ef::detail {

enum Component : int {
    kForceX = 0,
    kForceY,
    kFrictionXX,
    kFrictionXY,
    kFrictionYX,
    kFrictionYY,
    kDiffusionXX,
    kDiffusionXY,
    kDiffusionYY,
    kCurrentSymmetric,
    kCurrentGeneral,
    kComponentCount
};

using Traces = Eigen::Array<cplx, kComponentCount, 1>;

struct TraceSelection {
    bool force{true};
    bool friction{true};
    bool diffusion{true};
    bool current{true};

    static TraceSelection only_force() { return {true, false, false, false}; }
    static TraceSelection only_friction() { return {false, true, false, false}; }
    static TraceSelection only_diffusion() { return {false, false, true, false}; }
    static TraceSelection only_current() { return {false, false, false, true}; }
};

/// Evaluates the trace integrands at one nuclear point for arbitrary energies.
class TraceIntegrand {
public:
    TraceIntegrand(NuclearPoint r, const ModelParams& p, TraceSelection sel)
        : params_(p), layout_(p), sel_(sel), resolvent_(r, p), grad_(nuclear_gradients(p)) {
        const auto dim = layout_.dim();
        const Hybridization hyb = hybridization_matrices(p);
        gamma_left_.resize(dim);
        gamma_right_.resize(dim);
        edge_left_.resize(dim);
        edge_right_.resize(dim);
        for (int idx = 0; idx < dim; ++idx) {
            const int n = layout_.replica_of(idx);
            const int i = layout_.orbital_of(idx);
            gamma_left_(idx) = hyb.left(i, i);
            gamma_right_(idx) = hyb.right(i, i);
            edge_left_(idx) = n * p.omega + p.mu_left;
            edge_right_(idx) = n * p.omega + p.mu_right;
        }
        g_.resize(dim, dim);
        g2_.resize(dim, dim);
        lesser_.resize(dim, dim);
        greater_.resize(dim, dim);
        scaled_.resize(dim, dim);
        grad_lesser_[0].resize(dim, dim);
        grad_lesser_[1].resize(dim, dim);
        grad_other_[0].resize(dim, dim);
        grad_other_[1].resize(dim, dim);
    }

    const FloquetResolvent& resolvent() const { return resolvent_; }

    Traces operator()(double energy) {
        const auto dim = layout_.dim();
        Traces out = Traces::Zero();
        const bool need_lesser = sel_.friction || sel_.diffusion;
        resolvent_.retarded(energy, g_, sel_.friction ? &g2_ : nullptr);

        Eigen::VectorXd f_left(dim), f_right(dim);
        for (int a = 0; a < dim; ++a) {
            f_left(a) = fermi(energy - edge_left_(a), params_.kT);
            f_right(a) = fermi(energy - edge_right_(a), params_.kT);
        }
        // Σ_< = i s_<, with s_< real and diagonal.
        const Eigen::VectorXd s_lesser =
            gamma_left_.cwiseProduct(f_left) + gamma_right_.cwiseProduct(f_right);

        if (sel_.force) {
            // Tr{X G_<} = i Σ_j s_j (G e_j)† X (G e_j)
            for (int mu = 0; mu < 2; ++mu) {
                cplx acc = 0.0;
                for (int j = 0; j < dim; ++j) {
                    if (s_lesser(j) == 0.0) continue;
                    acc += s_lesser(j) * quadratic_form(mu, j);
                }
                out(kForceX + mu) = I_UNIT * acc;
            }
        }

        if (need_lesser) {
            scaled_ = g_ * s_lesser.asDiagonal();
            lesser_.noalias() = scaled_ * g_.adjoint();
            lesser_ *= I_UNIT;
            for (int nu = 0; nu < 2; ++nu) apply_gradient(nu, lesser_, grad_lesser_[nu]);
        }

        if (sel_.friction) {
            // Tr{X_μ G_r² X_ν G_<}
            for (int mu = 0; mu < 2; ++mu) apply_gradient(mu, g2_, grad_other_[mu]);
            out(kFrictionXX) = trace_product(grad_other_[0], grad_lesser_[0]);
            out(kFrictionXY) = trace_product(grad_other_[0], grad_lesser_[1]);
            out(kFrictionYX) = trace_product(grad_other_[1], grad_lesser_[0]);
            out(kFrictionYY) = trace_product(grad_other_[1], grad_lesser_[1]);
        }

        if (sel_.diffusion) {
            // G_> = G_< + G_r − G_a
            greater_ = lesser_ + g_ - g_.adjoint();
            for (int mu = 0; mu < 2; ++mu) apply_gradient(mu, greater_, grad_other_[mu]);
            out(kDiffusionXX) = trace_product(grad_other_[0], grad_lesser_[0]);
            out(kDiffusionXY) =
                0.5 * (trace_product(grad_other_[0], grad_lesser_[1]) + trace_product(grad_other_[1], grad_lesser_[0]));
            out(kDiffusionYY) = trace_product(grad_other_[1], grad_lesser_[1]);
        }

        if (sel_.current) {
            double sym = 0.0, general = 0.0;
            for (int a = 0; a < dim; ++a) {
                double t_lr = 0.0, t_rl = 0.0;
                for (int b = 0; b < dim; ++b) {
                    const double w = std::norm(g_(a, b));
                    t_lr += gamma_right_(b) * w;
                    t_rl += gamma_left_(b) * w;
                }
                t_lr *= gamma_left_(a);   // [Γ_L G_r Γ_R G_a]_aa
                t_rl *= gamma_right_(a);  // [Γ_R G_r Γ_L G_a]_aa
                sym += t_lr * (f_left(a) - f_right(a));
                general += t_rl * f_left(a) - t_lr * f_right(a);
            }
            out(kCurrentSymmetric) = sym;
            out(kCurrentGeneral) = general;
        }
        return out;
    }

private:
    // (G e_j)† (∂h_μ ⊗ I) (G e_j)
    cplx quadratic_form(int mu, int j) const {
        const auto& gm = grad_[mu];
        const int d = layout_.d;
        cplx acc = 0.0;
        for (int n = 0; n < layout_.replicas(); ++n) {
            const int o = n * d;
            for (int a = 0; a < d; ++a) {
                for (int b = 0; b < d; ++b) {
                    const double x = gm(a, b);
                    if (x == 0.0) continue;
                    acc += std::conj(g_(o + a, j)) * x * g_(o + b, j);
                }
            }
        }
        return acc;
    }

    // out = (∂h_μ ⊗ I) m
    void apply_gradient(int mu, const FloquetMatrix& m, FloquetMatrix& out) const {
        const auto& gm = grad_[mu];
        const int d = layout_.d;
        out.setZero();
        for (int n = 0; n < layout_.replicas(); ++n) {
            const int o = n * d;
            for (int a = 0; a < d; ++a) {
                for (int b = 0; b < d; ++b) {
                    const double x = gm(a, b);
                    if (x == 0.0) continue;
                    out.row(o + a) += x * m.row(o + b);
                }
            }
        }
    }

    // Tr{A B}
    static cplx trace_product(const FloquetMatrix& a, const FloquetMatrix& b) {
        return (a.array() * b.transpose().array()).sum();
    }

    ModelParams params_;
    FloquetLayout layout_;
    TraceSelection sel_;
    FloquetResolvent resolvent_;
    Gradients grad_;
    Eigen::VectorXd gamma_left_, gamma_right_, edge_left_, edge_right_;
    FloquetMatrix g_, g2_, lesser_, greater_, scaled_;
    FloquetMatrix grad_lesser_[2];
    FloquetMatrix grad_other_[2];
};

}  // namespace floquet_ef::detail
