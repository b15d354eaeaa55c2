// floquet.hpp — Floquet-space operators and nonequilibrium Green's functions
//
// Composite index: (replica n in [-N, N], orbital i) -> (n + N) * d + i.
// Block (m, m') of h^F carries h^(m - m'); block (m, m) additionally carries m * omega * I.
//
// Self-energy sign convention: Σ_< = +iΓf, Σ_> = −iΓ(1 − f), so that −iG_< is the
// (positive) occupied spectral weight and G_> − G_< = G_r − G_a.

#pragma once

#include <cmath>
#include <utility>

#include "floquet_ef/model.hpp"

namespace floquet_ef {

using FloquetMatrix = CMatrix;

struct FloquetLayout {
    int n_floquet{0};
    int d{2};

    explicit FloquetLayout(const ModelParams& p) : n_floquet(p.n_floquet), d(p.d) {}
    int replicas() const { return 2 * n_floquet + 1; }
    int dim() const { return d * replicas(); }
    int index(int n, int orbital) const { return (n + n_floquet) * d + orbital; }
    int replica_of(int idx) const { return idx / d - n_floquet; }
    int orbital_of(int idx) const { return idx % d; }
};

inline double fermi(double x, double kT) {
    const double z = x / kT;
    if (z > 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

/// Embeds a system-space operator block-diagonally over all replicas (op ⊗ I_n).
inline FloquetMatrix replicate(const Eigen::MatrixXd& op, const ModelParams& p) {
    const FloquetLayout lay(p);
    FloquetMatrix out = FloquetMatrix::Zero(lay.dim(), lay.dim());
    for (int n = -lay.n_floquet; n <= lay.n_floquet; ++n) {
        const int o = lay.index(n, 0);
        out.block(o, o, lay.d, lay.d) = op.cast<cplx>();
    }
    return out;
}

inline FloquetMatrix build_floquet_hamiltonian(NuclearPoint r, const ModelParams& p) {
    const FloquetLayout lay(p);
    const FourierBlocks fb = fourier_blocks(r, p);
    FloquetMatrix hf = FloquetMatrix::Zero(lay.dim(), lay.dim());
    for (int m = -lay.n_floquet; m <= lay.n_floquet; ++m) {
        for (int mp = -lay.n_floquet; mp <= lay.n_floquet; ++mp) {
            const int harmonic = m - mp;
            if (harmonic < -fb.max_n || harmonic > fb.max_n) continue;
            hf.block(lay.index(m, 0), lay.index(mp, 0), lay.d, lay.d) = fb.at(harmonic).cast<cplx>();
        }
        for (int i = 0; i < lay.d; ++i) {
            hf(lay.index(m, i), lay.index(m, i)) += m * p.omega;
        }
    }
    return hf;
}

struct FloquetHybridization {
    FloquetMatrix left;
    FloquetMatrix right;

    const FloquetMatrix& operator[](Lead lead) const { return lead == Lead::Left ? left : right; }
};

inline FloquetHybridization build_floquet_hybridization(const ModelParams& p) {
    const Hybridization h = hybridization_matrices(p);
    return {replicate(h.left, p), replicate(h.right, p)};
}

/// Diagonal of f(ε − nω − μ_ζ), replicated over orbitals.
inline Eigen::VectorXd lead_occupation(double energy, Lead lead, const ModelParams& p) {
    const FloquetLayout lay(p);
    Eigen::VectorXd occ(lay.dim());
    for (int n = -lay.n_floquet; n <= lay.n_floquet; ++n) {
        const double f = fermi(energy - n * p.omega - p.mu(lead), p.kT);
        occ.segment(lay.index(n, 0), lay.d).setConstant(f);
    }
    return occ;
}

struct SelfEnergies {
    FloquetMatrix retarded;
    FloquetMatrix lesser;
    FloquetMatrix greater;
};

inline SelfEnergies self_energies(double energy, const ModelParams& p) {
    const FloquetHybridization gf = build_floquet_hybridization(p);
    const Eigen::VectorXd f_left = lead_occupation(energy, Lead::Left, p);
    const Eigen::VectorXd f_right = lead_occupation(energy, Lead::Right, p);
    const auto ones = Eigen::VectorXd::Ones(f_left.size());

    SelfEnergies s;
    s.retarded = -0.5 * I_UNIT * (gf.left + gf.right);
    s.lesser = I_UNIT * (gf.left * f_left.asDiagonal() + gf.right * f_right.asDiagonal());
    s.greater = -I_UNIT * (gf.left * (ones - f_left).asDiagonal() + gf.right * (ones - f_right).asDiagonal());
    return s;
}

struct GreenSet {
    FloquetMatrix g_r;
    FloquetMatrix g_a;
    FloquetMatrix g_lesser;
    FloquetMatrix g_greater;
};

inline GreenSet greens_at(double energy, NuclearPoint r, const ModelParams& p) {
    const FloquetMatrix hf = build_floquet_hamiltonian(r, p);
    const SelfEnergies sigma = self_energies(energy, p);
    const auto dim = hf.rows();
    const FloquetMatrix identity = FloquetMatrix::Identity(dim, dim);
    const FloquetMatrix lhs = energy * identity - hf - sigma.retarded;

    Eigen::PartialPivLU<FloquetMatrix> lu(lhs);
    GreenSet g;
    g.g_r = lu.solve(identity);
    const double residual = (lhs * g.g_r - identity).cwiseAbs().maxCoeff();
    if (!std::isfinite(residual) || residual > 1e-10) {
        throw SingularSystem("retarded Floquet Green's function solve residual " +
                             detail::sci(residual) + " at energy " + std::to_string(energy));
    }
    g.g_a = g.g_r.adjoint();
    g.g_lesser = g.g_r * sigma.lesser * g.g_a;
    g.g_greater = g.g_r * sigma.greater * g.g_a;
    return g;
}

/// ∂_ε G_r = −G_r² in the wide-band limit.
inline FloquetMatrix denergy_retarded(const FloquetMatrix& g_r) { return -(g_r * g_r); }

/// Resolvent of h^F at one nuclear point, factorized once and reused across energies.
///
/// When Γ_L + Γ_R is proportional to the identity (both shipped presets), Σ_r = −iηI and
/// G_r(ε) = Q diag(1/(ε − λ_k + iη)) Q† with (Q, λ) the Hermitian eigensystem of h^F.
/// Otherwise each energy falls back to an LU solve.
class FloquetResolvent {
public:
    FloquetResolvent(NuclearPoint r, const ModelParams& p)
        : hf_(build_floquet_hamiltonian(r, p)), sigma_r_(self_energies(0.0, p).retarded) {
        const auto dim = hf_.rows();
        const cplx first = sigma_r_(0, 0);
        const double off = (sigma_r_ - first * FloquetMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
        spectral_ = off == 0.0;
        if (spectral_) {
            eta_ = -first.imag();
            Eigen::SelfAdjointEigenSolver<FloquetMatrix> es(hf_);
            q_ = es.eigenvectors();
            lambda_ = es.eigenvalues();
        }
        scaled_.resize(dim, dim);
    }

    bool spectral() const { return spectral_; }
    const FloquetMatrix& hamiltonian() const { return hf_; }

    /// Writes G_r(ε) into out; when g2 is non-null also writes G_r(ε)².
    void retarded(double energy, FloquetMatrix& out, FloquetMatrix* g2 = nullptr) {
        const auto dim = hf_.rows();
        if (spectral_) {
            for (Eigen::Index k = 0; k < dim; ++k) {
                const cplx g = 1.0 / cplx(energy - lambda_(k), eta_);
                scaled_.col(k) = q_.col(k) * g;
            }
            out.noalias() = scaled_ * q_.adjoint();
            if (g2 != nullptr) {
                for (Eigen::Index k = 0; k < dim; ++k) {
                    const cplx g = 1.0 / cplx(energy - lambda_(k), eta_);
                    scaled_.col(k) *= g;
                }
                g2->noalias() = scaled_ * q_.adjoint();
            }
            return;
        }
        const FloquetMatrix identity = FloquetMatrix::Identity(dim, dim);
        Eigen::PartialPivLU<FloquetMatrix> lu(energy * identity - hf_ - sigma_r_);
        out = lu.solve(identity);
        if (g2 != nullptr) g2->noalias() = out * out;
    }

private:
    FloquetMatrix hf_;
    FloquetMatrix sigma_r_;
    bool spectral_{false};
    double eta_{0.0};
    FloquetMatrix q_;
    Eigen::VectorXd lambda_;
    FloquetMatrix scaled_;
};

}  // namespace floquet_ef
