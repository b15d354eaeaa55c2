// quadrature.hpp — energy integration over the real line
//
// Interior [-E, E]: composite trapezoid with step de and sixth-order Gregory end
// corrections. Both tails are mapped onto u in (0, 1] through ε = ±E/u, where an
// integrand decaying like 1/ε² becomes smooth, and integrated with Gauss-Legendre.
// The error estimate is |T(h) − T(2h)| on the interior plus |GL20 − GL10| on the tails.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "floquet_ef/model.hpp"

namespace floquet_ef {

struct QuadratureSpec {
    double e_max{8.0};
    double de{0.05};
    double tail_tol{1e-6};
};

/// de = Γ̃/20 unless overridden.
inline QuadratureSpec default_quadrature(const ModelParams& p) {
    QuadratureSpec q;
    q.de = p.gamma_tilde / 20.0;
    return q;
}

inline void validate(const QuadratureSpec& q) {
    if (!(q.e_max > 0.0) || !std::isfinite(q.e_max)) throw ConfigError("quad.e_max must be > 0");
    if (!(q.de > 0.0) || !std::isfinite(q.de)) throw ConfigError("quad.de must be > 0");
    if (!(q.tail_tol > 0.0)) throw ConfigError("quad.tail_tol must be > 0");
}

/// E = e_max + |Δ| + max|μ| + (N + 1)ω.
inline double integration_half_width(const ModelParams& p, const QuadratureSpec& q) {
    return q.e_max + std::abs(p.delta) + std::max(std::abs(p.mu_left), std::abs(p.mu_right)) +
           (p.n_floquet + 1) * p.omega;
}

/// Same window, with |Δ| replaced by a bound on the spectrum of h^(0)(R) + |A|.
inline double integration_half_width(NuclearPoint r, const ModelParams& p, const QuadratureSpec& q) {
    const double level = p.d == 1 ? std::abs(r.x + p.delta)
                                  : std::hypot(r.x + p.delta, r.y) + std::abs(p.amp);
    return q.e_max + std::max(level, std::abs(p.delta)) +
           std::max(std::abs(p.mu_left), std::abs(p.mu_right)) + (p.n_floquet + 1) * p.omega;
}

namespace detail {

inline constexpr int kGregoryOrder = 6;

/// End corrections c_j (j < order) such that Σ_k f(k) + Σ_j c_j (f(j) + f(n − j)) integrates
/// polynomials of degree < order exactly on [0, n].
inline const std::array<double, kGregoryOrder>& gregory_corrections() {
    static const std::array<double, kGregoryOrder> c = [] {
        // Bernoulli numbers B_2, B_4, B_6 enter through the Euler–Maclaurin end terms.
        constexpr std::array<double, 4> bernoulli_even{1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
        Eigen::Matrix<double, kGregoryOrder, kGregoryOrder> v;
        Eigen::Matrix<double, kGregoryOrder, 1> rhs;
        for (int p = 0; p < kGregoryOrder; ++p) {
            for (int j = 0; j < kGregoryOrder; ++j) v(p, j) = std::pow(double(j), p);
            v(p, 0) = p == 0 ? 1.0 : 0.0;
            rhs(p) = p == 0 ? -0.5 : (p % 2 == 1 ? bernoulli_even[(p - 1) / 2] / (p + 1) : 0.0);
        }
        const Eigen::Matrix<double, kGregoryOrder, 1> sol = v.fullPivLu().solve(rhs);
        std::array<double, kGregoryOrder> out{};
        for (int j = 0; j < kGregoryOrder; ++j) out[j] = sol(j);
        return out;
    }();
    return c;
}

inline double gregory_weight(long k, long n) {
    const auto& c = gregory_corrections();
    double w = 1.0;
    if (k < kGregoryOrder) w += c[static_cast<std::size_t>(k)];
    if (n - k < kGregoryOrder) w += c[static_cast<std::size_t>(n - k)];
    return w;
}

template <class V>
V zero_like(const V& v) {
    if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, cplx>) {
        return V{};
    } else {
        return V::Zero(v.rows(), v.cols());
    }
}

template <class V>
auto magnitude(const V& v) {
    if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, cplx>) {
        return std::abs(v);
    } else {
        return v.abs().eval();
    }
}

template <class V, class M>
V as_value(const M& m) {
    if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, cplx>) {
        return V(m);
    } else {
        return m.template cast<typename V::Scalar>();
    }
}

/// Gauss-Legendre rule on [0, 1].
template <unsigned Points>
void gauss_unit(std::vector<double>& nodes, std::vector<double>& weights) {
    using rule = boost::math::quadrature::gauss<double, Points>;
    const auto& x = rule::abscissa();
    const auto& w = rule::weights();
    nodes.clear();
    weights.clear();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0.0) {
            nodes.push_back(0.5);
            weights.push_back(0.5 * w[i]);
            continue;
        }
        nodes.push_back(0.5 * (1.0 + x[i]));
        weights.push_back(0.5 * w[i]);
        nodes.push_back(0.5 * (1.0 - x[i]));
        weights.push_back(0.5 * w[i]);
    }
}

struct TailRules {
    std::vector<double> fine_nodes, fine_weights, coarse_nodes, coarse_weights;
    TailRules() {
        gauss_unit<20>(fine_nodes, fine_weights);
        gauss_unit<10>(coarse_nodes, coarse_weights);
    }
};

inline const TailRules& tail_rules() {
    static const TailRules rules;
    return rules;
}

}  // namespace detail

template <class V>
struct QuadratureResult {
    V value;
    V error;      // componentwise error estimate
    V mass;       // componentwise ∫|f|, the scale below which a value counts as cancelled
    long evaluations{0};
};

/// Integrates f over the real line with interior half-width E; V is cplx, double, or an Eigen array.
template <class V, class F>
QuadratureResult<V> integrate_real_line(F&& f, double half_width, double de) {
    const long min_intervals = 4 * detail::kGregoryOrder;
    long n = static_cast<long>(std::ceil(2.0 * half_width / de));
    n = std::max(n, min_intervals);
    if (n % 2 != 0) ++n;
    const double h = 2.0 * half_width / static_cast<double>(n);

    V first = f(-half_width);
    V fine = detail::zero_like(first);
    V coarse = detail::zero_like(first);
    V mass = detail::zero_like(first);
    const long n_coarse = n / 2;
    for (long k = 0; k <= n; ++k) {
        const V val = k == 0 ? first : f(-half_width + static_cast<double>(k) * h);
        fine += detail::gregory_weight(k, n) * val;
        mass += detail::as_value<V>(detail::magnitude(val));
        if (k % 2 == 0) coarse += detail::gregory_weight(k / 2, n_coarse) * val;
    }
    fine *= h;
    coarse *= 2.0 * h;

    const auto& rules = detail::tail_rules();
    V tail_mass = detail::zero_like(first);
    auto tail = [&](const std::vector<double>& nodes, const std::vector<double>& weights, bool track) {
        V acc = detail::zero_like(first);
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double u = nodes[i];
            const double jac = half_width / (u * u);
            const V hi = f(half_width / u);
            const V lo = f(-half_width / u);
            acc += (weights[i] * jac) * (hi + lo);
            if (track)
                tail_mass += (weights[i] * jac) * detail::as_value<V>(detail::magnitude(hi) + detail::magnitude(lo));
        }
        return acc;
    };
    const V tail_fine = tail(rules.fine_nodes, rules.fine_weights, true);
    const V tail_coarse = tail(rules.coarse_nodes, rules.coarse_weights, false);

    QuadratureResult<V> out{fine + tail_fine, detail::zero_like(first), h * mass + tail_mass, 0};
    if constexpr (std::is_arithmetic_v<V> || std::is_same_v<V, cplx>) {
        out.error = std::abs(fine - coarse) + std::abs(tail_fine - tail_coarse);
    } else {
        out.error = (fine - coarse).abs().template cast<typename V::Scalar>() +
                    (tail_fine - tail_coarse).abs().template cast<typename V::Scalar>();
    }
    out.evaluations = n + 1 + 2 * static_cast<long>(rules.fine_nodes.size() + rules.coarse_nodes.size());
    return out;
}

/// Scalar integral with the window derived from the model; throws when the error estimate
/// exceeds tail_tol relative to |value|.
template <class F>
QuadratureResult<cplx> energy_quadrature(F&& integrand, const ModelParams& p, const QuadratureSpec& q) {
    auto wrapped = [&](double e) { return cplx(integrand(e)); };
    auto res = integrate_real_line<cplx>(wrapped, integration_half_width(p, q), q.de);
    const double scale = std::abs(res.value);
    if (std::abs(res.error) > q.tail_tol * scale && std::abs(res.error) > 1e-12 * std::abs(res.mass)) {
        throw QuadratureNotConverged("energy quadrature error estimate " + detail::sci(std::abs(res.error)) +
                                         " exceeds tolerance relative to " + detail::sci(scale),
                                     std::abs(res.error), scale);
    }
    return res;
}

}  // namespace floquet_ef
