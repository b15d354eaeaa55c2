// dynamics.hpp — Langevin integration under the Floquet friction fields
//
//   M R̈ = F(R) − γ(R) Ṙ + δF,   <δF_μ(t) δF_ν(t')> = 2 D_μν(R) δ(t − t')
//
// One step (h = dt/2, δF drawn once per step from D at the current R):
//   P' = P + h (F(R) − γ(R) P/M + δF)          explicit half-kick
//   R' = R + dt P'/M                            drift
//   (I + h γ(R')/M) P'' = P' + h (F(R') + δF)   implicit half-kick
// For constant γ the velocity map is the Cayley transform of −dt γ/M: norm preserving when γ is
// antisymmetric, and it reproduces the exact stationary variance of the linear Ornstein–Uhlenbeck
// process when D = kT γ.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "floquet_ef/fields.hpp"
#include "floquet_ef/grid.hpp"
#include "floquet_ef/parallel.hpp"

namespace floquet_ef {

/// Independent, reproducible random stream; stream k of a master seed never depends on
/// how many other streams exist or which thread consumes it.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : engine_(splitmix64(splitmix64(master_seed) ^ splitmix64(stream_id + 0x632be59bd9b4e019ULL))) {}

    double gaussian() { return normal_(engine_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

struct TrajectoryState {
    NuclearPoint r{};
    Vec2 p_momentum{Vec2::Zero()};
    double t{0.0};

    double kinetic(double mass) const { return p_momentum.squaredNorm() / (2.0 * mass); }
};

/// Boltzmann draw over the bare harmonic potential; P Gaussian with variance M kT.
inline TrajectoryState sample_initial_conditions(const ModelParams& p, RngStream& rng) {
    const double sx = std::sqrt(p.kT);
    const double sp = std::sqrt(p.mass * p.kT);
    TrajectoryState s;
    s.r.x = -p.lambda_x + sx * rng.gaussian();
    s.r.y = -p.lambda_y + sx * rng.gaussian();
    s.p_momentum(0) = sp * rng.gaussian();
    s.p_momentum(1) = sp * rng.gaussian();
    return s;
}

/// Gaussian force with covariance 2D/dt, drawn in the eigenbasis of D.
inline Vec2 random_force(const Mat2& diffusion, double dt, RngStream& rng) {
    Eigen::SelfAdjointEigenSolver<Mat2> es;
    es.computeDirect(diffusion);
    const Vec2 ev = es.eigenvalues();
    if (ev.minCoeff() < -kPsdTol)
        throw NotPositiveSemidefinite("random force requested for an indefinite diffusion tensor", ev.minCoeff());
    Vec2 draw;
    for (int i = 0; i < 2; ++i) draw(i) = std::sqrt(2.0 * std::max(ev(i), 0.0) / dt) * rng.gaussian();
    return es.eigenvectors() * draw;
}

/// Field providers map a nuclear point to an EFSample.
template <class P>
concept FieldProvider = requires(const P& provider, NuclearPoint r) {
    { provider(r) } -> std::convertible_to<EFSample>;
};

/// Under the clamp policy the electronic fields are held at the nearest boundary point while
/// the bare harmonic force is still evaluated at R, so excursions past the grid stay confined.
struct GridFields {
    const FieldGrid* grid;
    const ModelParams* params{nullptr};

    EFSample operator()(NuclearPoint r) const {
        EFSample s = interpolate(*grid, r);
        const GridSpec& g = grid->spec;
        if (params != nullptr && !g.contains(r) && std::isfinite(r.x) && std::isfinite(r.y)) {
            const NuclearPoint edge{std::clamp(r.x, g.x_min, g.x_max), std::clamp(r.y, g.y_min, g.y_max)};
            s.force += bare_potential(edge, *params).gradient - bare_potential(r, *params).gradient;
        }
        return s;
    }
};

/// On-the-fly evaluation; only practical for short debugging runs.
struct DirectFields {
    ModelParams params;
    QuadratureSpec quad;
    EFSample operator()(NuclearPoint r) const { return evaluate_sample(r, params, quad); }
};

struct ConstantFields {
    EFSample sample;
    bool include_harmonic{false};
    ModelParams params{};
    EFSample operator()(NuclearPoint r) const {
        EFSample s = sample;
        if (include_harmonic) s.force -= bare_potential(r, params).gradient;
        return s;
    }
};

template <FieldProvider Provider>
class LangevinIntegrator {
public:
    LangevinIntegrator(const Provider& fields, const ModelParams& p, double dt, bool stochastic)
        : fields_(fields), mass_(p.mass), dt_(dt), stochastic_(stochastic) {}

    void reset(const TrajectoryState& s) {
        state_ = s;
        here_ = fields_(s.r);
    }

    const TrajectoryState& state() const { return state_; }
    const EFSample& fields_here() const { return here_; }

    void advance(RngStream& rng) {
        const double h = 0.5 * dt_;
        const Vec2 kick = stochastic_ ? random_force(here_.diffusion, dt_, rng) : Vec2::Zero();
        const Vec2 p_half =
            state_.p_momentum + h * (here_.force - here_.gamma * state_.p_momentum / mass_ + kick);
        const NuclearPoint r_new{state_.r.x + dt_ * p_half(0) / mass_, state_.r.y + dt_ * p_half(1) / mass_};
        const EFSample there = fields_(r_new);
        const Mat2 lhs = Mat2::Identity() + (h / mass_) * there.gamma;
        state_.p_momentum = lhs.partialPivLu().solve(p_half + h * (there.force + kick));
        state_.r = r_new;
        state_.t += dt_;
        here_ = there;
    }

private:
    const Provider& fields_;
    double mass_;
    double dt_;
    bool stochastic_;
    TrajectoryState state_{};
    EFSample here_{};
};

template <FieldProvider Provider>
TrajectoryState step(const TrajectoryState& s, const Provider& fields, const ModelParams& p, double dt,
                     RngStream& rng, bool stochastic) {
    LangevinIntegrator<Provider> integ(fields, p, dt, stochastic);
    integ.reset(s);
    integ.advance(rng);
    return integ.state();
}

struct DynamicsSpec {
    int n_traj{1000};
    double dt{0.01};
    double t_burn{200.0};
    double t_total{1000.0};
    std::uint64_t master_seed{1};
    bool stochastic{true};
};

inline void validate(const DynamicsSpec& d) {
    if (d.n_traj < 1) throw ConfigError("dynamics.n_traj must be >= 1");
    if (!(d.dt > 0.0)) throw ConfigError("dynamics.dt must be > 0");
    if (!(d.t_burn >= 0.0)) throw ConfigError("dynamics.t_burn must be >= 0");
    if (!(d.t_total > d.t_burn)) throw ConfigError("dynamics.t_total must exceed dynamics.t_burn");
}

/// Time averages of one trajectory over (t_burn, t_total].
struct TrajectorySummary {
    double kinetic_mean{0.0};
    double x_mean{0.0};
    double y_mean{0.0};
    double current_mean{0.0};
    double radius_rms{0.0};  // rms distance from (x_mean, y_mean)
    long samples{0};
};

struct EnsembleStats {
    double kinetic_mean{0.0};
    double kinetic_stderr{0.0};
    double coupling_mean{0.0};  // ensemble mean of per-trajectory mean y
    double coupling_stderr{0.0};
    double coupling_sq{0.0};
    double current_mean{0.0};
    double current_stderr{0.0};
    int n_traj{0};
    double t_burn{0.0};
    double t_total{0.0};
};

struct DumpRow {
    int trajectory;
    double t, x, y, px, py;
};

struct EnsembleOptions {
    unsigned threads{1};
    int dump_trajectories{0};
    int dump_every{100};
};

struct EnsembleRun {
    EnsembleStats stats;
    std::vector<TrajectorySummary> trajectories;
    std::vector<DumpRow> dump;
};

class TrajectoryEscape : public OutOfBounds {
public:
    TrajectoryEscape(const std::string& what, NuclearPoint at, int traj, double time, EnsembleStats partial_stats)
        : OutOfBounds(what, at), trajectory(traj), t(time), partial(partial_stats) {}
    int trajectory;
    double t;
    EnsembleStats partial;
};

inline EnsembleStats reduce(const std::vector<TrajectorySummary>& trajs, const DynamicsSpec& spec) {
    EnsembleStats st;
    st.n_traj = static_cast<int>(trajs.size());
    st.t_burn = spec.t_burn;
    st.t_total = spec.t_total;
    if (trajs.empty()) return st;
    const double n = static_cast<double>(trajs.size());
    auto mean_err = [&](auto get, double& mean, double& err) {
        double s = 0.0;
        for (const auto& t : trajs) s += get(t);
        mean = s / n;
        double ss = 0.0;
        for (const auto& t : trajs) ss += (get(t) - mean) * (get(t) - mean);
        err = trajs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    };
    mean_err([](const TrajectorySummary& t) { return t.kinetic_mean; }, st.kinetic_mean, st.kinetic_stderr);
    mean_err([](const TrajectorySummary& t) { return t.y_mean; }, st.coupling_mean, st.coupling_stderr);
    mean_err([](const TrajectorySummary& t) { return t.current_mean; }, st.current_mean, st.current_stderr);
    st.coupling_sq = st.coupling_mean * st.coupling_mean;
    return st;
}

/// Runs trajectory `id` and returns its time averages; dump rows are appended when requested.
template <FieldProvider Provider>
TrajectorySummary run_trajectory(const ModelParams& p, const Provider& fields, const DynamicsSpec& spec, int id,
                                 std::vector<DumpRow>* dump = nullptr, int dump_every = 100,
                                 const TrajectoryState* initial = nullptr) {
    RngStream rng(spec.master_seed, static_cast<std::uint64_t>(id));
    const TrajectoryState start = initial != nullptr ? *initial : sample_initial_conditions(p, rng);
    LangevinIntegrator<Provider> integ(fields, p, spec.dt, spec.stochastic);
    integ.reset(start);

    const long n_steps = std::lround(spec.t_total / spec.dt);
    const long burn_steps = std::lround(spec.t_burn / spec.dt);
    double ke = 0.0, sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, cur = 0.0;
    long count = 0;
    for (long k = 1; k <= n_steps; ++k) {
        integ.advance(rng);
        const TrajectoryState& s = integ.state();
        if (dump != nullptr && (k % dump_every == 0))
            dump->push_back({id, s.t, s.r.x, s.r.y, s.p_momentum(0), s.p_momentum(1)});
        if (k <= burn_steps) continue;
        ke += s.kinetic(p.mass);
        sx += s.r.x;
        sy += s.r.y;
        sxx += s.r.x * s.r.x;
        syy += s.r.y * s.r.y;
        cur += integ.fields_here().local_current;
        ++count;
    }
    TrajectorySummary out;
    out.samples = count;
    if (count > 0) {
        const double c = static_cast<double>(count);
        out.kinetic_mean = ke / c;
        out.x_mean = sx / c;
        out.y_mean = sy / c;
        out.current_mean = cur / c;
        const double var = std::max(0.0, sxx / c - out.x_mean * out.x_mean) + std::max(0.0, syy / c - out.y_mean * out.y_mean);
        out.radius_rms = std::sqrt(var);
    }
    return out;
}

template <FieldProvider Provider>
EnsembleRun simulate_ensemble(const ModelParams& p, const Provider& fields, const DynamicsSpec& spec,
                              const EnsembleOptions& opts = {}) {
    validate(p);
    validate(spec);
    const auto n = static_cast<std::size_t>(spec.n_traj);
    std::vector<TrajectorySummary> trajs(n);
    std::vector<char> done(n, 0);
    std::vector<std::vector<DumpRow>> dumps(n);
    try {
        parallel_for(n, opts.threads, [&](std::size_t i) {
            const int id = static_cast<int>(i);
            auto* dump = id < opts.dump_trajectories ? &dumps[i] : nullptr;
            try {
                trajs[i] = run_trajectory(p, fields, spec, id, dump, std::max(1, opts.dump_every));
            } catch (const OutOfBounds& e) {
                throw TrajectoryEscape("trajectory " + std::to_string(id) + " left the field grid: " + e.what(),
                                       e.point, id, 0.0, {});
            }
            done[i] = 1;
        });
    } catch (const TrajectoryEscape& e) {
        std::vector<TrajectorySummary> completed;
        for (std::size_t i = 0; i < n; ++i)
            if (done[i]) completed.push_back(trajs[i]);
        throw TrajectoryEscape(e.what(), e.point, e.trajectory, e.t, reduce(completed, spec));
    }
    EnsembleRun run;
    run.stats = reduce(trajs, spec);
    run.trajectories = std::move(trajs);
    for (auto& d : dumps) run.dump.insert(run.dump.end(), d.begin(), d.end());
    return run;
}

inline EnsembleStats run_ensemble(const ModelParams& p, const FieldGrid& grid, const DynamicsSpec& spec,
                                  unsigned threads = 1) {
    return simulate_ensemble(p, GridFields{&grid, &p}, spec, EnsembleOptions{threads, 0, 100}).stats;
}

}  // namespace floquet_ef
