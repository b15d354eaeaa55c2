// commands.hpp — subcommand bodies shared by the CLI and the tests

#pragma once

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "floquet_ef/config.hpp"
#include "floquet_ef/csv.hpp"
#include "floquet_ef/dynamics.hpp"
#include "floquet_ef/grid.hpp"

namespace floquet_ef {

enum class ExitCode : int { Ok = 0, Generic = 1, Config = 2, Quadrature = 3, Dynamics = 4, Validation = 5 };

struct CommandContext {
    unsigned threads{1};
    std::ostream* log{&std::cerr};
};

namespace detail {

inline std::uint64_t grid_spec_hash(const GridSpec& g) {
    Fnv1a h;
    for (double v : {g.x_min, g.x_max, g.y_min, g.y_max}) h.f64(v);
    h.i64(g.nx);
    h.i64(g.ny);
    h.i64(static_cast<int>(g.out_of_bounds));
    return h.value();
}

inline std::vector<std::string> csv_metadata(const RunConfig& cfg, const std::string& command) {
    return {"floquet_ef " + command + " config_fingerprint=" + hex64(config_fingerprint(cfg))};
}

inline std::filesystem::path ensure_output_dir(const RunConfig& cfg) {
    std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace detail

/// Loads the field grid for (p, cfg.quad, cfg.grid) from the cache directory or computes and stores it.
inline FieldGrid obtain_grid(const RunConfig& cfg, const ModelParams& p, const CommandContext& ctx) {
    const std::filesystem::path cache =
        cfg.grid_cache.empty() ? std::filesystem::path(cfg.output_dir) / "grids" : std::filesystem::path(cfg.grid_cache);
    std::filesystem::create_directories(cache);
    const std::uint64_t fp = params_fingerprint(p, cfg.quad);
    const auto path = cache / ("grid_" + hex64(fp) + "_" + hex64(detail::grid_spec_hash(cfg.grid)) + ".fgrid");
    if (std::filesystem::exists(path)) {
        FieldGrid g = load(path.string(), fp);
        if (detail::grid_spec_hash(g.spec) == detail::grid_spec_hash(cfg.grid)) {
            *ctx.log << "loaded field grid " << path.string() << "\n";
            return g;
        }
    }
    *ctx.log << "precomputing " << cfg.grid.nx << "x" << cfg.grid.ny << " field grid (N = " << p.n_floquet << ")\n";
    FieldGrid g = precompute(p, cfg.quad, cfg.grid, ctx.threads);
    const auto tmp = path.string() + ".tmp";
    save(g, tmp);
    std::filesystem::rename(tmp, path);
    return g;
}

inline void cmd_friction_map(const RunConfig& cfg, const CommandContext& ctx) {
    const auto dir = detail::ensure_output_dir(cfg);
    const FieldGrid grid = obtain_grid(cfg, cfg.model, ctx);
    save(grid, (dir / "friction_map.fgrid").string());
    CsvWriter csv((dir / "friction_map.csv").string(), detail::csv_metadata(cfg, "friction-map"),
                  {"x", "y", "Fx", "Fy", "g_xx", "g_xy", "g_yx", "g_yy", "antisym", "D_xx", "D_xy", "D_yy", "I_loc"});
    for (int iy = 0; iy < grid.spec.ny; ++iy) {
        for (int ix = 0; ix < grid.spec.nx; ++ix) {
            const NuclearPoint r = grid.spec.node(ix, iy);
            const EFSample& s = grid.at(ix, iy);
            csv.row({r.x, r.y, s.force(0), s.force(1), s.gamma(0, 0), s.gamma(0, 1), s.gamma(1, 0), s.gamma(1, 1),
                     decompose_friction(s.gamma).antisym_scalar, s.diffusion(0, 0), s.diffusion(0, 1), s.diffusion(1, 1),
                     s.local_current});
        }
    }
}

namespace detail {

inline const std::vector<std::string>& ensemble_columns() {
    static const std::vector<std::string> cols{
        "kT",      "delta",   "amp",    "omega",    "gamma_tilde", "mu_left",        "mu_right",
        "lambda_x", "lambda_y", "mass", "n_floquet", "n_traj",     "dt",             "t_burn",
        "t_total", "seed",    "stochastic", "kinetic_mean", "kinetic_stderr", "coupling_sq", "current_mean",
        "current_stderr"};
    return cols;
}

inline std::vector<double> ensemble_row(const ModelParams& p, const DynamicsSpec& d, const EnsembleStats& s) {
    return {p.kT,       p.delta,    p.amp,     p.omega,  p.gamma_tilde,
            p.mu_left,  p.mu_right, p.lambda_x, p.lambda_y, p.mass,
            static_cast<double>(p.n_floquet), static_cast<double>(s.n_traj), d.dt, s.t_burn, s.t_total,
            static_cast<double>(d.master_seed), d.stochastic ? 1.0 : 0.0, s.kinetic_mean, s.kinetic_stderr,
            s.coupling_sq, s.current_mean, s.current_stderr};
}

}  // namespace detail

inline EnsembleStats cmd_dynamics(const RunConfig& cfg, const CommandContext& ctx) {
    const auto dir = detail::ensure_output_dir(cfg);
    const FieldGrid grid = obtain_grid(cfg, cfg.model, ctx);
    const EnsembleOptions opts{ctx.threads, cfg.dump_trajectories, cfg.dump_every};
    const EnsembleRun run = simulate_ensemble(cfg.model, GridFields{&grid, &cfg.model}, cfg.dynamics, opts);
    CsvWriter csv((dir / "ensemble.csv").string(), detail::csv_metadata(cfg, "dynamics"), detail::ensemble_columns());
    csv.row(detail::ensemble_row(cfg.model, cfg.dynamics, run.stats));
    if (cfg.dump_trajectories > 0) {
        CsvWriter traj((dir / "trajectories.csv").string(), detail::csv_metadata(cfg, "dynamics"),
                       {"trajectory", "t", "x", "y", "px", "py"});
        for (const auto& row : run.dump) traj.row({static_cast<double>(row.trajectory), row.t, row.x, row.y, row.px, row.py});
    }
    return run.stats;
}

namespace detail {

/// One ensemble per (amp, sweep value); rows are flushed as points complete.
template <class Apply>
void run_sweep(const RunConfig& cfg, const CommandContext& ctx, const std::vector<double>& values,
               const std::string& command, const std::string& file, const std::string& column, Apply apply) {
    if (values.empty()) throw ConfigError(command + " needs a non-empty " + column + " sweep list");
    const auto dir = ensure_output_dir(cfg);
    std::vector<std::string> header{"amp", column, "mu_left", "mu_right", "omega", "current_mean", "current_stderr",
                                    "coupling_sq", "kinetic_mean", "kinetic_stderr", "n_traj"};
    CsvWriter csv((dir / file).string(), csv_metadata(cfg, command), header);
    const std::vector<double> amps = cfg.sweep.amp.empty() ? std::vector<double>{cfg.model.amp} : cfg.sweep.amp;
    for (double a : amps) {
        for (double v : values) {
            ModelParams p = cfg.model;
            p.amp = a;
            apply(p, v);
            validate(p);
            *ctx.log << command << ": amp = " << a << ", " << column << " = " << v << "\n";
            const FieldGrid grid = obtain_grid(cfg, p, ctx);
            const EnsembleStats s = simulate_ensemble(p, GridFields{&grid, &p}, cfg.dynamics, {ctx.threads, 0, 100}).stats;
            csv.row({a, v, p.mu_left, p.mu_right, p.omega, s.current_mean, s.current_stderr, s.coupling_sq,
                     s.kinetic_mean, s.kinetic_stderr, static_cast<double>(s.n_traj)});
        }
    }
}

}  // namespace detail

inline void cmd_iv_sweep(const RunConfig& cfg, const CommandContext& ctx) {
    detail::run_sweep(cfg, ctx, cfg.sweep.bias, "iv-sweep", "iv_sweep.csv", "bias", [](ModelParams& p, double b) {
        p.mu_left = b;
        p.mu_right = -b;
    });
}

inline void cmd_freq_sweep(const RunConfig& cfg, const CommandContext& ctx) {
    detail::run_sweep(cfg, ctx, cfg.sweep.omega, "freq-sweep", "freq_sweep.csv", "omega", [&](ModelParams& p, double w) {
        p.omega = w;
        p.mu_right = -p.mu_left;
    });
}

}  // namespace floquet_ef
