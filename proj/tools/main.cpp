// floquet-ef — command-line front end
//
//   floquet-ef <friction-map|dynamics|iv-sweep|freq-sweep|validate> [--config PATH] [--set key=value]...
//              [--out DIR] [--threads K] [--seed S]
//
// Exit codes: 0 ok, 2 config, 3 quadrature / field evaluation, 4 dynamics, 5 validation.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "floquet_ef/floquet_ef.hpp"

namespace fe = floquet_ef;

namespace {

struct Options {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir;
    unsigned threads{0};
    long long seed{-1};
};

fe::RunConfig build_config(const Options& o) {
    fe::RunConfig cfg;
    if (!o.config_path.empty()) fe::load_config(cfg, o.config_path);
    for (const auto& s : o.overrides) fe::apply_override(cfg, s);
    if (!o.out_dir.empty()) cfg.output_dir = o.out_dir;
    if (o.seed >= 0) cfg.dynamics.master_seed = static_cast<std::uint64_t>(o.seed);
    fe::finalize(cfg);
    return cfg;
}

int run_validate(const fe::RunConfig& cfg) {
    const auto results = fe::run_validation(cfg);
    nlohmann::json report;
    report["config_fingerprint"] = fe::hex64(fe::config_fingerprint(cfg));
    report["checks"] = nlohmann::json::array();
    std::vector<std::string> failing;
    for (const auto& r : results) {
        report["checks"].push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        if (!r.passed) failing.push_back(r.name);
    }
    report["failing"] = failing;
    report["passed"] = failing.empty();
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream(std::filesystem::path(cfg.output_dir) / "validate.json") << report.dump(2) << "\n";
    if (!failing.empty()) {
        std::cerr << "validation failed:";
        for (const auto& f : failing) std::cerr << " " << f;
        std::cerr << "\n";
        return static_cast<int>(fe::ExitCode::Validation);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Floquet electronic friction and Langevin dynamics for a driven two-level junction"};
    app.require_subcommand(1);
    Options opts;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config_path, "key = value configuration file")->check(CLI::ExistingFile);
        sub->add_option("--set", opts.overrides, "override a configuration key (key=value)")->take_all();
        sub->add_option("--out", opts.out_dir, "output directory (overrides output.dir)");
        sub->add_option("--threads", opts.threads, "worker threads, 0 = hardware concurrency");
        sub->add_option("--seed", opts.seed, "master seed (overrides dynamics.seed)")->check(CLI::NonNegativeNumber);
    };
    auto* friction = app.add_subcommand("friction-map", "precompute fields and write friction_map.csv");
    auto* dynamics = app.add_subcommand("dynamics", "run one Langevin ensemble and write ensemble.csv");
    auto* iv = app.add_subcommand("iv-sweep", "ensemble current over sweep.bias (mu_R = -mu_L)");
    auto* freq = app.add_subcommand("freq-sweep", "ensemble current over sweep.omega");
    auto* val = app.add_subcommand("validate", "run the invariant suite and write validate.json");
    for (auto* s : {friction, dynamics, iv, freq, val}) add_common(s);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(fe::ExitCode::Config);
    }

    try {
        const fe::RunConfig cfg = build_config(opts);
        const fe::CommandContext ctx{opts.threads, &std::cerr};
        if (*friction) fe::cmd_friction_map(cfg, ctx);
        if (*dynamics) {
            const auto st = fe::cmd_dynamics(cfg, ctx);
            std::cout << "kinetic_mean " << st.kinetic_mean << " +- " << st.kinetic_stderr << ", current_mean "
                      << st.current_mean << " +- " << st.current_stderr << ", coupling_sq " << st.coupling_sq << "\n";
        }
        if (*iv) fe::cmd_iv_sweep(cfg, ctx);
        if (*freq) fe::cmd_freq_sweep(cfg, ctx);
        if (*val) return run_validate(cfg);
        return 0;
    } catch (const fe::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return static_cast<int>(fe::ExitCode::Config);
    } catch (const fe::TrajectoryEscape& e) {
        std::cerr << "dynamics error: " << e.what() << " (" << e.partial.n_traj
                  << " trajectories completed; partial kinetic_mean " << e.partial.kinetic_mean << ")\n";
        return static_cast<int>(fe::ExitCode::Dynamics);
    } catch (const fe::OutOfBounds& e) {
        std::cerr << "dynamics error: " << e.what() << "\n";
        return static_cast<int>(fe::ExitCode::Dynamics);
    } catch (const fe::QuadratureNotConverged& e) {
        std::cerr << "quadrature error: " << e.what() << "\n";
        return static_cast<int>(fe::ExitCode::Quadrature);
    } catch (const fe::NotPositiveSemidefinite& e) {
        std::cerr << "field error: " << e.what() << "\n";
        return static_cast<int>(fe::ExitCode::Quadrature);
    } catch (const fe::ResidueCheckFailed& e) {
        std::cerr << "field error: " << e.what() << "\n";
        return static_cast<int>(fe::ExitCode::Quadrature);
    } catch (const fe::SingularSystem& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return static_cast<int>(fe::ExitCode::Config);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(fe::ExitCode::Generic);
    }
}
