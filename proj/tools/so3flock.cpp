// Command-line driver: run simulations, run the conformance suites, check the circle reduction.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "so3flock/errors.hpp"
#include "so3flock/sim.hpp"
#include "so3flock/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfigError = 2, kCutLocusError = 3, kVerifyFailure = 4 };

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::string preset;
    std::string integrator;
    bool wrap_markers = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "PRNG seed");
    cmd->add_option("--out-dir", o.out_dir, "output directory");
    cmd->add_option("--preset", o.preset, "fig1, fig2 or circle")->check(CLI::IsMember({"fig1", "fig2", "circle"}));
    cmd->add_option("--integrator", o.integrator, "rk4_ambient or lie")
        ->check(CLI::IsMember({"rk4_ambient", "lie"}));
}

// defaults < preset < config file < command-line flags
so3flock::SimConfig build_config(const CommonOptions& o, const std::string& default_preset = "") {
    so3flock::SimConfig cfg;
    const std::string preset = o.preset.empty() ? default_preset : o.preset;
    if (!preset.empty()) so3flock::apply_preset(cfg, preset);
    if (!o.config.empty()) so3flock::load_config_file(cfg, o.config);
    if (o.seed) cfg.seed = *o.seed;
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (!o.integrator.empty()) cfg.integrator = so3flock::parse_integrator(o.integrator);
    if (o.wrap_markers) cfg.wrap_markers = true;
    so3flock::validate(cfg);
    return cfg;
}

int do_run(const CommonOptions& o) {
    const so3flock::SimConfig cfg = build_config(o);
    const so3flock::RunResult result = so3flock::run(cfg);
    std::filesystem::create_directories(cfg.out_dir);
    so3flock::write_frames_csv(result.frames, cfg.n_particles, cfg.out_dir / "frames.csv", cfg.wrap_markers);
    if (cfg.energy_dat) so3flock::write_energy_dat(result.frames, cfg.out_dir / "energy.dat");
    so3flock::write_summary_json(cfg, result, cfg.out_dir / "summary.json");
    const auto& last = result.frames.back().diag;
    std::printf("verdict %s  final energy %.6e  max misalignment %.3e  (%zu frames, %.2f s)\n",
                so3flock::to_string(result.verdict.kind), last.energy, last.max_misalignment,
                result.frames.size(), result.wall_seconds);
    return kOk;
}

int do_verify(const std::string& level) {
    so3flock::VerifyOptions opts;
    opts.level = level == "full" ? so3flock::VerifyLevel::Full : so3flock::VerifyLevel::Fast;
    bool ok = true;
    for (const auto& r : so3flock::verify(opts)) {
        std::printf("%-4s %-30s max error %.3e  tol %.1e  cases %zu  %.2f s\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.max_error, r.tolerance, r.cases, r.seconds);
        ok = ok && r.passed;
    }
    return ok ? kOk : kVerifyFailure;
}

int do_reduce_circle(const CommonOptions& o) {
    const so3flock::SimConfig cfg = build_config(o, "circle");
    const so3flock::CircleReduction r = so3flock::compare_circle_reduction(cfg);
    const bool ok = r.off_block < 1e-9 && r.planar_velocity < 1e-9 && r.theta_error <= 1e-8 && r.nu_error <= 1e-8;
    std::printf("off-block %.3e  planar velocity %.3e  theta error %.3e  nu error %.3e  %s\n", r.off_block,
                r.planar_velocity, r.theta_error, r.nu_error, ok ? "PASS" : "FAIL");
    return ok ? kOk : kVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cucker-Smale flocking on SO(3)"};
    app.require_subcommand(1);

    CommonOptions run_opts;
    CLI::App* run_cmd = app.add_subcommand("run", "integrate an ensemble and write frames.csv, energy.dat, summary.json");
    add_common(run_cmd, run_opts);
    run_cmd->add_flag("--wrap-markers", run_opts.wrap_markers, "add antipodal-wrap columns to frames.csv");

    std::string level = "fast";
    CLI::App* verify_cmd = app.add_subcommand("verify", "run the conformance suites");
    verify_cmd->add_option("level", level, "fast or full")->check(CLI::IsMember({"fast", "full"}));

    CommonOptions circle_opts;
    CLI::App* circle_cmd = app.add_subcommand("reduce-circle", "compare a circle-ansatz run with the planar model");
    add_common(circle_cmd, circle_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run_cmd) return do_run(run_opts);
        if (*verify_cmd) return do_verify(level);
        if (*circle_cmd) return do_reduce_circle(circle_opts);
    } catch (const so3flock::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const so3flock::CutLocusViolation& e) {
        std::cerr << "cut locus: " << e.what() << '\n';
        return kCutLocusError;
    } catch (const so3flock::CutLocus& e) {
        std::cerr << "cut locus: " << e.what() << '\n';
        return kCutLocusError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
