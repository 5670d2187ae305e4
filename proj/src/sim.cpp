#include "so3flock/sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "so3flock/errors.hpp"
#include "so3flock/splitmix.hpp"

namespace so3flock {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!allowed.contains(key)) {
            throw ConfigError("unknown key '" + key + "' in " + where);
        }
    }
}

template <class T>
T get_as(const json& j, const std::string& key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& ex) {
        throw ConfigError("bad value for '" + key + "': " + ex.what());
    }
}

std::uint64_t get_seed(const json& j) {
    const json& v = j.at("seed");
    if (!v.is_number_unsigned()) {
        throw ConfigError("'seed' must be a nonnegative integer");
    }
    return v.get<std::uint64_t>();
}

std::size_t get_count(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ConfigError("'" + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

WeightFn parse_weight(const json& j) {
    reject_unknown_keys(j, {"name", "params"}, "weight");
    const auto name = get_as<std::string>(j, "name");
    const json params = j.contains("params") ? j.at("params") : json::object();
    if (name == "sin_dist" || name == "cos_half_dist" || name == "cos_dist_plus_one") {
        reject_unknown_keys(params, {}, "weight.params");
        if (name == "sin_dist") return SinDist{};
        if (name == "cos_half_dist") return CosHalfDist{};
        return CosDistPlusOne{};
    }
    if (name == "constant") {
        reject_unknown_keys(params, {"value"}, "weight.params");
        return ConstantWeight{params.contains("value") ? get_as<double>(params, "value") : 1.0};
    }
    if (name == "tabulated") {
        reject_unknown_keys(params, {"samples"}, "weight.params");
        return TabulatedWeight{get_as<std::vector<double>>(params, "samples")};
    }
    throw ConfigError("unknown weight '" + name + "'");
}

json weight_to_json(const WeightFn& w) {
    json params = json::object();
    if (const auto* c = std::get_if<ConstantWeight>(&w.variant())) {
        params["value"] = c->value;
    } else if (const auto* t = std::get_if<TabulatedWeight>(&w.variant())) {
        params["samples"] = t->samples;
    }
    return {{"name", w.name()}, {"params", params}};
}

std::string time_context(const std::string& what, double t) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << " (at t = " << t << ")";
    return msg.str();
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

void finish_output(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) {
        throw IoError("write to '" + path.string() + "' failed");
    }
}

}  // namespace

std::string integrator_name(Integrator integrator) {
    return integrator == Integrator::Lie ? "lie" : "rk4_ambient";
}

Integrator parse_integrator(const std::string& name) {
    if (name == "rk4_ambient") return Integrator::Rk4Ambient;
    if (name == "lie") return Integrator::Lie;
    throw ConfigError("unknown integrator '" + name + "' (expected rk4_ambient or lie)");
}

void validate(const SimConfig& cfg) {
    if (cfg.n_particles < 1) throw ConfigError("n_particles must be at least 1");
    if (!(cfg.kappa >= 0.0) || !std::isfinite(cfg.kappa)) throw ConfigError("kappa must be finite and >= 0");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("dt must be finite and > 0");
    if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw ConfigError("t_end must be finite and > 0");
    if (cfg.frame_stride < 1) throw ConfigError("frame_stride must be at least 1");
    if (cfg.dt * static_cast<double>(cfg.frame_stride) > cfg.t_end) {
        throw ConfigError("dt * frame_stride must not exceed t_end");
    }
    const ClassifierThresholds& th = cfg.thresholds;
    if (!(th.energy > 0.0) || !(th.align > 0.0) || !(th.settle > 0.0)) {
        throw ConfigError("classifier thresholds must be positive");
    }
    if (cfg.init == "circle") {
        if (cfg.circle_thetas.size() != cfg.n_particles || cfg.circle_nus.size() != cfg.n_particles) {
            throw ConfigError("circle init needs circle_thetas and circle_nus of length n_particles");
        }
    } else if (cfg.init != "random") {
        throw ConfigError("init must be 'random' or 'circle'");
    }
}

void apply_preset(SimConfig& cfg, const std::string& name) {
    if (name == "fig1" || name == "fig2") {
        cfg.n_particles = 10;
        cfg.kappa = 1.0;
        cfg.weight = CosHalfDist{};
        cfg.dt = 1e-2;
        cfg.t_end = 200.0;
        cfg.frame_stride = 10;
        cfg.integrator = Integrator::Rk4Ambient;
        cfg.init = "random";
        cfg.seed = name == "fig1" ? 81 : 73;
        return;
    }
    if (name == "circle") {
        cfg.n_particles = 5;
        cfg.kappa = 1.0;
        cfg.weight = CosHalfDist{};
        cfg.dt = 1e-3;
        cfg.t_end = 10.0;
        cfg.frame_stride = 100;
        cfg.integrator = Integrator::Rk4Ambient;
        cfg.init = "circle";
        cfg.circle_thetas = {0.0, 0.9, 1.8, -1.2, 2.7};
        cfg.circle_nus = {1.0, -0.5, 0.3, 0.8, -1.0};
        return;
    }
    throw ConfigError("unknown preset '" + name + "' (expected fig1, fig2 or circle)");
}

void apply_json(SimConfig& cfg, const json& j) {
    reject_unknown_keys(j,
                        {"n_particles", "kappa", "weight", "dt", "t_end", "frame_stride", "seed", "integrator",
                         "thresholds", "init", "circle_thetas", "circle_nus", "out_dir", "wrap_markers",
                         "energy_dat"},
                        "config");
    if (j.contains("n_particles")) cfg.n_particles = get_count(j, "n_particles");
    if (j.contains("kappa")) cfg.kappa = get_as<double>(j, "kappa");
    if (j.contains("weight")) cfg.weight = parse_weight(j.at("weight"));
    if (j.contains("dt")) cfg.dt = get_as<double>(j, "dt");
    if (j.contains("t_end")) cfg.t_end = get_as<double>(j, "t_end");
    if (j.contains("frame_stride")) cfg.frame_stride = get_count(j, "frame_stride");
    if (j.contains("seed")) cfg.seed = get_seed(j);
    if (j.contains("integrator")) cfg.integrator = parse_integrator(get_as<std::string>(j, "integrator"));
    if (j.contains("thresholds")) {
        const json& t = j.at("thresholds");
        reject_unknown_keys(t, {"energy", "align", "settle"}, "thresholds");
        if (t.contains("energy")) cfg.thresholds.energy = get_as<double>(t, "energy");
        if (t.contains("align")) cfg.thresholds.align = get_as<double>(t, "align");
        if (t.contains("settle")) cfg.thresholds.settle = get_as<double>(t, "settle");
    }
    if (j.contains("init")) cfg.init = get_as<std::string>(j, "init");
    if (j.contains("circle_thetas")) cfg.circle_thetas = get_as<std::vector<double>>(j, "circle_thetas");
    if (j.contains("circle_nus")) cfg.circle_nus = get_as<std::vector<double>>(j, "circle_nus");
    if (j.contains("out_dir")) cfg.out_dir = get_as<std::string>(j, "out_dir");
    if (j.contains("wrap_markers")) cfg.wrap_markers = get_as<bool>(j, "wrap_markers");
    if (j.contains("energy_dat")) cfg.energy_dat = get_as<bool>(j, "energy_dat");
}

json to_json(const SimConfig& cfg) {
    json j;
    j["n_particles"] = cfg.n_particles;
    j["kappa"] = cfg.kappa;
    j["weight"] = weight_to_json(cfg.weight);
    j["dt"] = cfg.dt;
    j["t_end"] = cfg.t_end;
    j["frame_stride"] = cfg.frame_stride;
    j["seed"] = cfg.seed;
    j["integrator"] = integrator_name(cfg.integrator);
    j["thresholds"] = {{"energy", cfg.thresholds.energy},
                       {"align", cfg.thresholds.align},
                       {"settle", cfg.thresholds.settle}};
    j["init"] = cfg.init;
    j["circle_thetas"] = cfg.circle_thetas;
    j["circle_nus"] = cfg.circle_nus;
    j["out_dir"] = cfg.out_dir.string();
    j["wrap_markers"] = cfg.wrap_markers;
    j["energy_dat"] = cfg.energy_dat;
    return j;
}

void load_config_file(SimConfig& cfg, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path.string() + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + ex.what());
    }
    apply_json(cfg, j);
}

Ensemble init_ensemble(const SimConfig& cfg) {
    Ensemble e{{}, cfg.kappa, cfg.weight};
    if (cfg.init == "circle") {
        return make_circle_ensemble(cfg.circle_thetas, cfg.circle_nus, cfg.kappa, cfg.weight);
    }
    SplitMix64 rng(cfg.seed);
    e.particles.reserve(cfg.n_particles);
    for (std::size_t i = 0; i < cfg.n_particles; ++i) {
        const double angle = rng.uniform(0.0, 0.5 * std::numbers::pi);
        const double polar = rng.uniform(0.0, std::numbers::pi);
        const double azimuth = rng.uniform(0.0, 2.0 * std::numbers::pi);
        Vec3 a;
        a.x() = rng.uniform(-1.0, 1.0);
        a.y() = rng.uniform(-1.0, 1.0);
        a.z() = rng.uniform(-1.0, 1.0);
        const Vec3 axis(std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar));
        e.particles.push_back({exp_so3(angle * axis), a});
    }
    return e;
}

FrameRecord make_frame(const Ensemble& e, double t, const FrameRecord* previous) {
    FrameRecord f;
    f.diag = diagnostics(e, t);
    f.ball.reserve(e.size());
    f.a.reserve(e.size());
    f.wrapped.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const Particle& p = e.particles[i];
        f.ball.push_back(log_so3(p.R).vector());
        f.a.push_back(p.a);
        f.wrapped.push_back(previous != nullptr && (f.ball.back() - previous->ball[i]).norm() > 0.5 * std::numbers::pi);
        f.orthogonality = std::max(f.orthogonality, orthogonality_error(p.R.matrix()));
    }
    return f;
}

RunResult run(const SimConfig& cfg) {
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    Ensemble e = init_ensemble(cfg);
    const auto steps = static_cast<long long>(std::llround(cfg.t_end / cfg.dt));
    const auto stride = static_cast<long long>(cfg.frame_stride);

    // Errors raised while stepping or sampling carry the time they happened at.
    auto at_time = [](double t, auto&& body) {
        try {
            body();
        } catch (const CutLocusViolation& ex) {
            throw CutLocusViolation(time_context(ex.what(), t));
        } catch (const Degenerate& ex) {
            throw Degenerate(time_context(ex.what(), t));
        }
    };

    RunResult result;
    at_time(0.0, [&] { result.frames.push_back(make_frame(e, 0.0, nullptr)); });
    for (long long n = 1; n <= steps; ++n) {
        const double t = static_cast<double>(n) * cfg.dt;
        at_time(t - cfg.dt, [&] { e = cfg.integrator == Integrator::Lie ? step_lie(e, cfg.dt) : step_rk4(e, cfg.dt); });
        if (n % stride == 0 || n == steps) {
            at_time(t, [&] { result.frames.push_back(make_frame(e, t, &result.frames.back())); });
        }
    }

    std::vector<DiagnosticsFrame> history;
    history.reserve(result.frames.size());
    for (const FrameRecord& f : result.frames) history.push_back(f.diag);
    result.verdict = classify(history, cfg.thresholds);
    result.final_state = std::move(e);
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

void write_frames_csv(const std::vector<FrameRecord>& frames, std::size_t n_particles,
                      const std::filesystem::path& path, bool wrap_markers) {
    std::ofstream out = open_output(path);
    out << "t";
    for (std::size_t i = 0; i < n_particles; ++i) {
        for (const char* c : {"bx", "by", "bz", "ax", "ay", "az"}) out << ",p" << i << '_' << c;
        if (wrap_markers) out << ",p" << i << "_wrap";
    }
    out << ",energy,dissipation,max_misalignment\n";
    for (const FrameRecord& f : frames) {
        out << format_double(f.diag.t);
        for (std::size_t i = 0; i < n_particles; ++i) {
            for (int k = 0; k < 3; ++k) out << ',' << format_double(f.ball[i][k]);
            for (int k = 0; k < 3; ++k) out << ',' << format_double(f.a[i][k]);
            if (wrap_markers) out << ',' << (f.wrapped[i] ? 1 : 0);
        }
        out << ',' << format_double(f.diag.energy) << ',' << format_double(f.diag.dissipation) << ','
            << format_double(f.diag.max_misalignment) << '\n';
    }
    finish_output(out, path);
}

void write_energy_dat(const std::vector<FrameRecord>& frames, const std::filesystem::path& path) {
    std::ofstream out = open_output(path);
    for (const FrameRecord& f : frames) {
        out << format_double(f.diag.t) << ' ' << format_double(f.diag.energy) << '\n';
    }
    finish_output(out, path);
}

void write_summary_json(const SimConfig& cfg, const RunResult& result, const std::filesystem::path& path) {
    json j;
    j["schema"] = kSummarySchema;
    j["config"] = to_json(cfg);
    j["verdict"] = to_string(result.verdict.kind);
    if (result.verdict.kind == DichotomyVerdict::Kind::Flocking) {
        j["e_inf"] = result.verdict.e_inf;
        j["speed_deviation"] = result.verdict.speed_deviation;
    }
    const FrameRecord& last = result.frames.back();
    j["t_final"] = last.diag.t;
    j["n_frames"] = result.frames.size();
    j["final_energy"] = last.diag.energy;
    j["final_max_misalignment"] = last.diag.max_misalignment;
    j["final_speeds"] = last.diag.speeds;
    j["wall_time_seconds"] = result.wall_seconds;
    std::ofstream out = open_output(path);
    out << j.dump(2) << '\n';
    finish_output(out, path);
}

CircleReduction compare_circle_reduction(const SimConfig& cfg) {
    validate(cfg);
    if (cfg.init != "circle") {
        throw ConfigError("circle reduction needs init = circle");
    }
    const auto steps = static_cast<int>(std::llround(cfg.t_end / cfg.dt));
    const std::vector<CircleState> ref =
        circle_cs_reference(cfg.circle_thetas, cfg.circle_nus, cfg.kappa, cfg.weight, cfg.dt, steps);
    Ensemble e = init_ensemble(cfg);
    CircleReduction out;
    for (int n = 0; n <= steps; ++n) {
        if (n > 0) {
            e = cfg.integrator == Integrator::Lie ? step_lie(e, cfg.dt) : step_rk4(e, cfg.dt);
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            const Mat3& R = e.particles[i].R.matrix();
            const Vec3& a = e.particles[i].a;
            out.off_block = std::max({out.off_block, std::abs(R(0, 2)), std::abs(R(1, 2)), std::abs(R(2, 0)),
                                      std::abs(R(2, 1)), std::abs(R(2, 2) - 1.0)});
            out.planar_velocity = std::max({out.planar_velocity, std::abs(a.x()), std::abs(a.y())});
            const double theta = std::atan2(R(1, 0), R(0, 0));
            const double dtheta = std::remainder(theta - ref[n].theta[i], 2.0 * std::numbers::pi);
            out.theta_error = std::max(out.theta_error, std::abs(dtheta));
            out.nu_error = std::max(out.nu_error, std::abs(a.z() - ref[n].nu[i]));
        }
    }
    return out;
}

}  // namespace so3flock
