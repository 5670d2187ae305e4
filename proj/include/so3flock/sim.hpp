#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "so3flock/flock.hpp"

namespace so3flock {

enum class Integrator { Rk4Ambient, Lie };

struct SimConfig {
    std::size_t n_particles = 10;
    double kappa = 1.0;
    WeightFn weight = CosHalfDist{};
    double dt = 1e-2;
    double t_end = 200.0;
    std::size_t frame_stride = 10;
    std::uint64_t seed = 1;
    Integrator integrator = Integrator::Rk4Ambient;
    ClassifierThresholds thresholds;

    /// "random" draws the initial state from the seed; "circle" uses circle_thetas/circle_nus.
    std::string init = "random";
    std::vector<double> circle_thetas;
    std::vector<double> circle_nus;

    std::filesystem::path out_dir = "out";
    /// Adds a p{i}_wrap column to frames.csv.
    bool wrap_markers = false;
    /// Also writes energy.dat.
    bool energy_dat = true;
};

/// Throws ConfigError on any violated constraint.
void validate(const SimConfig& cfg);

/// Overwrites cfg with the preset's fields. Presets: fig1, fig2, circle.
void apply_preset(SimConfig& cfg, const std::string& name);

/// Overwrites the fields present in j. Unknown keys and ill-typed values throw ConfigError.
void apply_json(SimConfig& cfg, const nlohmann::json& j);

nlohmann::json to_json(const SimConfig& cfg);

/// Parses a JSON file into cfg (see apply_json). Throws ConfigError for unreadable or malformed files.
void load_config_file(SimConfig& cfg, const std::filesystem::path& path);

std::string integrator_name(Integrator integrator);
Integrator parse_integrator(const std::string& name);

/// Initial ensemble. Random init draws, per particle in index order: rotation angle in (0, π/2),
/// polar angle in (0, π), azimuth in (0, 2π), then a_x, a_y, a_z in (−1, 1).
/// The axis is (sin p cos φ, sin p sin φ, cos p).
Ensemble init_ensemble(const SimConfig& cfg);

/// State captured at an output frame.
struct FrameRecord {
    DiagnosticsFrame diag;
    /// θ_i·n_i = vee(log R_i), inside the closed ball of radius π.
    std::vector<Vec3> ball;
    std::vector<Vec3> a;
    /// Ball coordinates moved by more than π/2 since the previous frame (antipodal wrap).
    std::vector<bool> wrapped;
    /// max_i ‖R_iᵀR_i − I‖_F
    double orthogonality = 0.0;
};

FrameRecord make_frame(const Ensemble& e, double t, const FrameRecord* previous);

struct RunResult {
    std::vector<FrameRecord> frames;
    DichotomyVerdict verdict;
    Ensemble final_state;
    double wall_seconds = 0.0;
};

/// Integrates from 0 to t_end (round(t_end/dt) steps, t = n·dt), recording step 0, every
/// frame_stride-th step and the last step. Stepper errors are rethrown with the time attached.
RunResult run(const SimConfig& cfg);

/// Columns: t, then p{i}_bx, p{i}_by, p{i}_bz, p{i}_ax, p{i}_ay, p{i}_az (and p{i}_wrap when
/// enabled) for each particle, then energy, dissipation, max_misalignment. Numbers use %.17g.
void write_frames_csv(const std::vector<FrameRecord>& frames, std::size_t n_particles,
                      const std::filesystem::path& path, bool wrap_markers = false);

/// Two columns "t E", one line per frame.
void write_energy_dat(const std::vector<FrameRecord>& frames, const std::filesystem::path& path);

inline constexpr const char* kSummarySchema = "so3-flock/1";

void write_summary_json(const SimConfig& cfg, const RunResult& result, const std::filesystem::path& path);

/// Worst deviations between an SO(3) run from circle initial data and circle_cs_reference,
/// compared at every step.
struct CircleReduction {
    /// max |R_i(0,2)|, |R_i(1,2)|, |R_i(2,0)|, |R_i(2,1)|, |R_i(2,2) − 1|
    double off_block = 0.0;
    /// max over particles of the wrapped angle difference
    double theta_error = 0.0;
    double nu_error = 0.0;
    /// max |a_x|, |a_y|
    double planar_velocity = 0.0;
};

/// Requires cfg.init == "circle".
CircleReduction compare_circle_reduction(const SimConfig& cfg);

}  // namespace so3flock
