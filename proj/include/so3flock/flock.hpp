#pragma once

#include <cstddef>
#include <vector>

#include "so3flock/so3.hpp"
#include "so3flock/weight.hpp"

namespace so3flock {

/// Attitude R and body angular velocity a; the spatial velocity is V = R·â.
struct Particle {
    Rotation R;
    Vec3 a = Vec3::Zero();
};

struct Ensemble {
    std::vector<Particle> particles;
    double kappa = 1.0;
    WeightFn weight;

    std::size_t size() const { return particles.size(); }
};

struct ParticleRate {
    Mat3 dR = Mat3::Zero();
    Vec3 da = Vec3::Zero();
};

/// Number of rhs worker threads, read from SO3FLOCK_THREADS (unset, empty or 0 means serial).
int worker_count();

/// dR_i = R_i â_i, da_i = (κ/N) Σ_{k≠i} φ(d_ik)(P_ki a_k − a_i).
/// Throws CutLocusViolation when a weight that does not vanish at π meets a cut-locus pair.
std::vector<ParticleRate> rhs(const Ensemble& e);

/// Classical RK4 on the ambient state (9 + 3 reals per particle), then polar projection of every R.
Ensemble step_rk4(const Ensemble& e, double dt);

/// Runge-Kutta-Munthe-Kaas RK4: each R is advanced as R·exp(Ω) and never leaves SO(3).
Ensemble step_lie(const Ensemble& e, double dt);

/// Σ ‖a_i‖², the total kinetic energy Σ ‖V_i‖²_{R_i}.
double energy(const Ensemble& e);

/// −(κ/N) Σ_{i≠k} φ(d_ik) ‖P_ki a_k − a_i‖², the exact value of dE/dt.
double dissipation_rate(const Ensemble& e);

/// max over ordered pairs of ‖P_ki a_k − a_i‖. Cut-locus pairs count as 0 when the weight
/// vanishes at π and make the result +∞ otherwise.
double max_misalignment(const Ensemble& e);

struct DiagnosticsFrame {
    double t = 0.0;
    double energy = 0.0;
    double dissipation = 0.0;
    double max_misalignment = 0.0;
    std::vector<double> speeds;
};

DiagnosticsFrame diagnostics(const Ensemble& e, double t);

struct ClassifierThresholds {
    double energy = 1e-8;
    double align = 1e-6;
    double settle = 1e-6;
};

struct DichotomyVerdict {
    enum class Kind { Decay, Flocking, Undecided };

    Kind kind = Kind::Undecided;
    /// Final energy; meaningful for Flocking.
    double e_inf = 0.0;
    /// max_i |‖Â_i‖²_F − 2E_inf/N| = 2·max_i |‖a_i‖² − E_inf/N| at the final frame (Flocking only).
    double speed_deviation = 0.0;
    ClassifierThresholds thresholds;
};

const char* to_string(DichotomyVerdict::Kind kind);

/// Decay if the final energy is below τ_E. Flocking if it is not, the final misalignment is below
/// τ_align and the energy moved by less than τ_settle (relative) over the last 10% of frames.
/// Histories shorter than 10 frames never count as settled. Throws EmptyHistory.
DichotomyVerdict classify(const std::vector<DiagnosticsFrame>& history, const ClassifierThresholds& thresholds = {});

/// R_i = rotation by θ_i about z, a_i = (0, 0, ν_i).
Ensemble make_circle_ensemble(const std::vector<double>& thetas, const std::vector<double>& nus, double kappa = 1.0,
                              const WeightFn& weight = {});

struct CircleState {
    std::vector<double> theta;
    std::vector<double> nu;
};

/// RK4 for θ̇_i = ν_i, ν̇_i = (κ/N) Σ_k φ(|θ_i − θ_k| mod 2π folded to [0, π])(ν_k − ν_i).
/// Returns the state after each step, starting with the initial one (steps + 1 entries).
std::vector<CircleState> circle_cs_reference(const std::vector<double>& thetas, const std::vector<double>& nus,
                                             double kappa, const WeightFn& weight, double dt, int steps);

}  // namespace so3flock
