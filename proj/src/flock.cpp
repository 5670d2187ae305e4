#include "so3flock/flock.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>

#include "so3flock/errors.hpp"
#include "so3flock/transport.hpp"

namespace so3flock {

namespace {

struct PairGeometry {
    double theta = 0.0;
    Vec3 axis = Vec3::UnitX();
    bool cut = false;
};

/// Geometry of the geodesic from R_k to R_i. θ_ki and θ_ik come out bitwise equal.
PairGeometry pair_geometry(const Mat3& r_k, const Mat3& r_i) {
    const AxisAngle aa = ambient::log(ambient::relative(r_k, r_i));
    return {aa.theta, aa.axis, aa.theta >= std::numbers::pi - kCutEpsilon};
}

[[noreturn]] void cut_locus_violation(std::size_t i, std::size_t k, double d) {
    std::ostringstream msg;
    msg << "particles " << i << " and " << k << " reached the cut locus (distance " << d
        << ") under a weight that does not vanish there";
    throw CutLocusViolation(msg.str());
}

template <class Body>
void for_each_index(std::size_t n, Body body) {
    const int workers = std::min<int>(worker_count(), static_cast<int>(n));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    const std::size_t chunk = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
}

std::vector<Vec3> accelerations(const std::vector<Mat3>& R, const std::vector<Vec3>& a, double kappa,
                                const WeightFn& weight) {
    const std::size_t n = R.size();
    std::vector<Vec3> da(n, Vec3::Zero());
    if (kappa == 0.0 || n < 2) {
        return da;
    }
    const bool vanishes = weight.vanishes_at_cut_locus();
    const double scale = kappa / static_cast<double>(n);
    for_each_index(n, [&](std::size_t i) {
        Vec3 sum = Vec3::Zero();
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const PairGeometry g = pair_geometry(R[k], R[i]);
            if (g.cut) {
                if (vanishes) continue;
                cut_locus_violation(i, k, g.theta);
            }
            sum += weight(g.theta) * (transport_vec(a[k], g.theta, g.axis) - a[i]);
        }
        da[i] = scale * sum;
    });
    return da;
}

void unpack(const Ensemble& e, std::vector<Mat3>& R, std::vector<Vec3>& a) {
    R.resize(e.size());
    a.resize(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        R[i] = e.particles[i].R.matrix();
        a[i] = e.particles[i].a;
    }
}

/// Body angular velocity combination for R = R_n·exp(Ω): Ω̇ = a + ½Ω×a + (1/12)Ω×(Ω×a).
Vec3 dexp_inv(const Vec3& omega, const Vec3& a) {
    const Vec3 oa = omega.cross(a);
    return a + 0.5 * oa + (1.0 / 12.0) * omega.cross(oa);
}

}  // namespace

int worker_count() {
    const char* env = std::getenv("SO3FLOCK_THREADS");
    if (env == nullptr || *env == '\0') {
        return 0;
    }
    try {
        return std::max(0, std::stoi(env));
    } catch (const std::exception&) {
        return 0;
    }
}

std::vector<ParticleRate> rhs(const Ensemble& e) {
    std::vector<Mat3> R;
    std::vector<Vec3> a;
    unpack(e, R, a);
    const std::vector<Vec3> da = accelerations(R, a, e.kappa, e.weight);
    std::vector<ParticleRate> out(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        out[i].dR = R[i] * hat(a[i]).matrix();
        out[i].da = da[i];
    }
    return out;
}

Ensemble step_rk4(const Ensemble& e, double dt) {
    const std::size_t n = e.size();
    std::vector<Mat3> R0;
    std::vector<Vec3> a0;
    unpack(e, R0, a0);

    std::vector<Mat3> Rs(n), sumR(n, Mat3::Zero());
    std::vector<Vec3> as(n), sumA(n, Vec3::Zero());
    std::vector<Mat3> kR(n);
    std::vector<Vec3> kA;

    auto eval = [&](const std::vector<Mat3>& R, const std::vector<Vec3>& a) {
        for (std::size_t i = 0; i < n; ++i) kR[i] = R[i] * hat(a[i]).matrix();
        kA = accelerations(R, a, e.kappa, e.weight);
    };
    auto stage = [&](double c) {
        for (std::size_t i = 0; i < n; ++i) {
            Rs[i] = R0[i] + c * dt * kR[i];
            as[i] = a0[i] + c * dt * kA[i];
        }
    };
    auto accumulate = [&](double w) {
        for (std::size_t i = 0; i < n; ++i) {
            sumR[i] += w * kR[i];
            sumA[i] += w * kA[i];
        }
    };

    eval(R0, a0);
    accumulate(1.0);
    stage(0.5);
    eval(Rs, as);
    accumulate(2.0);
    stage(0.5);
    eval(Rs, as);
    accumulate(2.0);
    stage(1.0);
    eval(Rs, as);
    accumulate(1.0);

    Ensemble out{{}, e.kappa, e.weight};
    out.particles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.particles.push_back({project_to_so3(R0[i] + (dt / 6.0) * sumR[i]), a0[i] + (dt / 6.0) * sumA[i]});
    }
    return out;
}

Ensemble step_lie(const Ensemble& e, double dt) {
    const std::size_t n = e.size();
    std::vector<Mat3> R0;
    std::vector<Vec3> a0;
    unpack(e, R0, a0);

    std::vector<Mat3> Rs = R0;
    std::vector<Vec3> as = a0;
    std::vector<Vec3> omega(n, Vec3::Zero());
    std::vector<Vec3> sumO(n, Vec3::Zero()), sumA(n, Vec3::Zero());
    std::vector<Vec3> kO(n);
    std::vector<Vec3> kA;

    auto eval = [&] {
        for (std::size_t i = 0; i < n; ++i) kO[i] = dexp_inv(omega[i], as[i]);
        kA = accelerations(Rs, as, e.kappa, e.weight);
    };
    auto stage = [&](double c) {
        for (std::size_t i = 0; i < n; ++i) {
            omega[i] = c * dt * kO[i];
            as[i] = a0[i] + c * dt * kA[i];
            Rs[i] = R0[i] * exp_so3(omega[i]).matrix();
        }
    };
    auto accumulate = [&](double w) {
        for (std::size_t i = 0; i < n; ++i) {
            sumO[i] += w * kO[i];
            sumA[i] += w * kA[i];
        }
    };

    eval();
    accumulate(1.0);
    stage(0.5);
    eval();
    accumulate(2.0);
    stage(0.5);
    eval();
    accumulate(2.0);
    stage(1.0);
    eval();
    accumulate(1.0);

    Ensemble out{{}, e.kappa, e.weight};
    out.particles.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.particles.push_back({e.particles[i].R * exp_so3((dt / 6.0) * sumO[i]), a0[i] + (dt / 6.0) * sumA[i]});
    }
    return out;
}

double energy(const Ensemble& e) {
    double sum = 0.0;
    for (const Particle& p : e.particles) sum += p.a.squaredNorm();
    return sum;
}

double dissipation_rate(const Ensemble& e) {
    const std::size_t n = e.size();
    if (e.kappa == 0.0 || n < 2) {
        return 0.0;
    }
    const bool vanishes = e.weight.vanishes_at_cut_locus();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const PairGeometry g = pair_geometry(e.particles[k].R.matrix(), e.particles[i].R.matrix());
            if (g.cut) {
                if (vanishes) continue;
                cut_locus_violation(i, k, g.theta);
            }
            const Vec3 diff = transport_vec(e.particles[k].a, g.theta, g.axis) - e.particles[i].a;
            sum += e.weight(g.theta) * diff.squaredNorm();
        }
    }
    return -(e.kappa / static_cast<double>(n)) * sum;
}

double max_misalignment(const Ensemble& e) {
    const std::size_t n = e.size();
    const bool vanishes = e.weight.vanishes_at_cut_locus();
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            const PairGeometry g = pair_geometry(e.particles[k].R.matrix(), e.particles[i].R.matrix());
            if (g.cut) {
                if (vanishes) continue;
                return std::numeric_limits<double>::infinity();
            }
            const Vec3 diff = transport_vec(e.particles[k].a, g.theta, g.axis) - e.particles[i].a;
            worst = std::max(worst, diff.norm());
        }
    }
    return worst;
}

DiagnosticsFrame diagnostics(const Ensemble& e, double t) {
    DiagnosticsFrame f;
    f.t = t;
    f.energy = energy(e);
    f.dissipation = dissipation_rate(e);
    f.max_misalignment = max_misalignment(e);
    f.speeds.reserve(e.size());
    for (const Particle& p : e.particles) f.speeds.push_back(p.a.norm());
    return f;
}

const char* to_string(DichotomyVerdict::Kind kind) {
    switch (kind) {
        case DichotomyVerdict::Kind::Decay:
            return "decay";
        case DichotomyVerdict::Kind::Flocking:
            return "flocking";
        case DichotomyVerdict::Kind::Undecided:
            return "undecided";
    }
    return "undecided";
}

DichotomyVerdict classify(const std::vector<DiagnosticsFrame>& history, const ClassifierThresholds& thresholds) {
    if (history.empty()) {
        throw EmptyHistory("cannot classify an empty history");
    }
    DichotomyVerdict v;
    v.thresholds = thresholds;
    const DiagnosticsFrame& last = history.back();
    v.e_inf = last.energy;
    if (last.energy < thresholds.energy) {
        v.kind = DichotomyVerdict::Kind::Decay;
        return v;
    }
    const std::size_t n = history.size();
    bool settled = false;
    if (n >= 10) {
        const std::size_t window = n / 10;
        double change = 0.0;
        for (std::size_t j = n - 1 - window; j < n; ++j) {
            change = std::max(change, std::abs(history[j].energy - last.energy));
        }
        settled = change < thresholds.settle * last.energy;
    }
    if (settled && last.max_misalignment < thresholds.align) {
        v.kind = DichotomyVerdict::Kind::Flocking;
        const double target = 2.0 * last.energy / static_cast<double>(last.speeds.size());
        for (double s : last.speeds) {
            v.speed_deviation = std::max(v.speed_deviation, std::abs(2.0 * s * s - target));
        }
    }
    return v;
}

Ensemble make_circle_ensemble(const std::vector<double>& thetas, const std::vector<double>& nus, double kappa,
                              const WeightFn& weight) {
    if (thetas.size() != nus.size()) {
        throw std::invalid_argument("make_circle_ensemble: thetas and nus differ in length");
    }
    Ensemble e{{}, kappa, weight};
    e.particles.reserve(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        e.particles.push_back({exp_so3(Vec3(0.0, 0.0, thetas[i])), Vec3(0.0, 0.0, nus[i])});
    }
    return e;
}

std::vector<CircleState> circle_cs_reference(const std::vector<double>& thetas, const std::vector<double>& nus,
                                             double kappa, const WeightFn& weight, double dt, int steps) {
    if (thetas.size() != nus.size()) {
        throw std::invalid_argument("circle_cs_reference: thetas and nus differ in length");
    }
    const std::size_t n = thetas.size();
    const double scale = n > 0 ? kappa / static_cast<double>(n) : 0.0;
    auto accel = [&](const std::vector<double>& th, const std::vector<double>& nu) {
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i) continue;
                const double d = std::abs(std::remainder(th[i] - th[k], 2.0 * std::numbers::pi));
                sum += weight(d) * (nu[k] - nu[i]);
            }
            out[i] = scale * sum;
        }
        return out;
    };

    std::vector<CircleState> traj;
    traj.reserve(static_cast<std::size_t>(steps) + 1);
    traj.push_back({thetas, nus});
    std::vector<double> th(n), nu(n);
    for (int s = 0; s < steps; ++s) {
        const CircleState& cur = traj.back();
        const std::vector<double>& k1t = cur.nu;
        const std::vector<double> k1n = accel(cur.theta, cur.nu);
        for (std::size_t i = 0; i < n; ++i) {
            th[i] = cur.theta[i] + 0.5 * dt * k1t[i];
            nu[i] = cur.nu[i] + 0.5 * dt * k1n[i];
        }
        const std::vector<double> k2t = nu;
        const std::vector<double> k2n = accel(th, nu);
        for (std::size_t i = 0; i < n; ++i) {
            th[i] = cur.theta[i] + 0.5 * dt * k2t[i];
            nu[i] = cur.nu[i] + 0.5 * dt * k2n[i];
        }
        const std::vector<double> k3t = nu;
        const std::vector<double> k3n = accel(th, nu);
        for (std::size_t i = 0; i < n; ++i) {
            th[i] = cur.theta[i] + dt * k3t[i];
            nu[i] = cur.nu[i] + dt * k3n[i];
        }
        const std::vector<double> k4t = nu;
        const std::vector<double> k4n = accel(th, nu);
        CircleState next{std::vector<double>(n), std::vector<double>(n)};
        for (std::size_t i = 0; i < n; ++i) {
            next.theta[i] = cur.theta[i] + dt / 6.0 * (k1t[i] + 2.0 * k2t[i] + 2.0 * k3t[i] + k4t[i]);
            next.nu[i] = cur.nu[i] + dt / 6.0 * (k1n[i] + 2.0 * k2n[i] + 2.0 * k3n[i] + k4n[i]);
        }
        traj.push_back(std::move(next));
    }
    return traj;
}

}  // namespace so3flock
