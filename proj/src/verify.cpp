#include "so3flock/verify.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "so3flock/flock.hpp"
#include "so3flock/sim.hpp"
#include "so3flock/splitmix.hpp"
#include "so3flock/transport.hpp"

namespace so3flock {

namespace {

Vec3 random_unit(SplitMix64& rng) {
    const double z = rng.uniform(-1.0, 1.0);
    const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(1.0 - z * z);
    return {r * std::cos(phi), r * std::sin(phi), z};
}

Rotation random_rotation(SplitMix64& rng) {
    return exp_so3(rng.uniform(0.0, std::numbers::pi) * random_unit(rng));
}

Vec3 random_vec(SplitMix64& rng) {
    return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
}

template <class Body>
SuiteResult timed_suite(const std::string& name, double tolerance, std::size_t cases, Body body) {
    const auto start = std::chrono::steady_clock::now();
    SuiteResult r;
    r.name = name;
    r.tolerance = tolerance;
    r.cases = cases;
    for (std::size_t c = 0; c < cases; ++c) {
        const double err = body();
        if (!(err <= r.max_error)) r.max_error = std::isnan(err) ? std::numeric_limits<double>::infinity() : err;
    }
    r.passed = r.max_error <= tolerance;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

/// ½ g^{γκ}(∂_β g_{κα} + ∂_α g_{κβ} − ∂_κ g_{αβ}) with central differences of step h.
ChristoffelTensor finite_difference_christoffel(const Vec3& x, double h) {
    std::array<Mat3, 3> dg;
    for (int k = 0; k < 3; ++k) {
        Vec3 xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        dg[k] = (metric({Rotation::identity(), xp}) - metric({Rotation::identity(), xm})) / (2.0 * h);
    }
    const Mat3 ginv = metric_inverse({Rotation::identity(), x});
    ChristoffelTensor out;
    for (int g = 0; g < 3; ++g) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                double v = 0.0;
                for (int k = 0; k < 3; ++k) {
                    v += 0.5 * ginv(g, k) * (dg[b](k, a) + dg[a](k, b) - dg[k](a, b));
                }
                out(g, a, b) = v;
            }
        }
    }
    return out;
}

}  // namespace

std::vector<SuiteResult> verify(const VerifyOptions& options) {
    const bool full = options.level == VerifyLevel::Full;
    SplitMix64 rng(options.seed);
    std::vector<SuiteResult> results;

    results.push_back(timed_suite("transport_triple", 1e-11, full ? 1000 : 100, [&] {
        const Rotation r0 = random_rotation(rng);
        const Vec3 u = rng.uniform(0.0, std::numbers::pi - 1e-3) * random_unit(rng);
        const Rotation r1 = r0 * exp_so3(u);
        const Vec3 a0 = random_vec(rng);
        const AxisAngle rel = relative_log(r0, r1);
        const Vec3 v = transport_vec(a0, rel.theta, rel.axis);
        const Vec3 s = vee(transport_sandwich(hat(a0), rel.vector()));
        const Vec3 m = vee(r1.matrix().transpose() * transport_ambient(r0, r1, r0.matrix() * hat(a0).matrix()));
        return std::max({(v - s).norm(), (v - m).norm(), (s - m).norm()});
    }));

    results.push_back(timed_suite("transport_ode_oracle", 1e-8, full ? 500 : 20, [&] {
        const Rotation r0 = random_rotation(rng);
        const Vec3 u = rng.uniform(0.0, std::numbers::pi - 0.1) * random_unit(rng);
        const Vec3 a0 = random_vec(rng);
        const ChartPoint end{r0, u};
        const Rotation r1 = chart_rotation(end);
        const Vec3 v1 = transport_ode_solve(u, a0, 10000);
        const std::array<Mat3, 3> basis = tangent_basis(end);
        const Mat3 V1 = v1[0] * basis[0] + v1[1] * basis[1] + v1[2] * basis[2];
        const Vec3 oracle = vee(SkewMat::from_matrix(r1.matrix().transpose() * V1, 1e-9));
        const Vec3 closed = transport_vec(a0, u.norm(), u.normalized());
        return (oracle - closed).norm();
    }));

    results.push_back(timed_suite("metric_definition", 1e-10, full ? 100 : 20, [&] {
        const ChartPoint p{random_rotation(rng), rng.uniform(0.1, 3.0) * random_unit(rng)};
        const std::array<Mat3, 3> basis = tangent_basis(p);
        Mat3 def;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) def(a, b) = 0.5 * frobenius_inner(basis[a], basis[b]);
        }
        return (def - metric(p)).cwiseAbs().maxCoeff();
    }));

    results.push_back(timed_suite("metric_inverse", 1e-12, full ? 100 : 20, [&] {
        const ChartPoint p{Rotation::identity(), rng.uniform(0.1, 3.0) * random_unit(rng)};
        return (metric(p) * metric_inverse(p) - Mat3::Identity()).cwiseAbs().maxCoeff();
    }));

    results.push_back(timed_suite("christoffel_finite_difference", 1e-6, full ? 100 : 20, [&] {
        const ChartPoint p{Rotation::identity(), rng.uniform(0.1, 3.0) * random_unit(rng)};
        const ChristoffelTensor fd = finite_difference_christoffel(p.x, 1e-5);
        const ChristoffelTensor got = options.christoffel(p);
        double err = 0.0;
        for (int g = 0; g < 3; ++g) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) err = std::max(err, std::abs(fd(g, a, b) - got(g, a, b)));
            }
        }
        return err;
    }));

    results.push_back(timed_suite("geodesic_residual", 1e-11, full ? 100 : 20, [&] {
        const Vec3 u = rng.uniform(0.1, 3.0) * random_unit(rng);
        const double t = rng.uniform(0.0, 1.0);
        return options.christoffel({Rotation::identity(), t * u}).contract(u, u).norm();
    }));

    results.push_back(timed_suite("energy_monotonicity", 1e-10, full ? 3 : 1, [&] {
        SimConfig cfg;
        apply_preset(cfg, "fig1");
        cfg.seed = rng.next();
        Ensemble e = init_ensemble(cfg);
        const int steps = full ? 10000 : 1000;
        double worst = 0.0;
        double prev = energy(e);
        for (int n = 0; n < steps; ++n) {
            e = step_rk4(e, cfg.dt);
            const double cur = energy(e);
            worst = std::max(worst, cur - prev);
            prev = cur;
        }
        return worst;
    }));

    return results;
}

}  // namespace so3flock
