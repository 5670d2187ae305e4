#include "so3flock/charts.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "series.hpp"
#include "so3flock/errors.hpp"

namespace so3flock {

namespace {

double checked_angle(const Vec3& x) {
    const double theta = x.norm();
    if (!(theta < std::numbers::pi)) {
        std::ostringstream msg;
        msg << "exponential coordinates outside the chart: ‖x‖ = " << theta;
        throw OutOfChart(msg.str());
    }
    return theta;
}

}  // namespace

Vec3 ChristoffelTensor::contract(const Vec3& p, const Vec3& q) const {
    Vec3 out = Vec3::Zero();
    for (int g = 0; g < 3; ++g) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                out[g] += (*this)(g, a, b) * p[a] * q[b];
            }
        }
    }
    return out;
}

Rotation chart_rotation(const ChartPoint& p) {
    checked_angle(p.x);
    return p.base * exp_so3(p.x);
}

std::array<Mat3, 3> tangent_basis(const ChartPoint& p) {
    const double theta = checked_angle(p.x);
    const Mat3 xh = hat(p.x).matrix();
    const Mat3 xh2 = xh * xh;
    const double a = detail::basis_a(theta);
    const double s = detail::sinc(theta);
    const double b = detail::basis_b(theta);
    const double c = detail::versinc(theta);
    std::array<Mat3, 3> out;
    for (int k = 0; k < 3; ++k) {
        const Mat3 e = hat(Vec3::Unit(k)).matrix();
        const Mat3 d = a * p.x[k] * xh + s * e + b * p.x[k] * xh2 + c * (e * xh + xh * e);
        out[k] = p.base.matrix() * d;
    }
    return out;
}

MetricTensor metric(const ChartPoint& p) {
    const double theta = checked_angle(p.x);
    return detail::metric_radial(theta) * p.x * p.x.transpose() +
           2.0 * detail::versinc(theta) * Mat3::Identity();
}

MetricTensor metric_inverse(const ChartPoint& p) {
    const double theta = checked_angle(p.x);
    return detail::inverse_metric_radial(theta) * p.x * p.x.transpose() +
           (0.5 / detail::versinc(theta)) * Mat3::Identity();
}

ChristoffelTensor christoffel(const ChartPoint& p) {
    const double theta = checked_angle(p.x);
    const double P = detail::christoffel_P(theta);
    const double Q = detail::christoffel_Q(theta);
    const double S = detail::christoffel_S(theta);
    const Vec3& x = p.x;
    ChristoffelTensor out;
    for (int g = 0; g < 3; ++g) {
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                double v = P * x[a] * x[b] * x[g];
                if (b == g) v += Q * x[a];
                if (a == g) v += Q * x[b];
                if (a == b) v -= S * x[g];
                out(g, a, b) = v;
            }
        }
    }
    return out;
}

Vec3 geodesic_residual(const Vec3& u, double t) {
    const ChristoffelTensor gamma = christoffel(ChartPoint{Rotation::identity(), t * u});
    return gamma.contract(u, u);
}

Vec3 transport_ode_solve(const Vec3& u, const Vec3& v0, int steps) {
    if (steps < 100) {
        throw std::invalid_argument("transport_ode_solve needs at least 100 steps");
    }
    const double theta = u.norm();
    if (!(theta < std::numbers::pi - kCutEpsilon)) {
        std::ostringstream msg;
        msg << "transport ray leaves the chart: ‖u‖ = " << theta;
        throw OutOfChart(msg.str());
    }
    if (theta == 0.0) {
        return v0;
    }
    const double inv_t2 = 1.0 / (theta * theta);
    // Γ^γ_{αβ}(tu) u_α = k(t)(δ_βγ − u_β u_γ/θ²) with k(t) = θ² t Q(θt); k(0) = 0.
    auto field = [&](double t, const Vec3& v) -> Vec3 {
        const double k = theta * theta * t * detail::christoffel_Q(theta * t);
        return -k * (v - (u.dot(v) * inv_t2) * u);
    };
    const double h = 1.0 / steps;
    Vec3 v = v0;
    for (int n = 0; n < steps; ++n) {
        const double t = n * h;
        const Vec3 k1 = field(t, v);
        const Vec3 k2 = field(t + 0.5 * h, v + 0.5 * h * k1);
        const Vec3 k3 = field(t + 0.5 * h, v + 0.5 * h * k2);
        const Vec3 k4 = field(t + h, v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return v;
}

Vec3 transport_exact_coords(const Vec3& u, const Vec3& v0, double t) {
    const double theta = u.norm();
    if (!(theta * t < std::numbers::pi)) {
        std::ostringstream msg;
        msg << "transport ray leaves the chart: ‖u‖·t = " << theta * t;
        throw OutOfChart(msg.str());
    }
    if (theta == 0.0) {
        return v0;
    }
    const double C = v0.dot(u);
    // f(t) = sqrt((1 − cos θt)/t²) = θ·sqrt(versinc(θt)); f(0) = θ/√2.
    const double f = theta * std::sqrt(detail::versinc(theta * t));
    const double r2 = std::numbers::sqrt2;
    return (theta / r2 * v0 - C / (r2 * theta) * u) / f + (C / (theta * theta)) * u;
}

}  // namespace so3flock
