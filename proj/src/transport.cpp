#include "so3flock/transport.hpp"

#include <cmath>
#include <algorithm>
#include <limits>
#include <numbers>
#include <sstream>

#include "series.hpp"
#include "so3flock/errors.hpp"

namespace so3flock {

namespace {

/// (cos θ − cos(θ/2))/θ²
double ambient_coef_u(double theta) {
    if (theta < kSeriesThreshold) {
        return -3.0 / 8.0 + 5.0 / 128.0 * theta * theta;
    }
    return (std::cos(theta) - std::cos(0.5 * theta)) / (theta * theta);
}

/// (sin θ − 2 sin(θ/2))/θ³
double ambient_coef_u2(double theta) {
    if (theta < kSeriesThreshold) {
        return -1.0 / 8.0 + 1.0 / 128.0 * theta * theta;
    }
    return (std::sin(theta) - 2.0 * std::sin(0.5 * theta)) / (theta * theta * theta);
}

}  // namespace

Vec3 transport_vec(const Vec3& a0, double theta, const Vec3& n) {
    const double norm = n.norm();
    if (!(std::abs(norm - 1.0) <= 1e-12)) {
        std::ostringstream msg;
        msg << "transport axis is not a unit vector: ‖n‖ = " << norm;
        throw BadAxis(msg.str());
    }
    if (theta < 1e-12) {
        return a0;
    }
    const double h = 0.5 * theta;
    const double c = std::cos(h);
    return detail::one_minus_cos(h) * n.dot(a0) * n + std::sin(h) * a0.cross(n) + c * a0;
}

SkewMat transport_sandwich(const SkewMat& a0, const Vec3& u) {
    const Mat3 left = exp_so3(-0.5 * u).matrix();
    const Mat3 right = exp_so3(0.5 * u).matrix();
    const Mat3 a1 = left * a0.matrix() * right;
    return SkewMat::from_matrix(a1, 1e-13);
}

Mat3 transport_ambient(const Rotation& r0, const Rotation& r1, const Mat3& v0) {
    const Mat3& R0 = r0.matrix();
    const Mat3 a0m = R0.transpose() * v0;
    const double asym = (a0m + a0m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-10 * std::max(1.0, v0.norm())) {
        std::ostringstream msg;
        msg << "matrix is not tangent at the base rotation: max |R0ᵀV0 + V0ᵀR0| = " << asym;
        throw NotTangent(msg.str());
    }
    const AxisAngle rel = relative_log(r0, r1);
    const double theta = rel.theta;
    if (theta == 0.0) {
        return v0;
    }
    const Vec3 u = rel.vector();
    const Mat3 uh = hat(u).matrix();
    const double C = u.dot(vee(SkewMat::from_matrix(a0m, 1e-10)));
    const Mat3 R0u = R0 * uh;
    return C * ambient_coef_u(theta) * R0u + C * ambient_coef_u2(theta) * (R0u * uh) +
           (std::sin(0.5 * theta) / theta) * (v0 * uh + R0u * R0.transpose() * v0) +
           std::cos(0.5 * theta) * v0;
}

Vec3 transport(const TransportJob& job) {
    const AxisAngle rel = relative_log(job.source, job.target);
    return transport_vec(job.payload, rel.theta, rel.axis);
}

Misalignment misalignment(const Rotation& r_i, const Vec3& a_i, const Rotation& r_k, const Vec3& a_k) {
    const AxisAngle rel = ambient::log(ambient::relative(r_k.matrix(), r_i.matrix()));
    if (rel.theta >= std::numbers::pi - kCutEpsilon) {
        return {std::numeric_limits<double>::infinity(), true};
    }
    return {(transport_vec(a_k, rel.theta, rel.axis) - a_i).norm(), false};
}

}  // namespace so3flock
