#include "so3flock/so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "series.hpp"
#include "so3flock/errors.hpp"

namespace so3flock {

namespace {

Vec3 skew_part_vector(const Mat3& m) {
    return {m(2, 1) - m(1, 2), m(0, 2) - m(2, 0), m(1, 0) - m(0, 1)};
}

}  // namespace

SkewMat SkewMat::from_matrix(const Mat3& m, double tol) {
    const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(1.0, m.norm());
    if (asym > tol * scale) {
        std::ostringstream msg;
        msg << "matrix is not skew-symmetric: max |M + Mᵀ| = " << asym;
        throw NonSkewInput(msg.str());
    }
    return SkewMat(0.5 * (m - m.transpose()));
}

Rotation Rotation::from_matrix(const Mat3& m) {
    if (!m.allFinite()) {
        throw InvalidRotation("rotation matrix has non-finite entries");
    }
    const double orth = orthogonality_error(m);
    const double det = m.determinant();
    if (orth > kRotationTolerance || std::abs(det - 1.0) > kRotationTolerance) {
        std::ostringstream msg;
        msg << "not a rotation: ‖RᵀR − I‖_F = " << orth << ", det = " << det;
        throw InvalidRotation(msg.str());
    }
    return Rotation(m, Trusted{});
}

SkewMat hat(const Vec3& v) {
    Mat3 m;
    m << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
         -v.y(), v.x(), 0.0;
    return SkewMat(m);
}

Vec3 vee(const Mat3& m) {
    return vee(SkewMat::from_matrix(m));
}

Rotation exp_so3(const Vec3& v) {
    const double theta = v.norm();
    const Mat3 k = hat(v).matrix();
    Mat3 r = Mat3::Identity() + detail::sinc(theta) * k + detail::versinc(theta) * (k * k);
    return Rotation(r, Rotation::Trusted{});
}

namespace ambient {

Mat3 relative(const Mat3& from, const Mat3& to) {
    Mat3 out;
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            out(a, b) = from(0, a) * to(0, b) + from(1, a) * to(1, b) + from(2, a) * to(2, b);
        }
    }
    return out;
}

AxisAngle log(const Mat3& r) {
    // w = 2 sin θ · n; the angle comes from atan2 so it stays well conditioned
    // at both ends of [0, π], where arccos of the trace loses half the digits.
    const Vec3 w = skew_part_vector(r);
    const double sin_theta = 0.5 * w.norm();
    const double cos_theta = 0.5 * (r.trace() - 1.0);
    const double theta = std::atan2(sin_theta, cos_theta);

    AxisAngle out;
    out.theta = theta;
    if (cos_theta < 0.0) {
        // Past π/2 the skew part shrinks like sin θ and its direction loses digits,
        // while the symmetric part keeps full relative accuracy.
        // n nᵀ = I + (R + Rᵀ − 2I) / (2(1 − cos θ))
        const Mat3 nnt = Mat3::Identity() +
                         (r + r.transpose() - 2.0 * Mat3::Identity()) / (2.0 * (1.0 - cos_theta));
        Eigen::Index j = 0;
        nnt.diagonal().maxCoeff(&j);
        Vec3 n = nnt.col(j).normalized();
        if ((r - r.transpose()).norm() > 1e-9) {
            if (n.dot(w) < 0.0) {
                n = -n;
            }
        } else {
            for (int k = 0; k < 3; ++k) {
                if (std::abs(n[k]) > 1e-12) {
                    if (n[k] < 0.0) {
                        n = -n;
                    }
                    break;
                }
            }
        }
        out.axis = n;
        return out;
    }
    if (sin_theta == 0.0) {
        out.theta = 0.0;
        out.axis = Vec3::UnitX();
        return out;
    }
    out.axis = w / w.norm();
    return out;
}

double distance(const Mat3& r, const Mat3& q) {
    const Mat3 m = relative(r, q);
    const double sin_theta = 0.5 * skew_part_vector(m).norm();
    const double cos_theta = std::clamp(0.5 * (m.trace() - 1.0), -1.0, 1.0);
    return std::atan2(sin_theta, cos_theta);
}

}  // namespace ambient

AxisAngle log_so3(const Rotation& r) {
    return ambient::log(r.matrix());
}

double geodesic_distance(const Rotation& r, const Rotation& q) {
    return ambient::distance(r.matrix(), q.matrix());
}

AxisAngle relative_log(const Rotation& from, const Rotation& to) {
    const AxisAngle aa = ambient::log(ambient::relative(from.matrix(), to.matrix()));
    if (aa.theta >= std::numbers::pi - kCutEpsilon) {
        std::ostringstream msg;
        msg << "rotations are at the cut locus of each other (distance " << aa.theta << ")";
        throw CutLocus(msg.str());
    }
    return aa;
}

double frobenius_inner(const Mat3& a, const Mat3& b) {
    return (a.array() * b.array()).sum();
}

double riemannian_norm(const SkewMat& a) {
    return a.matrix().norm() / std::numbers::sqrt2;
}

double orthogonality_error(const Mat3& m) {
    return (m.transpose() * m - Mat3::Identity()).norm();
}

Rotation project_to_so3(const Mat3& m) {
    if (!m.allFinite()) {
        throw Degenerate("cannot project a matrix with non-finite entries");
    }
    if (m.determinant() <= 0.0) {
        throw Degenerate("cannot project a matrix with non-positive determinant onto SO(3)");
    }
    constexpr double kTol = 1e-14;
    constexpr int kMaxIterations = 50;
    Mat3 x = m;
    for (int it = 0; it <= kMaxIterations; ++it) {
        if (orthogonality_error(x) < kTol) {
            return Rotation(x, Rotation::Trusted{});
        }
        if (it == kMaxIterations) {
            break;
        }
        x = 0.5 * (x + x.inverse().transpose());
    }
    throw Degenerate("polar projection did not converge in 50 Newton steps");
}

}  // namespace so3flock
