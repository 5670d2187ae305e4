#pragma once

#include <Eigen/Dense>

namespace so3flock {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Below this angle the Rodrigues ratios use their Taylor expansions.
inline constexpr double kSeriesThreshold = 1e-4;
/// Pairs closer than this to distance π are treated as cut-locus pairs.
inline constexpr double kCutEpsilon = 1e-9;
/// Tolerance on ‖RᵀR − I‖_F and |det R − 1| for a valid Rotation.
inline constexpr double kRotationTolerance = 1e-9;

/// Element of so(3). The stored matrix is exactly skew-symmetric.
class SkewMat {
public:
    SkewMat() : m_(Mat3::Zero()) {}

    /// Accepts a matrix whose asymmetry ‖M + Mᵀ‖_max is within tol·max(1, ‖M‖_F),
    /// then stores its exact skew part ½(M − Mᵀ). Throws NonSkewInput otherwise.
    static SkewMat from_matrix(const Mat3& m, double tol = 1e-12);

    const Mat3& matrix() const { return m_; }

private:
    explicit SkewMat(const Mat3& m) : m_(m) {}
    friend SkewMat hat(const Vec3& v);

    Mat3 m_;
};

/// Element of SO(3): orthonormal with unit determinant to kRotationTolerance.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    /// Throws InvalidRotation when the invariants do not hold.
    static Rotation from_matrix(const Mat3& m);
    static Rotation identity() { return Rotation(); }

    const Mat3& matrix() const { return m_; }
    Rotation transpose() const { return Rotation(m_.transpose(), Trusted{}); }
    Rotation operator*(const Rotation& other) const { return Rotation(m_ * other.m_, Trusted{}); }

private:
    struct Trusted {};
    Rotation(const Mat3& m, Trusted) : m_(m) {}
    friend Rotation exp_so3(const Vec3& v);
    friend Rotation project_to_so3(const Mat3& m);

    Mat3 m_;
};

/// Canonical angle-axis pair: theta ∈ [0, π], unit axis, axis = (1,0,0) at theta = 0.
struct AxisAngle {
    double theta = 0.0;
    Vec3 axis = Vec3::UnitX();

    Vec3 vector() const { return theta * axis; }
};

SkewMat hat(const Vec3& v);

/// Inverse of hat. Throws NonSkewInput when M is not skew within 1e-12 (relative to its size).
Vec3 vee(const Mat3& m);
inline Vec3 vee(const SkewMat& a) { return {a.matrix()(2, 1), a.matrix()(0, 2), a.matrix()(1, 0)}; }

/// Rodrigues exponential; any v, including ‖v‖ > π.
Rotation exp_so3(const Vec3& v);

/// Inverse Rodrigues map onto [0, π] × S². Deterministic axis at θ = 0 and θ = π.
AxisAngle log_so3(const Rotation& r);

/// Bi-invariant distance arccos((tr RᵀQ − 1)/2) ∈ [0, π].
double geodesic_distance(const Rotation& r, const Rotation& q);

/// θ·n = vee(log(fromᵀ·to)). Throws CutLocus when θ ≥ π − kCutEpsilon.
AxisAngle relative_log(const Rotation& from, const Rotation& to);

double frobenius_inner(const Mat3& a, const Mat3& b);

/// ‖RA‖_R = ‖A‖_F/√2; independent of the base point R.
double riemannian_norm(const SkewMat& a);

/// ‖MᵀM − I‖_F
double orthogonality_error(const Mat3& m);

/// Orthogonal polar factor of M by Newton iteration M ← ½(M + M⁻ᵀ).
/// Throws Degenerate when det M ≤ 0 or the iteration does not converge in 50 steps.
Rotation project_to_so3(const Mat3& m);

/// The same maps on raw 3×3 matrices, for callers (integrator stages) whose iterates
/// sit slightly off the manifold. No validation is performed.
namespace ambient {

/// fromᵀ·to with a fixed summation order, so relative(a, b) is exactly relative(b, a)ᵀ.
Mat3 relative(const Mat3& from, const Mat3& to);
AxisAngle log(const Mat3& r);
double distance(const Mat3& r, const Mat3& q);

}  // namespace ambient

}  // namespace so3flock
