#pragma once

#include <array>

#include "so3flock/so3.hpp"

namespace so3flock {

/// A point x of the exponential chart centred at `base`; it names the rotation base·exp(x̂).
struct ChartPoint {
    Rotation base;
    Vec3 x = Vec3::Zero();
};

using MetricTensor = Mat3;

/// Γ^γ_{αβ}, indexed (gamma, alpha, beta) with 0-based indices.
class ChristoffelTensor {
public:
    double& operator()(int gamma, int alpha, int beta) { return data_[9 * gamma + 3 * alpha + beta]; }
    double operator()(int gamma, int alpha, int beta) const { return data_[9 * gamma + 3 * alpha + beta]; }

    /// Γ^γ_{αβ} p_α q_β
    Vec3 contract(const Vec3& p, const Vec3& q) const;

private:
    std::array<double, 27> data_{};
};

/// Rotation named by the chart point. Throws OutOfChart when ‖x‖ ≥ π.
Rotation chart_rotation(const ChartPoint& p);

/// ∂_α R(x) for α = 1, 2, 3.
std::array<Mat3, 3> tangent_basis(const ChartPoint& p);

MetricTensor metric(const ChartPoint& p);
MetricTensor metric_inverse(const ChartPoint& p);
ChristoffelTensor christoffel(const ChartPoint& p);

/// Γ^γ_{αβ}(t·u) u_α u_β; zero along every chart ray.
Vec3 geodesic_residual(const Vec3& u, double t);

/// v(1) for v̇_γ + Γ^γ_{αβ}(t·u) u_α v_β = 0, v(0) = v0, by classical RK4 with `steps` steps.
/// Throws OutOfChart when ‖u‖ ≥ π − kCutEpsilon and std::invalid_argument when steps < 100.
Vec3 transport_ode_solve(const Vec3& u, const Vec3& v0, int steps = 10000);

/// Closed-form solution of the same equation at time t ∈ [0, 1].
Vec3 transport_exact_coords(const Vec3& u, const Vec3& v0, double t);

}  // namespace so3flock
