#pragma once

#include "so3flock/so3.hpp"

namespace so3flock {

/// Transport of a body-frame payload from `source` to `target` along the minimizing geodesic.
struct TransportJob {
    Rotation source;
    Rotation target;
    Vec3 payload = Vec3::Zero();
};

/// Rotation of a0 about −n by θ/2:
/// a1 = (1 − cos(θ/2))(n·a0)n + sin(θ/2) a0×n + cos(θ/2) a0.
/// Throws BadAxis when |‖n‖ − 1| > 1e-12.
Vec3 transport_vec(const Vec3& a0, double theta, const Vec3& n);

/// A1 = exp(−û/2) A0 exp(û/2).
SkewMat transport_sandwich(const SkewMat& a0, const Vec3& u);

/// Coordinate-free transport of V0 ∈ T_{R0}SO(3) to T_{R1}SO(3).
/// Throws NotTangent when R0ᵀV0 is not skew and CutLocus when R1 is at the cut locus of R0.
Mat3 transport_ambient(const Rotation& r0, const Rotation& r1, const Mat3& v0);

/// Applies transport_vec to a job.
Vec3 transport(const TransportJob& job);

struct Misalignment {
    double value = 0.0;
    bool at_cut_locus = false;
};

/// ‖P_ki a_k − a_i‖: how far a_i is from the payload a_k transported from R_k to R_i.
/// At the cut locus the value is +∞ and the flag is set.
Misalignment misalignment(const Rotation& r_i, const Vec3& a_i, const Rotation& r_k, const Vec3& a_k);

}  // namespace so3flock
