#pragma once

#include <stdexcept>
#include <string>

namespace so3flock {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A matrix handed to vee() is not skew-symmetric within tolerance.
class NonSkewInput : public Error {
public:
    using Error::Error;
};

/// A matrix handed to a Rotation constructor violates RᵀR = I or det R = 1.
class InvalidRotation : public Error {
public:
    using Error::Error;
};

/// Two rotations are (numerically) at distance π; the minimizing geodesic is not unique.
class CutLocus : public Error {
public:
    using Error::Error;
};

/// Polar projection cannot produce a rotation (det ≤ 0 or no convergence).
class Degenerate : public Error {
public:
    using Error::Error;
};

/// Exponential coordinates outside the injectivity ball ‖x‖ < π.
class OutOfChart : public Error {
public:
    using Error::Error;
};

/// Transport axis is not a unit vector.
class BadAxis : public Error {
public:
    using Error::Error;
};

/// Ambient matrix is not a tangent vector at the given base rotation.
class NotTangent : public Error {
public:
    using Error::Error;
};

/// A weight that does not vanish at π met a pair at the cut locus.
class CutLocusViolation : public Error {
public:
    using Error::Error;
};

/// classify() was given no frames.
class EmptyHistory : public Error {
public:
    using Error::Error;
};

/// Invalid simulation configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// An output file could not be written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace so3flock
