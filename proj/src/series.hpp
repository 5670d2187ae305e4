#pragma once

// Scalar coefficient functions shared by the SO(3) primitives. Each is an even
// analytic function of θ with a removable singularity at the origin.

#include <cmath>
#include <cstddef>

#include "so3flock/so3.hpp"

namespace so3flock::detail {

/// sin θ / θ
inline double sinc(double theta) {
    if (std::abs(theta) < kSeriesThreshold) {
        return 1.0 - theta * theta / 6.0;
    }
    return std::sin(theta) / theta;
}

/// (1 − cos θ)/θ², evaluated as 2 sin²(θ/2)/θ² to avoid cancellation.
inline double versinc(double theta) {
    if (std::abs(theta) < kSeriesThreshold) {
        return 0.5 - theta * theta / 24.0;
    }
    const double s = std::sin(0.5 * theta);
    return 2.0 * s * s / (theta * theta);
}

/// θ / (2 sin θ)
inline double half_theta_over_sin(double theta) {
    if (std::abs(theta) < kSeriesThreshold) {
        return 0.5 + theta * theta / 12.0;
    }
    return theta / (2.0 * std::sin(theta));
}

/// Horner evaluation of Σ c_k z^k.
template <std::size_t N>
double horner(const double (&c)[N], double z) {
    double acc = c[N - 1];
    for (std::size_t k = N - 1; k-- > 0;) {
        acc = acc * z + c[k];
    }
    return acc;
}


/// Below this angle the chart coefficients use their 11-term Taylor series in θ².
/// Their closed forms cancel badly near 0 (m, P lose all digits by θ ~ 1e-4).
inline constexpr double kChartSeriesThreshold = 0.5;

namespace taylor {
inline constexpr double m[] = {1.0 / 12, -1.0 / 360, 1.0 / 20160, -1.0 / 1814400, 1.0 / 239500800,
                               -1.0 / 43589145600, 1.0 / 10461394944000, -1.0 / 3201186852864000,
                               1.0 / 1216451004088320000, -1.0 / 562000363888803840000.0,
                               1.0 / 310224200866619719680000.0};
inline constexpr double a[] = {-1.0 / 3, 1.0 / 30, -1.0 / 840, 1.0 / 45360, -1.0 / 3991680,
                               1.0 / 518918400, -1.0 / 93405312000, 1.0 / 22230464256000,
                               -1.0 / 6758061133824000, 1.0 / 2554547108585472000.0,
                               -1.0 / 1175091669949317120000.0};
inline constexpr double b[] = {-1.0 / 12, 1.0 / 180, -1.0 / 6720, 1.0 / 453600, -1.0 / 47900160,
                               1.0 / 7264857600, -1.0 / 1494484992000, 1.0 / 400148356608000,
                               -1.0 / 135161222676480000, 1.0 / 56200036388880384000.0,
                               -1.0 / 28202200078783610880000.0};
inline constexpr double S[] = {-1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880, -1.0 / 39916800,
                               1.0 / 6227020800, -1.0 / 1307674368000, 1.0 / 355687428096000,
                               -1.0 / 121645100408832000, 1.0 / 51090942171709440000.0,
                               -1.0 / 25852016738884976640000.0};
inline constexpr double Q[] = {-1.0 / 12, -1.0 / 720, -1.0 / 30240, -1.0 / 1209600, -1.0 / 47900160,
                               -691.0 / 1307674368000, -1.0 / 74724249600, -3617.0 / 10670622842880000,
                               -43867.0 / 5109094217170944000.0, -174611.0 / 802857662698291200000.0,
                               -77683.0 / 14101100039391805440000.0};
inline constexpr double P[] = {1.0 / 90, -1.0 / 7560, 1.0 / 226800, 1.0 / 59875200, 199.0 / 163459296000,
                               17.0 / 653837184000, 227.0 / 333456963840000, 1993.0 / 116115777662976000.0,
                               101861.0 / 234166818287001600000.0, 85451.0 / 7755605021665492992000.0,
                               13429781.0 / 48120003884424536064000000.0};
inline constexpr double A[] = {-1.0 / 12, -1.0 / 240, -1.0 / 6048, -1.0 / 172800, -1.0 / 5322240,
                               -691.0 / 118879488000, -1.0 / 5748019200, -3617.0 / 711374856192000,
                               -43867.0 / 300534953951232000.0, -174611.0 / 42255666457804800000.0,
                               -77683.0 / 671480954256752640000.0};
}  // namespace taylor

/// 1 − cos θ as 2 sin²(θ/2)
inline double one_minus_cos(double theta) {
    const double s = std::sin(0.5 * theta);
    return 2.0 * s * s;
}

/// (2cos θ − 2 + θ²)/θ⁴, the radial part of the metric
inline double metric_radial(double theta) {
    if (theta < kChartSeriesThreshold) return horner(taylor::m, theta * theta);
    const double t2 = theta * theta;
    return (t2 - 2.0 * one_minus_cos(theta)) / (t2 * t2);
}

/// (θ cos θ − sin θ)/θ³
inline double basis_a(double theta) {
    if (theta < kChartSeriesThreshold) return horner(taylor::a, theta * theta);
    return (theta * std::cos(theta) - std::sin(theta)) / (theta * theta * theta);
}

/// (θ sin θ − 2(1 − cos θ))/θ⁴
inline double basis_b(double theta) {
    if (theta < kChartSeriesThreshold) return horner(taylor::b, theta * theta);
    const double t2 = theta * theta;
    return (theta * std::sin(theta) - 2.0 * one_minus_cos(theta)) / (t2 * t2);
}

/// (sin θ − θ)/θ³
inline double christoffel_S(double theta) {
    if (theta < kChartSeriesThreshold) return horner(taylor::S, theta * theta);
    return (std::sin(theta) - theta) / (theta * theta * theta);
}

/// (2cos θ − 2 + θ sin θ)/(2θ²(1 − cos θ))
inline double christoffel_Q(double theta) {
    if (theta < kChartSeriesThreshold) return horner(taylor::Q, theta * theta);
    const double omc = one_minus_cos(theta);
    return (theta * std::sin(theta) - 2.0 * omc) / (2.0 * theta * theta * omc);
}

/// ((sin θ + θ)(cos θ − 1) + θ² sin θ)/(θ⁵(cos θ − 1))
inline double christoffel_P(double theta) {
    if (theta < kChartSeriesThreshold) return horner(taylor::P, theta * theta);
    const double cm1 = -one_minus_cos(theta);
    const double t2 = theta * theta;
    return ((std::sin(theta) + theta) * cm1 + t2 * std::sin(theta)) / (t2 * t2 * theta * cm1);
}

/// (2cos θ − 2 + θ²)/(2θ²(cos θ − 1)), the radial part of the inverse metric
inline double inverse_metric_radial(double theta) {
    if (theta < kChartSeriesThreshold) return horner(taylor::A, theta * theta);
    const double omc = one_minus_cos(theta);
    const double t2 = theta * theta;
    return -(t2 - 2.0 * omc) / (2.0 * t2 * omc);
}

}  // namespace so3flock::detail
