#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

namespace so3flock {

/// φ(d) = sin d
struct SinDist {};
/// φ(d) = cos(d/2)
struct CosHalfDist {};
/// φ(d) = cos d + 1
struct CosDistPlusOne {};
/// φ(d) = c. Does not vanish at π, so separations must stay below π.
struct ConstantWeight {
    double value = 1.0;
};
/// Piecewise-linear interpolation of samples taken uniformly on [0, π] (first at 0, last at π).
struct TabulatedWeight {
    std::vector<double> samples;
};

/// Communication weight as a function of geodesic distance d ∈ [0, π].
class WeightFn {
public:
    using Variant = std::variant<SinDist, CosHalfDist, CosDistPlusOne, ConstantWeight, TabulatedWeight>;

    WeightFn() : v_(CosHalfDist{}) {}
    WeightFn(Variant v);  // NOLINT(google-explicit-constructor)
    template <class T>
        requires std::is_constructible_v<Variant, T> && (!std::is_same_v<std::decay_t<T>, Variant>)
    WeightFn(T w) : WeightFn(Variant(std::move(w))) {}  // NOLINT(google-explicit-constructor)

    double operator()(double d) const;

    /// True when φ(π) = 0, in which case cut-locus pairs simply drop out of the sums.
    bool vanishes_at_cut_locus() const;

    /// Catalog name: sin_dist, cos_half_dist, cos_dist_plus_one, constant, tabulated.
    std::string name() const;

    const Variant& variant() const { return v_; }

private:
    Variant v_;
};

}  // namespace so3flock
