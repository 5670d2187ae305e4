#include "so3flock/weight.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "so3flock/errors.hpp"

namespace so3flock {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

WeightFn::WeightFn(Variant v) : v_(std::move(v)) {
    if (const auto* c = std::get_if<ConstantWeight>(&v_)) {
        if (!(c->value >= 0.0) || !std::isfinite(c->value)) {
            throw ConfigError("constant weight must be finite and nonnegative");
        }
    }
    if (const auto* t = std::get_if<TabulatedWeight>(&v_)) {
        if (t->samples.size() < 2) {
            throw ConfigError("tabulated weight needs at least two samples");
        }
        for (double s : t->samples) {
            if (!(s >= 0.0) || !std::isfinite(s)) {
                throw ConfigError("tabulated weight samples must be finite and nonnegative");
            }
        }
    }
}

double WeightFn::operator()(double d) const {
    return std::visit(
        overloaded{
            [&](const SinDist&) { return std::sin(d); },
            [&](const CosHalfDist&) { return std::cos(0.5 * d); },
            [&](const CosDistPlusOne&) { return std::cos(d) + 1.0; },
            [&](const ConstantWeight& c) { return c.value; },
            [&](const TabulatedWeight& t) {
                const auto last = static_cast<double>(t.samples.size() - 1);
                const double pos = std::clamp(d / std::numbers::pi, 0.0, 1.0) * last;
                const auto j = std::min(static_cast<std::size_t>(pos), t.samples.size() - 2);
                const double frac = pos - static_cast<double>(j);
                return (1.0 - frac) * t.samples[j] + frac * t.samples[j + 1];
            },
        },
        v_);
}

bool WeightFn::vanishes_at_cut_locus() const {
    return std::visit(overloaded{
                          [](const ConstantWeight&) { return false; },
                          [](const TabulatedWeight& t) { return t.samples.back() == 0.0; },
                          [](const auto&) { return true; },
                      },
                      v_);
}

std::string WeightFn::name() const {
    return std::visit(overloaded{
                          [](const SinDist&) { return std::string("sin_dist"); },
                          [](const CosHalfDist&) { return std::string("cos_half_dist"); },
                          [](const CosDistPlusOne&) { return std::string("cos_dist_plus_one"); },
                          [](const ConstantWeight&) { return std::string("constant"); },
                          [](const TabulatedWeight&) { return std::string("tabulated"); },
                      },
                      v_);
}

}  // namespace so3flock
