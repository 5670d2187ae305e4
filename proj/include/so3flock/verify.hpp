#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "so3flock/charts.hpp"

namespace so3flock {

enum class VerifyLevel { Fast, Full };

struct SuiteResult {
    std::string name;
    bool passed = false;
    double max_error = 0.0;
    double tolerance = 0.0;
    std::size_t cases = 0;
    double seconds = 0.0;
};

using ChristoffelFn = std::function<ChristoffelTensor(const ChartPoint&)>;

struct VerifyOptions {
    VerifyLevel level = VerifyLevel::Fast;
    std::uint64_t seed = 20240607;
    /// Christoffel symbols under test; replaceable so a deliberately broken formula can be checked to fail.
    ChristoffelFn christoffel = [](const ChartPoint& p) { return so3flock::christoffel(p); };
};

/// Runs the cross-validation suites: triple transport agreement, closed form vs ODE oracle,
/// metric vs tangent-basis definition, Christoffel symbols vs finite differences, geodesic
/// residuals and an energy monotonicity run.
std::vector<SuiteResult> verify(const VerifyOptions& options = {});

}  // namespace so3flock
