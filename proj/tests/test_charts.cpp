#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "so3flock/charts.hpp"
#include "so3flock/errors.hpp"

using namespace so3flock;

namespace {

constexpr double kPi = std::numbers::pi;

Mat3 chart_matrix(const Mat3& base, const Vec3& x) { return base * oracle::expm(oracle::skew(x)); }

/// ½ g^{γκ}(∂_β g_{κα} + ∂_α g_{κβ} − ∂_κ g_{αβ}), metric from ½⟨∂R, ∂R⟩_F of finite-differenced charts.
double christoffel_fd(const Vec3& x, int g, int a, int b, double h) {
    auto metric_at = [](const Vec3& y) { return metric({Rotation::identity(), y}); };
    std::array<Mat3, 3> dg;
    for (int k = 0; k < 3; ++k) {
        const Vec3 e = h * Vec3::Unit(k);
        dg[k] = (metric_at(x + e) - metric_at(x - e)) / (2 * h);
    }
    const Mat3 ginv = metric_at(x).inverse();
    double v = 0;
    for (int k = 0; k < 3; ++k) v += 0.5 * ginv(g, k) * (dg[b](k, a) + dg[a](k, b) - dg[k](a, b));
    return v;
}

}  // namespace

TEST(TangentBasis, AtOriginIsBaseTimesGenerators) {
    oracle::Rng rng(20);
    const Mat3 base = rng.rotation();
    const auto basis = tangent_basis({Rotation::from_matrix(base), Vec3::Zero()});
    for (int a = 0; a < 3; ++a) {
        EXPECT_LT((basis[a] - base * oracle::skew(Vec3::Unit(a))).norm(), 1e-15);
    }
}

TEST(TangentBasis, MatchesFiniteDifference) {
    oracle::Rng rng(21);
    const Mat3 base = rng.rotation();
    const Rotation r0 = Rotation::from_matrix(base);
    std::vector<Vec3> points = {Vec3(0.7, 0, 0)};
    for (int i = 0; i < 50; ++i) points.push_back(rng.uniform(0.05, 3.0) * rng.unit());
    const double h = 1e-6;
    for (const Vec3& x : points) {
        const auto basis = tangent_basis({r0, x});
        for (int a = 0; a < 3; ++a) {
            const Vec3 e = h * Vec3::Unit(a);
            const Mat3 fd = (chart_matrix(base, x + e) - chart_matrix(base, x - e)) / (2 * h);
            EXPECT_LT((basis[a] - fd).cwiseAbs().maxCoeff(), 1e-8);
        }
    }
}

TEST(TangentBasis, IsTangent) {
    oracle::Rng rng(22);
    for (int i = 0; i < 200; ++i) {
        const ChartPoint p{Rotation::from_matrix(rng.rotation()), rng.uniform(0, kPi - 1e-3) * rng.unit()};
        const Mat3 r = chart_rotation(p).matrix();
        for (const Mat3& x : tangent_basis(p)) {
            const Mat3 body = r.transpose() * x;
            EXPECT_LT((body + body.transpose()).cwiseAbs().maxCoeff(), 1e-10);
        }
    }
}

TEST(Chart, RejectsPointsOutsideTheBall) {
    const ChartPoint p{Rotation::identity(), Vec3(kPi, 0, 0)};
    EXPECT_THROW(tangent_basis(p), OutOfChart);
    EXPECT_THROW(metric(p), OutOfChart);
    EXPECT_THROW(metric_inverse(p), OutOfChart);
    EXPECT_THROW(christoffel(p), OutOfChart);
    EXPECT_THROW(geodesic_residual(Vec3(2, 0, 0), 2.0), OutOfChart);
    EXPECT_THROW(transport_ode_solve(Vec3(0, 0, kPi), Vec3::UnitX(), 1000), OutOfChart);
    EXPECT_THROW(transport_exact_coords(Vec3(0, 0, 3), Vec3::UnitX(), 1.1), OutOfChart);
}

TEST(Metric, Examples) {
    EXPECT_EQ(metric({Rotation::identity(), Vec3::Zero()}), Mat3::Identity());
    const Mat3 g = metric({Rotation::identity(), Vec3(kPi / 2, 0, 0)});
    const Mat3 expected = Vec3(1, 8 / (kPi * kPi), 8 / (kPi * kPi)).asDiagonal();
    EXPECT_LT((g - expected).cwiseAbs().maxCoeff(), 1e-15);

    EXPECT_EQ(metric_inverse({Rotation::identity(), Vec3::Zero()}), Mat3::Identity());
    const Mat3 gi = metric_inverse({Rotation::identity(), Vec3(kPi / 2, 0, 0)});
    const Mat3 expected_inv = Vec3(1, kPi * kPi / 8, kPi * kPi / 8).asDiagonal();
    EXPECT_LT((gi - expected_inv).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Metric, MatchesDefinitionFromTangentBasis) {
    oracle::Rng rng(23);
    for (int i = 0; i < 300; ++i) {
        const double theta = i < 50 ? rng.uniform(0, 1e-3) : rng.uniform(0, kPi - 1e-3);
        const ChartPoint p{Rotation::from_matrix(rng.rotation()), theta * rng.unit()};
        const auto basis = tangent_basis(p);
        Mat3 def;
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) def(a, b) = 0.5 * (basis[a].array() * basis[b].array()).sum();
        }
        EXPECT_LT((def - metric(p)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(Metric, SymmetricPositiveDefiniteWithExactInverse) {
    oracle::Rng rng(24);
    for (int i = 0; i < 1000; ++i) {
        const ChartPoint p{Rotation::identity(), rng.uniform(0, kPi - 0.05) * rng.unit()};
        const Mat3 g = metric(p);
        EXPECT_LT((g - g.transpose()).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Mat3>(g).eigenvalues().minCoeff(), 0.0);
        EXPECT_LT((g * metric_inverse(p) - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Christoffel, VanishesAtOrigin) {
    const ChristoffelTensor gamma = christoffel({Rotation::identity(), Vec3::Zero()});
    for (int g = 0; g < 3; ++g)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) EXPECT_EQ(gamma(g, a, b), 0.0);
}

TEST(Christoffel, MatchesLeviCivitaFiniteDifferences) {
    oracle::Rng rng(25);
    std::vector<Vec3> points = {Vec3(1, 0, 0)};
    for (int i = 0; i < 100; ++i) points.push_back(rng.uniform(0.1, 3.0) * rng.unit());
    for (const Vec3& x : points) {
        const ChristoffelTensor gamma = christoffel({Rotation::identity(), x});
        for (int g = 0; g < 3; ++g) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    EXPECT_NEAR(gamma(g, a, b), christoffel_fd(x, g, a, b, 1e-5), 1e-6);
                    EXPECT_NEAR(gamma(g, a, b), gamma(g, b, a), 1e-12);
                }
            }
        }
    }
}

TEST(Christoffel, RaysAreGeodesics) {
    EXPECT_LT(geodesic_residual(Vec3(1, 0, 0), 0.5).norm(), 1e-12);
    EXPECT_EQ(geodesic_residual(Vec3::Zero(), 0.7), Vec3::Zero());
    oracle::Rng rng(26);
    for (int i = 0; i < 100; ++i) {
        const Vec3 u = rng.uniform(0.1, 3.0) * rng.unit();
        EXPECT_LT(geodesic_residual(u, rng.uniform(0, 1)).norm(), 1e-11);
    }
    for (int i = 0; i < 100; ++i) {
        const Vec3 u = rng.uniform(0, 1e-3) * rng.unit();
        EXPECT_LT(geodesic_residual(u, rng.uniform(0, 1)).norm(), 1e-18);
    }
}

TEST(Chart, ContinuousAcrossSeriesThresholds) {
    const Vec3 n = Vec3(0.3, -0.4, 0.866).normalized();
    const Vec3 v0(0.2, 0.9, -0.5);
    auto max_gamma_diff = [](const ChristoffelTensor& a, const ChristoffelTensor& b) {
        double d = 0;
        for (int g = 0; g < 3; ++g)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) d = std::max(d, std::abs(a(g, i, j) - b(g, i, j)));
        return d;
    };
    // Tight brackets around each switch point: any branch mismatch would show up here.
    for (double threshold : {1e-4, 0.5}) {
        const ChartPoint lo{Rotation::identity(), threshold * (1 - 1e-12) * n};
        const ChartPoint hi{Rotation::identity(), threshold * (1 + 1e-12) * n};
        EXPECT_LT((metric(lo) - metric(hi)).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT((metric_inverse(lo) - metric_inverse(hi)).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LT(max_gamma_diff(christoffel(lo), christoffel(hi)), 1e-10);
        EXPECT_LT((transport_exact_coords(lo.x, v0, 1.0) - transport_exact_coords(hi.x, v0, 1.0)).norm(), 1e-10);
    }
    // ±1% around 1e-4: the metric and the transport barely move there.
    const ChartPoint lo{Rotation::identity(), 0.99e-4 * n};
    const ChartPoint hi{Rotation::identity(), 1.01e-4 * n};
    EXPECT_LT((metric(lo) - metric(hi)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((transport_exact_coords(lo.x, v0, 1.0) - transport_exact_coords(hi.x, v0, 1.0)).norm(), 1e-10);
    // Γ is linear in x near the origin with entries of slope below 0.15, so over the
    // same bracket (|Δx| = 2e-6) it moves by up to about 3e-7.
    EXPECT_LT(max_gamma_diff(christoffel(lo), christoffel(hi)), 3e-7);
}

TEST(TransportCoords, Examples) {
    oracle::Rng rng(27);
    const Vec3 u = 2.0 * rng.unit();
    const Vec3 v0 = rng.vec();
    EXPECT_LT((transport_exact_coords(u, v0, 0.0) - v0).norm(), 1e-15);
    for (double t : {0.0, 0.3, 1.0}) EXPECT_LT((transport_exact_coords(u, u, t) - u).norm(), 1e-14);
    EXPECT_NEAR(transport_exact_coords(u, v0, 1.0).dot(u), v0.dot(u), 1e-12);

    EXPECT_LT((transport_ode_solve(u, 0.7 * u, 10000) - 0.7 * u).norm(), 1e-12);
    const Vec3 tiny = 1e-8 * rng.unit();
    EXPECT_LT((transport_ode_solve(tiny, v0, 1000) - v0).norm(), 1e-10);
}

TEST(TransportCoords, OdeMatchesClosedFormAndConservesProjection) {
    oracle::Rng rng(28);
    for (int i = 0; i < 100; ++i) {
        const Vec3 u = rng.uniform(0, kPi - 0.1) * rng.unit();
        const Vec3 v0 = rng.vec();
        const Vec3 ode = transport_ode_solve(u, v0, 10000);
        const Vec3 exact = transport_exact_coords(u, v0, 1.0);
        EXPECT_LT((ode - exact).norm(), 1e-9);
        EXPECT_NEAR(ode.dot(u), v0.dot(u), 1e-10);
        EXPECT_NEAR(exact.dot(u), v0.dot(u), 1e-12);
    }
}

TEST(TransportCoords, RejectsTooFewSteps) {
    EXPECT_THROW(transport_ode_solve(Vec3(1, 0, 0), Vec3(0, 1, 0), 99), std::invalid_argument);
}
