#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "so3flock/errors.hpp"
#include "so3flock/sim.hpp"
#include "so3flock/splitmix.hpp"
#include "so3flock/verify.hpp"

using namespace so3flock;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("so3flock_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> read_lines(const fs::path& path) {
    std::ifstream in(path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    return lines;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) out.push_back(item);
    return out;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

SimConfig short_config() {
    SimConfig cfg;
    apply_preset(cfg, "fig1");
    cfg.n_particles = 4;
    cfg.t_end = 1.0;
    cfg.frame_stride = 10;
    cfg.seed = 11;
    return cfg;
}

}  // namespace

TEST(SplitMix64, ReferenceStream) {
    SplitMix64 zero(0);
    EXPECT_EQ(zero.next(), 0xE220A8397B1DCDAFULL);
    EXPECT_EQ(zero.next(), 0x6E789E6AA1B965F4ULL);
    EXPECT_EQ(zero.next(), 0x06C45D188009454FULL);
    SplitMix64 other(1234567);
    EXPECT_EQ(other.next(), 0x599ED017FB08FC85ULL);
    EXPECT_EQ(other.next(), 0x2C73F08458540FA5ULL);
    EXPECT_EQ(other.next(), 0x883EBCE5A3F27C77ULL);
    EXPECT_EQ(SplitMix64(1).uniform_open(), 0.566561575172281);
}

TEST(SplitMix64, OpenUnitInterval) {
    SplitMix64 rng(99);
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform_open();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(InitEnsemble, FollowsDocumentedDrawOrder) {
    SimConfig cfg;
    cfg.n_particles = 2;
    cfg.seed = 7;
    const Ensemble e = init_ensemble(cfg);
    const Vec3 ball0(0.026206445238339687, -0.018849387241605328, 0.6114916516796526);
    const Vec3 a0(0.1658605860561564, -0.09511620997706316, -0.5011369554345132);
    const Vec3 ball1(0.4191059193842412, 0.47093978929076413, 0.3779913637623077);
    const Vec3 a1(-0.17371720516444122, -0.7928801053099762, 0.9197481531461831);
    EXPECT_LT((log_so3(e.particles[0].R).vector() - ball0).norm(), 1e-14);
    EXPECT_LT((log_so3(e.particles[1].R).vector() - ball1).norm(), 1e-14);
    EXPECT_EQ(e.particles[0].a, a0);
    EXPECT_EQ(e.particles[1].a, a1);
}

TEST(InitEnsemble, DeterministicAndInsideTheSamplingBounds) {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 0xFFFFFFFFFFFFFFFFULL}) {
        SimConfig cfg;
        cfg.n_particles = 25;
        cfg.seed = seed;
        const Ensemble a = init_ensemble(cfg);
        const Ensemble b = init_ensemble(cfg);
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a.particles[i].R.matrix(), b.particles[i].R.matrix());
            EXPECT_EQ(a.particles[i].a, b.particles[i].a);
            for (std::size_t k = 0; k < a.size(); ++k) {
                EXPECT_LT(geodesic_distance(a.particles[i].R, a.particles[k].R), kPi);
            }
        }
        EXPECT_LE(energy(a), 3.0 * static_cast<double>(cfg.n_particles));
    }
}

TEST(Config, JsonRoundTripAndValidation) {
    SimConfig cfg;
    apply_preset(cfg, "circle");
    cfg.weight = TabulatedWeight{{1.0, 0.3, 0.0}};
    cfg.seed = 0xFFFFFFFFFFFFFFFFULL;
    cfg.kappa = 0.1 + 0.2;
    SimConfig back;
    apply_json(back, to_json(cfg));
    EXPECT_EQ(to_json(back), to_json(cfg));
    EXPECT_EQ(back.seed, cfg.seed);
    EXPECT_EQ(back.kappa, cfg.kappa);

    SimConfig bad;
    EXPECT_THROW(apply_json(bad, nlohmann::json{{"kapa", 1.0}}), ConfigError);
    EXPECT_THROW(apply_json(bad, nlohmann::json{{"weight", {{"name", "gaussian"}}}}), ConfigError);
    EXPECT_THROW(apply_json(bad, nlohmann::json{{"integrator", "euler"}}), ConfigError);
    EXPECT_THROW(apply_json(bad, nlohmann::json{{"dt", "small"}}), ConfigError);
    EXPECT_THROW(apply_json(bad, nlohmann::json{{"seed", -1}}), ConfigError);
    EXPECT_THROW(apply_preset(bad, "fig3"), ConfigError);

    SimConfig invalid;
    invalid.dt = 1.0;
    invalid.frame_stride = 10;
    invalid.t_end = 5.0;
    EXPECT_THROW(validate(invalid), ConfigError);
    invalid = SimConfig{};
    invalid.kappa = -1;
    EXPECT_THROW(validate(invalid), ConfigError);
    invalid = SimConfig{};
    invalid.init = "circle";
    EXPECT_THROW(validate(invalid), ConfigError);
}

TEST(Config, FileLayering) {
    const fs::path dir = scratch_dir("layering");
    std::ofstream(dir / "cfg.json") << R"({"seed": 42, "t_end": 3.5})";
    SimConfig cfg;
    apply_preset(cfg, "fig2");
    load_config_file(cfg, dir / "cfg.json");
    EXPECT_EQ(cfg.seed, 42u);
    EXPECT_EQ(cfg.t_end, 3.5);
    EXPECT_EQ(cfg.n_particles, 10u);
    std::ofstream(dir / "broken.json") << "{";
    EXPECT_THROW(load_config_file(cfg, dir / "broken.json"), ConfigError);
    EXPECT_THROW(load_config_file(cfg, dir / "missing.json"), ConfigError);
}

TEST(Run, FrameScheduleAndFreeMotion) {
    SimConfig cfg = short_config();
    cfg.kappa = 0.0;
    cfg.t_end = 1.05;
    cfg.dt = 0.01;
    cfg.frame_stride = 25;
    const RunResult r = run(cfg);
    std::vector<double> times;
    for (const auto& f : r.frames) times.push_back(f.diag.t);
    ASSERT_EQ(times.size(), 6u);
    EXPECT_EQ(times[0], 0.0);
    EXPECT_EQ(times[1], 25 * 0.01);
    EXPECT_EQ(times[4], 100 * 0.01);
    EXPECT_EQ(times[5], 105 * 0.01);
    for (const auto& f : r.frames) {
        EXPECT_NEAR(f.diag.energy, r.frames[0].diag.energy, 1e-12);
        for (const Vec3& b : f.ball) EXPECT_LE(b.norm(), kPi);
    }
}

TEST(Run, ReportsCutLocusViolationWithTime) {
    SimConfig cfg;
    cfg.n_particles = 2;
    cfg.init = "circle";
    cfg.circle_thetas = {0.0, kPi - 1e-10};
    cfg.circle_nus = {0.0, 0.0};
    cfg.weight = ConstantWeight{1e-6};
    cfg.kappa = 1.0;
    cfg.dt = 1e-2;
    cfg.t_end = 1.0;
    try {
        run(cfg);
        FAIL() << "expected CutLocusViolation";
    } catch (const CutLocusViolation& e) {
        EXPECT_NE(std::string(e.what()).find("at t = "), std::string::npos);
    }
}

TEST(Output, CsvLayoutAndRoundTrip) {
    const fs::path dir = scratch_dir("csv");
    write_frames_csv({}, 3, dir / "empty.csv");
    EXPECT_EQ(read_lines(dir / "empty.csv").size(), 1u);

    SimConfig one = short_config();
    one.n_particles = 1;
    one.t_end = 0.1;
    const RunResult single = run(one);
    write_frames_csv({single.frames.front()}, 1, dir / "one.csv");
    const auto lines = read_lines(dir / "one.csv");
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0], "t,p0_bx,p0_by,p0_bz,p0_ax,p0_ay,p0_az,energy,dissipation,max_misalignment");
    EXPECT_EQ(split(lines[1], ',').size(), 10u);

    const RunResult r = run(short_config());
    write_frames_csv(r.frames, 4, dir / "frames.csv", true);
    const auto rows = read_lines(dir / "frames.csv");
    ASSERT_EQ(rows.size(), r.frames.size() + 1);
    EXPECT_EQ(split(rows[0], ',').size(), 1u + 4 * 7 + 3);
    for (std::size_t j = 0; j < r.frames.size(); ++j) {
        const auto cells = split(rows[j + 1], ',');
        const FrameRecord& f = r.frames[j];
        EXPECT_EQ(std::stod(cells[0]), f.diag.t);
        for (std::size_t i = 0; i < 4; ++i) {
            for (int k = 0; k < 3; ++k) {
                EXPECT_EQ(std::stod(cells[1 + 7 * i + k]), f.ball[i][k]);
                EXPECT_EQ(std::stod(cells[4 + 7 * i + k]), f.a[i][k]);
            }
            EXPECT_EQ(cells[7 + 7 * i], f.wrapped[i] ? "1" : "0");
        }
        EXPECT_EQ(std::stod(cells[29]), f.diag.energy);
        EXPECT_EQ(std::stod(cells[30]), f.diag.dissipation);
        EXPECT_EQ(std::stod(cells[31]), f.diag.max_misalignment);
    }

    write_energy_dat(r.frames, dir / "energy.dat");
    const auto energy_rows = read_lines(dir / "energy.dat");
    ASSERT_EQ(energy_rows.size(), r.frames.size());
    EXPECT_EQ(std::stod(split(energy_rows.back(), ' ')[1]), r.frames.back().diag.energy);

    EXPECT_THROW(write_frames_csv(r.frames, 4, dir / "no_such_dir" / "x.csv"), IoError);
}

TEST(Output, WrapMarkerFlagsAntipodalJumps) {
    const Ensemble e = make_circle_ensemble({kPi - 1e-3}, {0.0});
    const Ensemble f = make_circle_ensemble({-kPi + 1e-3}, {0.0});
    const FrameRecord before = make_frame(e, 0.0, nullptr);
    const FrameRecord after = make_frame(f, 1.0, &before);
    EXPECT_FALSE(before.wrapped[0]);
    EXPECT_TRUE(after.wrapped[0]);
    const FrameRecord again = make_frame(f, 2.0, &after);
    EXPECT_FALSE(again.wrapped[0]);
}

TEST(Output, SummaryJson) {
    const fs::path dir = scratch_dir("summary");
    const SimConfig cfg = short_config();
    const RunResult r = run(cfg);
    write_summary_json(cfg, r, dir / "summary.json");
    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(j.at("schema"), "so3-flock/1");
    EXPECT_EQ(j.at("verdict"), to_string(r.verdict.kind));
    EXPECT_EQ(j.at("final_energy").get<double>(), r.frames.back().diag.energy);
    EXPECT_EQ(j.at("final_speeds").size(), cfg.n_particles);

    SimConfig echoed;
    apply_json(echoed, j.at("config"));
    const RunResult again = run(echoed);
    write_frames_csv(r.frames, cfg.n_particles, dir / "a.csv");
    write_frames_csv(again.frames, echoed.n_particles, dir / "b.csv");
    EXPECT_EQ(slurp(dir / "a.csv"), slurp(dir / "b.csv"));
}

TEST(Output, FlockingSummaryHasEinf) {
    const fs::path dir = scratch_dir("flocking");
    SimConfig cfg;
    cfg.init = "circle";
    cfg.n_particles = 3;
    cfg.circle_thetas = {0.0, 0.5, 1.0};
    cfg.circle_nus = {0.7, 0.7, 0.7};
    cfg.t_end = 1.0;
    const RunResult r = run(cfg);
    ASSERT_EQ(r.verdict.kind, DichotomyVerdict::Kind::Flocking);
    write_summary_json(cfg, r, dir / "summary.json");
    const auto j = nlohmann::json::parse(slurp(dir / "summary.json"));
    EXPECT_EQ(j.at("verdict"), "flocking");
    const double e_inf = j.at("e_inf").get<double>();
    for (double s : j.at("final_speeds").get<std::vector<double>>()) EXPECT_NEAR(2 * s * s, 2 * e_inf / 3, 1e-12);
}

TEST(CircleReduction, MatchesPlanarModel) {
    SimConfig cfg;
    apply_preset(cfg, "circle");
    cfg.t_end = 2.0;
    const CircleReduction r = compare_circle_reduction(cfg);
    EXPECT_LT(r.off_block, 1e-9);
    EXPECT_LT(r.planar_velocity, 1e-9);
    EXPECT_LT(r.theta_error, 1e-8);
    EXPECT_LT(r.nu_error, 1e-8);
}

TEST(Verify, FastLevelPassesAndCatchesBrokenChristoffel) {
    for (const SuiteResult& s : verify({})) EXPECT_TRUE(s.passed) << s.name << " " << s.max_error;

    VerifyOptions broken;
    broken.christoffel = [](const ChartPoint& p) {
        ChristoffelTensor g = christoffel(p);
        g(0, 1, 2) *= 1.001;
        return g;
    };
    bool caught = false;
    for (const SuiteResult& s : verify(broken)) {
        if (s.name == "christoffel_finite_difference") caught = !s.passed;
    }
    EXPECT_TRUE(caught);
}

TEST(Config, SchemaListsEveryKey) {
    const auto schema = nlohmann::json::parse(slurp(SO3FLOCK_SCHEMA_PATH));
    const auto& properties = schema.at("properties");
    const auto cfg = to_json(SimConfig{});
    for (const auto& [key, value] : cfg.items()) EXPECT_TRUE(properties.contains(key)) << key;
    for (const auto& [key, value] : properties.items()) {
        if (key != "circle_thetas" && key != "circle_nus") EXPECT_TRUE(cfg.contains(key)) << key;
    }
}
