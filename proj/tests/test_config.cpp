/**
 * @file test_config.cpp
 * @brief INI schema: defaults, full parses, and rejection of malformed or
 *        unknown keys at parse time.
 */

#include <catch2/catch_amalgamated.hpp>

#include <fastlim/config.hpp>
#include <fastlim/report.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace fastlim;

TEST_CASE("empty config yields the documented defaults") {
    const RunConfig cfg = parse_config_text("");
    CHECK(cfg.spec.variant == DomainVariant::WholeLine);
    CHECK(cfg.spec.d_u == 1.0);
    CHECK(cfg.spec.d_v == 1.0);
    CHECK(cfg.spec.k == 1.0);
    CHECK(cfg.spec.U0 == 1.0);
    CHECK(cfg.spec.M == 1.0);
    CHECK(cfg.spec.T == 1.0);
    CHECK(cfg.grid.nx == 2000);
    CHECK(cfg.grid.x_left == -40.0);
    CHECK(cfg.grid.dt == 2e-4);
    CHECK(cfg.grid.snapshot_times.empty());
    CHECK(cfg.solver.diffusion_theta == 1.0);
    CHECK(cfg.solver.reaction_tol == 1e-12);
    CHECK(!cfg.sweep.has_value());
    CHECK(cfg.analysis.J == 4.0);
    CHECK(cfg.analysis.resolved_t_lo(cfg.spec.T) == Catch::Approx(0.05));
    CHECK(cfg.analysis.xi_shift == 4);
    CHECK(cfg.output_dir == "out");
    CHECK(cfg.seed == 1);
}

TEST_CASE("full config parses every section") {
    const std::string text = R"(
[problem]
variant = half
d_u = 2.0
d_v = 0.0
k = 500
U0 = 2.0
V0 = 1.0
M = 3.0
T = 2.0
kinetics = power
kinetics_m = 1.5
kinetics_n = 2.0
kinetics_mu = 0.01
initial = smoothed
smooth_width = 0.75

[grid]
x_left = 0.0
x_right = 60.0
nx = 1200
dt = 1e-3
snapshot_times = 0.5, 1.0, 2.0

[solver]
theta = 0.5
reaction_tol = 1e-10
max_reaction_iters = 60

[sweep]
axis = k
values = 1, 10, 100

[analysis]
J = 6.0
t_lo = 0.2
xi_shift = 8
monotone_slack = 0.05
pairs = 12
seed = 99

[output]
dir = results/run1
)";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.spec.variant == DomainVariant::HalfLine);
    CHECK(cfg.spec.d_u == 2.0);
    CHECK(cfg.spec.d_v == 0.0);
    CHECK(cfg.spec.k == 500.0);
    CHECK(cfg.spec.M == 3.0);
    CHECK(cfg.spec.kinetics.exponent_m() == 1.5);
    CHECK(cfg.spec.kinetics.mu() == 0.01);
    CHECK(cfg.spec.initial.kind == InitialKind::SmoothedStep);
    CHECK(cfg.spec.initial.smooth_width == 0.75);
    CHECK(cfg.grid.nx == 1200);
    REQUIRE(cfg.grid.snapshot_times.size() == 3);
    CHECK(cfg.grid.snapshot_times[2] == 2.0);
    CHECK(cfg.solver.diffusion_theta == 0.5);
    CHECK(cfg.solver.max_reaction_iters == 60);
    REQUIRE(cfg.sweep.has_value());
    CHECK(cfg.sweep->axis == SweepAxis::K);
    REQUIRE(cfg.sweep->values.size() == 3);
    CHECK(cfg.analysis.J == 6.0);
    CHECK(cfg.analysis.t_lo == 0.2);
    CHECK(cfg.analysis.resolved_t_lo(2.0) == 0.2);
    CHECK(cfg.analysis.xi_shift == 8);
    CHECK(cfg.analysis.monotone_slack == 0.05);
    CHECK(cfg.analysis.pairs == 12);
    CHECK(cfg.seed == 99);
    CHECK(cfg.output_dir == "results/run1");
}

TEST_CASE("perturbed initial data with bump lists") {
    const std::string text = R"(
[problem]
M = 2.0
initial = perturbed
bumps_u = -5.0:2.0:0.5, 3.0:1.0:0.25
bumps_v = 6.0:2.0:-0.5
)";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.spec.initial.kind == InitialKind::Perturbed);
    REQUIRE(cfg.spec.initial.bumps_u.size() == 2);
    REQUIRE(cfg.spec.initial.bumps_v.size() == 1);
    CHECK(cfg.spec.initial.bumps_u[0].center == -5.0);
    CHECK(cfg.spec.initial.bumps_u[1].amplitude == 0.25);
    CHECK(cfg.spec.initial.bumps_v[0].amplitude == -0.5);
}

TEST_CASE("tabulated kinetics parse inline tables") {
    const std::string text = R"(
[problem]
kinetics = tabulated
kinetics_u_grid = 0, 1, 2
kinetics_v_grid = 0, 1
kinetics_values = 0, 0, 0, 1, 0, 2
)";
    const RunConfig cfg = parse_config_text(text);
    CHECK(cfg.spec.kinetics(2.0, 1.0) == 2.0);
    CHECK(cfg.spec.kinetics(0.0, 1.0) == 0.0);
}

TEST_CASE("rejections carry the offending key") {
    // unknown section and key
    CHECK_THROWS_MATCHES(parse_config_text("[nonsense]\nx = 1\n"), invalid_input,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("nonsense")));
    CHECK_THROWS_MATCHES(parse_config_text("[problem]\nd_w = 1\n"), invalid_input,
                         Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("d_w")));
    // invalid numbers and domains
    CHECK_THROWS_AS(parse_config_text("[problem]\nd_u = fast\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[problem]\nd_u = 0\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[problem]\nd_u = 1.5x\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[solver]\ntheta = 0.7\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[problem]\nvariant = circle\n"), invalid_input);
    // grid constraints
    CHECK_THROWS_AS(parse_config_text("[grid]\nx_left = 1.0\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[grid]\nnx = 4\n"), invalid_input);
    // sweep constraints
    CHECK_THROWS_AS(parse_config_text("[sweep]\naxis = k\nvalues = 10, 1\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[sweep]\naxis = k\nvalues = -1, 1\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[sweep]\naxis = q\nvalues = 1\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[sweep]\naxis = k\n"), invalid_input);
    // initial-data key consistency
    CHECK_THROWS_AS(parse_config_text("[problem]\ninitial = sharp\nsmooth_width = 1\n"),
                    invalid_input);
    CHECK_THROWS_AS(parse_config_text("[problem]\ninitial = sharp\nbumps_u = 0:1:0.1\n"),
                    invalid_input);
    CHECK_THROWS_AS(parse_config_text("[problem]\ninitial_base = sharp\n"), invalid_input);
    CHECK_THROWS_AS(
        parse_config_text("[problem]\ninitial = perturbed\nbumps_u = 0:1\n"), invalid_input);
    // non-monotone tabulated kinetics are rejected at construction
    CHECK_THROWS_AS(parse_config_text("[problem]\nkinetics = tabulated\n"
                                      "kinetics_u_grid = 0, 1, 2\nkinetics_v_grid = 0, 1\n"
                                      "kinetics_values = 0, 0, 0, 2, 0, 1\n"),
                    invalid_input);
    // analysis sanity
    CHECK_THROWS_AS(parse_config_text("[analysis]\nxi_shift = -1\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[analysis]\nmass_ratio_max = 0.5\n"), invalid_input);
    CHECK_THROWS_AS(parse_config_text("[analysis]\npairs = 0\n"), invalid_input);
}

TEST_CASE("number formatting round-trips doubles exactly") {
    const double samples[] = {0.0,   -0.0,  0.1,         1.0 / 3.0, 3.141592653589793,
                              1e300, 1e-300, -2.5e-17,   6.02214076e23,
                              0x1.fffffffffffffp+1023,   0x1p-1074};
    for (double x : samples) {
        const std::string text = format_g17(x);
        // strtod instead of stod: stod raises out_of_range on subnormals
        CHECK(std::strtod(text.c_str(), nullptr) == x);
    }
}

TEST_CASE("config hashing is stable across runs") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("[problem]\nk = 100\n") == fnv1a64("[problem]\nk = 100\n"));
    CHECK(fnv1a64("[problem]\nk = 100\n") != fnv1a64("[problem]\nk = 101\n"));
    CHECK(hex64(0xcbf29ce484222325ull) == "cbf29ce484222325");
    CHECK(hex64(1) == "0000000000000001");
}

TEST_CASE("csv writer enforces the declared column count") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "fastlim_csv_test";
    fs::create_directories(dir);
    const fs::path path = dir / "table.csv";
    {
        CsvWriter csv(path.string(), {"t", "value"});
        csv.row({1.0, 0.5});
        csv.mixed_row({"2", "0.25"});
        CHECK_THROWS_AS(csv.row({1.0, 2.0, 3.0}), internal_error);
    }
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "t,value");
    REQUIRE(std::getline(in, line));
    CHECK(line == "1,0.5");
    fs::remove_all(dir);
}
