/**
 * @file test_kinetics.cpp
 * @brief Reaction-law unit tests: point values, clamping, input validation,
 *        monotonicity sampling, and the regularized variant's behavior.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include <fastlim/errors.hpp>
#include <fastlim/kinetics.hpp>

using fastlim::Kinetics;

TEST_CASE("product kinetics point values") {
    auto F = Kinetics::product();
    CHECK(F(0.0, 7.3) == 0.0);
    CHECK(F(7.3, 0.0) == 0.0);
    CHECK(F(2.0, 3.0) == 6.0);
    CHECK(F(1.0, 1.0) == 1.0);
}

TEST_CASE("power kinetics point values") {
    auto F = Kinetics::power(0.5, 0.5);
    CHECK(F(4.0, 9.0) == Catch::Approx(6.0).epsilon(1e-15));
    CHECK(F(0.0, 5.0) == 0.0);
    auto G = Kinetics::power(2.0, 1.0);
    CHECK(G(3.0, 4.0) == Catch::Approx(36.0).epsilon(1e-15));
}

TEST_CASE("negative arguments clamp to zero") {
    auto F = Kinetics::product();
    CHECK(F(-1.0, 5.0) == 0.0);
    CHECK(F(5.0, -1e-3) == 0.0);
    CHECK(F(-2.0, -2.0) == 0.0);
    auto G = Kinetics::power(0.5, 2.0);
    CHECK(G(-0.5, 3.0) == 0.0);
}

TEST_CASE("non-finite arguments are rejected") {
    auto F = Kinetics::product();
    const double nan = std::nan("");
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(F(nan, 1.0), fastlim::invalid_input);
    CHECK_THROWS_AS(F(1.0, inf), fastlim::invalid_input);
    CHECK_THROWS_AS(F(-inf, nan), fastlim::invalid_input);
}

TEST_CASE("power kinetics rejects bad exponents") {
    CHECK_THROWS_AS(Kinetics::power(0.0, 1.0), fastlim::invalid_input);
    CHECK_THROWS_AS(Kinetics::power(1.0, -0.5), fastlim::invalid_input);
    CHECK_THROWS_AS(Kinetics::power(std::nan(""), 1.0), fastlim::invalid_input);
}

namespace {

std::vector<Kinetics> sample_kinetics() {
    std::vector<Kinetics> out;
    out.push_back(Kinetics::product());
    out.push_back(Kinetics::power(0.5, 0.5));
    out.push_back(Kinetics::power(2.0, 1.5));
    std::vector<double> un = {0.0, 0.5, 1.0, 2.0};
    std::vector<double> vn = {0.0, 1.0, 2.0};
    std::vector<double> vals;
    for (double u : un)
        for (double v : vn) vals.push_back(u * v * (1.0 + 0.2 * u));
    out.push_back(Kinetics::tabulated(un, vn, vals));
    return out;
}

}  // namespace

TEST_CASE("kinetics are nonnegative, zero on the axes, and monotone") {
    std::mt19937_64 rng(20240816u);
    std::uniform_real_distribution<double> dist(0.0, 2.0);
    for (const auto& F : sample_kinetics()) {
        for (int trial = 0; trial < 10000; ++trial) {
            const double u = dist(rng), v = dist(rng);
            const double base = F(u, v);
            REQUIRE(base >= 0.0);
            CHECK(F(u, 0.0) == 0.0);
            CHECK(F(0.0, v) == 0.0);
            const double du = 0.25 * dist(rng), dv = 0.25 * dist(rng);
            CHECK(F(u + du, v) >= base);
            CHECK(F(u, v + dv) >= base);
        }
    }
}

TEST_CASE("regularization vanishes as mu shrinks") {
    // sup of |F_mu - F| over a log-spaced grid (resolving every mu scale)
    // must decrease strictly in mu; the deviation lives in the strip
    // min(u, v) < mu, so linear grids miss it for small mu
    auto base = Kinetics::product();
    std::vector<double> pts = {0.0};
    for (int j = 0; j <= 40; ++j) pts.push_back(2.0 * std::pow(10.0, -j / 8.0));
    std::vector<double> mus = {1e-1, 1e-2, 1e-3};
    std::vector<double> sups;
    for (double mu : mus) {
        auto Fm = Kinetics::product(mu);
        double sup = 0.0;
        for (double u : pts)
            for (double v : pts) sup = std::max(sup, std::fabs(Fm(u, v) - base(u, v)));
        sups.push_back(sup);
    }
    CHECK(sups[0] > 5.0 * sups[1]);
    CHECK(sups[1] > 5.0 * sups[2]);
    CHECK(sups[2] < 1e-2);
}

TEST_CASE("regularized power kinetics has bounded difference quotients at u = 0") {
    // raw u^m with m < 1 has an unbounded quotient at 0; the mu-mollified
    // version must not, since implicit substep solvers rely on it
    const double mu = 1e-2;
    for (double m : {0.3, 0.5, 0.75}) {
        auto F = Kinetics::power(m, 1.0, mu);
        double worst = 0.0;
        double prev_u = 0.0, prev_f = F(0.0, 1.0);
        for (int i = 1; i <= 400; ++i) {
            const double u = 1e-6 * i;
            const double f = F(u, 1.0);
            worst = std::max(worst, std::fabs(f - prev_f) / (u - prev_u));
            prev_u = u;
            prev_f = f;
        }
        INFO("m = " << m);
        CHECK(worst < 1e4);
        CHECK(std::isfinite(worst));
    }
}

TEST_CASE("tabulated kinetics validates its table") {
    std::vector<double> un = {0.0, 1.0, 2.0};
    std::vector<double> vn = {0.0, 1.0};
    std::vector<double> good = {0.0, 0.0, 0.0, 1.0, 0.0, 2.0};
    CHECK_NOTHROW(Kinetics::tabulated(un, vn, good));

    // wrong element count
    CHECK_THROWS_AS(Kinetics::tabulated(un, vn, {0.0, 0.0, 0.0}), fastlim::invalid_input);
    // nonzero on the u = 0 edge
    CHECK_THROWS_AS(Kinetics::tabulated(un, vn, {0.0, 0.5, 0.0, 1.0, 0.0, 2.0}),
                    fastlim::invalid_input);
    // decreasing along u
    CHECK_THROWS_AS(Kinetics::tabulated(un, vn, {0.0, 0.0, 0.0, 2.0, 0.0, 1.0}),
                    fastlim::invalid_input);
    // grid not increasing
    CHECK_THROWS_AS(Kinetics::tabulated({0.0, 2.0, 1.0}, vn, good), fastlim::invalid_input);
    // grid not anchored at zero
    CHECK_THROWS_AS(Kinetics::tabulated({0.5, 1.0, 2.0}, vn, good), fastlim::invalid_input);
    // negative entry
    CHECK_THROWS_AS(Kinetics::tabulated(un, vn, {0.0, 0.0, 0.0, -1.0, 0.0, 2.0}),
                    fastlim::invalid_input);
}

TEST_CASE("tabulated kinetics interpolates bilinearly and clamps to the hull") {
    std::vector<double> un = {0.0, 1.0, 2.0};
    std::vector<double> vn = {0.0, 2.0};
    std::vector<double> vals = {0.0, 0.0, 0.0, 2.0, 0.0, 4.0};  // F = u*v on the nodes
    auto F = Kinetics::tabulated(un, vn, vals);
    CHECK(F(0.5, 1.0) == Catch::Approx(0.5).epsilon(1e-14));
    CHECK(F(1.5, 2.0) == Catch::Approx(3.0).epsilon(1e-14));
    // outside the hull: clamped to the boundary value
    CHECK(F(5.0, 2.0) == Catch::Approx(4.0).epsilon(1e-14));
    CHECK(F(1.0, 10.0) == Catch::Approx(2.0).epsilon(1e-14));
}
