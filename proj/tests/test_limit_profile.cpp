/**
 * @file test_limit_profile.cpp
 * @brief Free-boundary roots against frozen high-precision values and an
 *        independent quadrature-bisection oracle, sign classification,
 *        profile evaluation, derivatives, and residual reports.
 */

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <fastlim/errors.hpp>
#include <fastlim/limit_profile.hpp>

#include "oracle.hpp"

using namespace fastlim;

namespace {

oracle::Case to_oracle(LimitCase c) {
    switch (c) {
        case LimitCase::Whole_DvPos: return oracle::Case::WholeDvPos;
        case LimitCase::Whole_DvZero: return oracle::Case::WholeDvZero;
        case LimitCase::Half_DvPos: return oracle::Case::HalfDvPos;
        case LimitCase::Half_DvZero: return oracle::Case::HalfDvZero;
    }
    return oracle::Case::WholeDvPos;
}

constexpr LimitCase all_cases[] = {LimitCase::Whole_DvPos, LimitCase::Whole_DvZero,
                                   LimitCase::Half_DvPos, LimitCase::Half_DvZero};

}  // namespace

TEST_CASE("free-boundary roots match frozen 40-digit references") {
    struct Golden {
        LimitCase c;
        LimitParams p;
        double a;
    };
    // references computed with 40-digit arithmetic on the raw integral
    // equations, rounded to double
    const Golden goldens[] = {
        {LimitCase::Whole_DvPos, {1.0, 1.0, 2.0, 1.0}, 0.6091403883479712504},
        {LimitCase::Whole_DvPos, {1.0, 0.5, 2.0, 1.0}, 0.7880866089002948689},
        {LimitCase::Whole_DvZero, {1.0, 0.0, 1.0, 1.0}, 0.7156690933440142834},
        {LimitCase::Whole_DvZero, {1.0, 0.0, 2.0, 1.0}, 1.08226447870706294},
        {LimitCase::Half_DvPos, {1.0, 1.0, 1.0, 1.0}, 0.9538725524089397468},
        {LimitCase::Half_DvPos, {1.0, 0.5, 2.0, 1.0}, 1.457622304120174657},
        {LimitCase::Half_DvZero, {1.0, 0.0, 1.0, 1.0}, 1.240125266627190991},
        {LimitCase::Half_DvZero, {4.0, 0.0, 1.0, 3.0}, 1.552267692122320396},
    };
    for (const auto& g : goldens) {
        const auto res = solve_free_boundary_detailed(g.p, g.c);
        INFO(to_string(g.c) << " d_u=" << g.p.d_u << " d_v=" << g.p.d_v << " U0=" << g.p.U0
                            << " V0=" << g.p.V0);
        CHECK(res.a == Catch::Approx(g.a).epsilon(1e-13));
        CHECK(res.residual <= 1e-12);
    }
}

TEST_CASE("symmetric whole-line case has a = 0") {
    const double a = solve_free_boundary({1.0, 1.0, 1.0, 1.0}, LimitCase::Whole_DvPos);
    CHECK(std::fabs(a) <= 1e-14);
    const double a2 = solve_free_boundary({3.7, 3.7, 0.42, 0.42}, LimitCase::Whole_DvPos);
    CHECK(std::fabs(a2) <= 1e-13);
}

TEST_CASE("positive-root cases return a > 0") {
    for (LimitCase c : {LimitCase::Whole_DvZero, LimitCase::Half_DvPos, LimitCase::Half_DvZero}) {
        LimitParams p{0.3, c == LimitCase::Half_DvPos ? 2.5 : 0.0, 0.7, 4.0};
        CHECK(solve_free_boundary(p, c) > 0.0);
    }
}

TEST_CASE("solver agrees with the quadrature-bisection oracle") {
    std::mt19937_64 rng(7155u);
    std::uniform_real_distribution<double> logd(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> conc(0.2, 5.0);
    for (LimitCase c : all_cases) {
        for (int trial = 0; trial < 12; ++trial) {
            LimitParams p;
            p.d_u = std::exp(logd(rng));
            p.d_v = detail::is_dv_pos(c) ? std::exp(logd(rng)) : 0.0;
            p.U0 = conc(rng);
            p.V0 = conc(rng);
            const auto res = solve_free_boundary_detailed(p, c);
            const double ref = oracle::free_boundary(to_oracle(c), p.d_u, p.d_v, p.U0, p.V0);
            INFO(to_string(c) << " d_u=" << p.d_u << " d_v=" << p.d_v << " U0=" << p.U0
                              << " V0=" << p.V0);
            CHECK(std::fabs(res.a - ref) <= 1e-10);
            CHECK(res.residual <= 1e-12);
        }
    }
}

TEST_CASE("sign classification") {
    CHECK(classify_sign(1, 1, 1, 1) == SignClass::Zero);
    CHECK(classify_sign(1, 4, 1, 1) == SignClass::Negative);
    CHECK(classify_sign(4, 1, 1, 1) == SignClass::Positive);
    CHECK(classify_sign(4, 1, 1, 5) == SignClass::Indeterminate);  // covered by no condition
    // flux-equal but d-unequal: the constant is exactly zero, so the strict
    // conditions must not claim a sign
    CHECK(classify_sign(1, 4, 2, 1) == SignClass::Indeterminate);
    const double a = solve_free_boundary({1.0, 4.0, 2.0, 1.0}, LimitCase::Whole_DvPos);
    CHECK(std::fabs(a) <= 1e-10);
    CHECK_THROWS_AS(classify_sign(0, 1, 1, 1), invalid_input);
}

TEST_CASE("classified signs agree with solved roots on a small lattice") {
    const double ds[] = {0.25, 1.0, 2.5};
    const double cs[] = {0.5, 1.0, 3.0};
    for (double d_u : ds)
        for (double d_v : ds)
            for (double U0 : cs)
                for (double V0 : cs) {
                    const SignClass sc = classify_sign(d_u, d_v, U0, V0);
                    if (sc == SignClass::Indeterminate) continue;
                    const double a =
                        solve_free_boundary({d_u, d_v, U0, V0}, LimitCase::Whole_DvPos);
                    INFO("d_u=" << d_u << " d_v=" << d_v << " U0=" << U0 << " V0=" << V0
                                << " a=" << a);
                    if (sc == SignClass::Zero) CHECK(std::fabs(a) <= 1e-10);
                    if (sc == SignClass::Negative) CHECK(a < 0.0);
                    if (sc == SignClass::Positive) CHECK(a > 0.0);
                }
}

TEST_CASE("profile values: interface, far fields, monotonicity, segregation") {
    for (LimitCase c : all_cases) {
        LimitParams p{1.3, detail::is_dv_pos(c) ? 0.6 : 0.0, 2.0, 1.5};
        const auto prof = make_profile(p, c);
        INFO(to_string(c) << " a=" << prof.a);

        CHECK(eval_profile_f(prof, prof.a) == 0.0);
        if (detail::is_whole(c)) {
            CHECK(eval_profile_f(prof, prof.a - 60.0 * std::sqrt(p.d_u)) ==
                  Catch::Approx(p.U0).epsilon(1e-14));
        } else {
            CHECK(eval_profile_f(prof, 0.0) == Catch::Approx(p.U0).epsilon(1e-14));
        }
        if (detail::is_dv_pos(c)) {
            CHECK(eval_profile_f(prof, prof.a + 60.0 * std::sqrt(p.d_v)) ==
                  Catch::Approx(-p.V0).epsilon(1e-14));
        } else {
            CHECK(eval_profile_f(prof, std::nextafter(prof.a, 1e300)) == -p.V0);
            CHECK(eval_profile_f(prof, prof.a + 1.0) == -p.V0);
        }

        const double lo = detail::is_whole(c) ? prof.a - 6.0 : 0.0;
        const double hi = prof.a + 6.0;
        double prev = eval_profile_f(prof, lo);
        for (int i = 1; i <= 2000; ++i) {
            const double eta = lo + (hi - lo) * i / 2000.0;
            const double f = eval_profile_f(prof, eta);
            CHECK(f <= prev + 1e-15);
            CHECK(f <= p.U0);
            CHECK(f >= -p.V0);
            prev = f;
        }
    }
}

TEST_CASE("limit (u, v) evaluation") {
    LimitParams p{1.0, 1.0, 2.0, 1.0};
    const auto prof = make_profile(p, LimitCase::Whole_DvPos);
    const double t = 2.7;
    auto [ui, vi] = eval_limit_uv(prof, prof.a * std::sqrt(t), t);
    CHECK(ui == 0.0);
    CHECK(vi == 0.0);

    // u v = 0 with bounds everywhere
    for (int i = -50; i <= 50; ++i) {
        auto [u, v] = eval_limit_uv(prof, 0.3 * i, t);
        CHECK(u * v == 0.0);
        CHECK(u >= 0.0);
        CHECK(u <= p.U0);
        CHECK(v >= 0.0);
        CHECK(v <= p.V0);
    }

    const auto sym = make_profile({1.0, 1.0, 1.0, 1.0}, LimitCase::Whole_DvPos);
    auto [us, vs] = eval_limit_uv(sym, 0.0, 5.0);
    CHECK(us == 0.0);
    CHECK(vs == 0.0);

    const auto dz = make_profile({1.0, 0.0, 1.0, 1.0}, LimitCase::Whole_DvZero);
    auto [ud, vd] = eval_limit_uv(dz, 2.0 * dz.a * std::sqrt(t), t);
    CHECK(ud == 0.0);
    CHECK(vd == dz.params.V0);

    CHECK_THROWS_AS(eval_limit_uv(prof, 0.0, 0.0), invalid_input);
    CHECK_THROWS_AS(eval_limit_uv(prof, 0.0, -1.0), invalid_input);
}

TEST_CASE("derivatives: sign, interface flux, and Stefan balance") {
    // symmetric case: both one-sided fluxes at eta = 0 are the same
    // expression on the same inputs, so they agree exactly
    const auto sym = make_profile({1.0, 1.0, 1.0, 1.0}, LimitCase::Whole_DvPos);
    const double dl = sym.params.d_u * profile_derivative(sym, 0.0, Side::Left);
    const double dr = sym.params.d_v * profile_derivative(sym, 0.0, Side::Right);
    CHECK(dl == dr);
    CHECK(dl < 0.0);

    for (LimitCase c : all_cases) {
        LimitParams p{0.8, detail::is_dv_pos(c) ? 2.0 : 0.0, 1.0, 3.0};
        const auto prof = make_profile(p, c);
        const double far_left = detail::is_whole(c) ? prof.a - 5.0 : 0.5 * prof.a;
        const double fpl = profile_derivative(prof, far_left, Side::Left);
        CHECK(std::isfinite(fpl));
        CHECK(fpl < 0.0);
        if (!detail::is_dv_pos(c)) {
            CHECK(profile_derivative(prof, prof.a + 1.0, Side::Right) == 0.0);
            CHECK(profile_derivative(prof, prof.a, Side::Right) == 0.0);
            // Stefan balance V0 a / 2 = -d_u f'(a-)
            const double lhs = 0.5 * p.V0 * prof.a;
            const double rhs = -p.d_u * profile_derivative(prof, prof.a, Side::Left);
            CHECK(lhs == Catch::Approx(rhs).epsilon(1e-10));
        } else {
            const double fl = p.d_u * profile_derivative(prof, prof.a, Side::Left);
            const double fr = p.d_v * profile_derivative(prof, prof.a, Side::Right);
            CHECK(fl == Catch::Approx(fr).epsilon(1e-10));
        }
    }
}

TEST_CASE("residual report") {
    const auto sym = make_profile({1.0, 1.0, 1.0, 1.0}, LimitCase::Whole_DvPos);
    auto rep = residual_report(sym);
    CHECK(rep.root_residual <= 1e-10);
    CHECK(rep.ode_residual_max <= 1e-10);
    CHECK(rep.interface_flux_residual <= 1e-10);
    CHECK(rep.stefan_residual == 0.0);

    const auto hz = make_profile({1.0, 0.0, 1.0, 1.0}, LimitCase::Half_DvZero);
    rep = residual_report(hz);
    CHECK(rep.stefan_residual <= 1e-10);
    CHECK(rep.interface_flux_residual == 0.0);

    // sensitivity: a perturbed constant must be flagged by the root residual
    auto bent = sym;
    bent.a += 0.01;
    CHECK(residual_report(bent).root_residual > 1e-4);

    std::mt19937_64 rng(99u);
    std::uniform_real_distribution<double> logd(std::log(0.1), std::log(10.0));
    std::uniform_real_distribution<double> conc(0.2, 5.0);
    for (LimitCase c : all_cases) {
        for (int trial = 0; trial < 10; ++trial) {
            LimitParams p;
            p.d_u = std::exp(logd(rng));
            p.d_v = detail::is_dv_pos(c) ? std::exp(logd(rng)) : 0.0;
            p.U0 = conc(rng);
            p.V0 = conc(rng);
            const auto prof = make_profile(p, c);
            rep = residual_report(prof);
            INFO(to_string(c) << " d_u=" << p.d_u << " d_v=" << p.d_v << " U0=" << p.U0
                              << " V0=" << p.V0 << " a=" << prof.a);
            CHECK(rep.root_residual <= 1e-12);
            CHECK(rep.ode_residual_max <= 1e-9 * (p.U0 + p.V0));
            if (detail::is_dv_pos(c)) {
                CHECK(rep.interface_flux_residual <= 1e-9);
            } else {
                CHECK(rep.stefan_residual <= 1e-9);
            }
        }
    }
}

TEST_CASE("scale covariance: (U0, V0) -> (c U0, c V0) fixes a and scales f") {
    const LimitParams base{1.7, 0.4, 2.2, 0.9};
    const auto prof = make_profile(base, LimitCase::Whole_DvPos);
    for (double c : {0.37, 2.9, 11.0}) {
        LimitParams scaled = base;
        scaled.U0 *= c;
        scaled.V0 *= c;
        const auto sp = make_profile(scaled, LimitCase::Whole_DvPos);
        CHECK(sp.a == Catch::Approx(prof.a).margin(1e-13));
        for (double eta : {-3.0, -1.0, -0.1, 0.2, 0.9, 4.0}) {
            CHECK(eval_profile_f(sp, eta) ==
                  Catch::Approx(c * eval_profile_f(prof, eta)).epsilon(1e-12).margin(1e-14));
        }
    }
}

TEST_CASE("swap symmetry: (d_u,d_v,U0,V0) <-> (d_v,d_u,V0,U0) mirrors the profile") {
    const LimitParams p{2.0, 0.5, 1.2, 3.1};
    const LimitParams q{0.5, 2.0, 3.1, 1.2};
    const auto fp = make_profile(p, LimitCase::Whole_DvPos);
    const auto fq = make_profile(q, LimitCase::Whole_DvPos);
    CHECK(fq.a == Catch::Approx(-fp.a).epsilon(1e-12));
    for (double eta : {-4.0, -1.3, 0.0, 0.4, 2.8}) {
        CHECK(eval_profile_f(fq, eta) ==
              Catch::Approx(-eval_profile_f(fp, -eta)).epsilon(1e-12).margin(1e-14));
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(solve_free_boundary({std::nan(""), 1, 1, 1}, LimitCase::Whole_DvPos),
                    invalid_input);
    CHECK_THROWS_AS(solve_free_boundary({1, 0, 1, 1}, LimitCase::Whole_DvPos), invalid_input);
    CHECK_THROWS_AS(solve_free_boundary({1, 0.5, 1, 1}, LimitCase::Whole_DvZero), invalid_input);
    CHECK_THROWS_AS(solve_free_boundary({-1, 1, 1, 1}, LimitCase::Half_DvPos), invalid_input);
    const auto half = make_profile({1.0, 1.0, 1.0, 1.0}, LimitCase::Half_DvPos);
    CHECK_THROWS_AS(eval_profile_f(half, -0.5), invalid_input);
    CHECK_THROWS_AS(profile_derivative(half, -0.5, Side::Left), invalid_input);
}
