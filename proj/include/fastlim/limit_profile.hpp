#pragma once

/**
 * @file limit_profile.hpp
 * @brief Closed-form self-similar limit profiles: the free-boundary constant
 *        a, the profile f(eta), w(x,t) = f(x/sqrt(t)), u = w+, v = -w-, and
 *        residual checks of the interface conditions.
 *
 * Each of the four cases reduces to a scalar root equation for a. All
 * Gaussian integrals are evaluated through erfcx so that the equations stay
 * finite and well scaled for |a| far from zero:
 *
 *   e^{a^2/4d} * Int_a^inf    e^{-s^2/4d} ds = sqrt(pi d) * erfcx( a/(2 sqrt(d)))
 *   e^{a^2/4d} * Int_-inf^a   e^{-s^2/4d} ds = sqrt(pi d) * erfcx(-a/(2 sqrt(d)))
 *   e^{a^2/4d} * Int_0^a      e^{-s^2/4d} ds = sqrt(pi d) * (erfcx(-z)-erfcx(z))/2
 *
 * On the solver's bracket every root equation is strictly monotone, so the
 * root is unique there; bisection plus a safeguarded Newton polish brings the
 * relative residual to machine level.
 */

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>
#include <vector>

#include <fastlim/erfcx.hpp>
#include <fastlim/errors.hpp>
#include <fastlim/problem.hpp>

namespace fastlim {

enum class Side { Left, Right };
enum class SignClass { Zero, Negative, Positive, Indeterminate };

inline const char* to_string(SignClass s) {
    switch (s) {
        case SignClass::Zero: return "zero";
        case SignClass::Negative: return "negative";
        case SignClass::Positive: return "positive";
        case SignClass::Indeterminate: return "indeterminate";
    }
    return "?";
}

struct LimitParams {
    double d_u = 1.0;
    double d_v = 1.0;
    double U0 = 1.0;
    double V0 = 1.0;
};

inline LimitParams limit_params(const ProblemSpec& s) {
    return {s.d_u, s.d_v, s.U0, s.V0};
}

namespace detail {

inline constexpr double sqrt_pi = 1.7724538509055160273;
inline constexpr double two_over_sqrt_pi = 1.1283791670955125739;

inline bool is_whole(LimitCase c) {
    return c == LimitCase::Whole_DvPos || c == LimitCase::Whole_DvZero;
}
inline bool is_dv_pos(LimitCase c) {
    return c == LimitCase::Whole_DvPos || c == LimitCase::Half_DvPos;
}

inline void validate_limit_params(const LimitParams& p, LimitCase c) {
    auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!ok(p.d_u) || !ok(p.U0) || !ok(p.V0) || !std::isfinite(p.d_v) || p.d_v < 0.0) {
        throw invalid_input("limit profile: need d_u, U0, V0 > 0 and d_v >= 0, all finite");
    }
    if (is_dv_pos(c) && !(p.d_v > 0.0)) {
        throw invalid_input("limit profile: DvPos case needs d_v > 0");
    }
    if (!is_dv_pos(c) && p.d_v != 0.0) {
        throw invalid_input("limit profile: DvZero case needs d_v == 0");
    }
}

// scaled left-reference integral in z-units:
//   whole line  L(z) = e^{z^2} Int_-inf^z ... = erfcx(-z)
//   half line   L(z) = e^{z^2} Int_0^z    ... = (erfcx(-z) - erfcx(z)) / 2
// both satisfy L'(z) = 2 z L(z) + 2/sqrt(pi)
inline double left_scaled(double z, bool whole) {
    if (whole) return erfcx(-z);
    return 0.5 * (erfcx(-z) - erfcx(z));
}

inline double left_scaled_derivative(double z, bool whole) {
    return 2.0 * z * left_scaled(z, whole) + two_over_sqrt_pi;
}

struct EquationSides {
    double lhs = 0.0, rhs = 0.0;
};

// Root equations, both sides positive near the root:
//   DvPos : d_u U0 sqrt(pi d_v) erfcx(z_v)   =  d_v V0 sqrt(pi d_u) L(z_u)
//   DvZero: V0 sqrt(pi) z_u L(z_u)           =  U0
inline EquationSides equation_sides(const LimitParams& p, LimitCase c, double a) {
    const bool whole = is_whole(c);
    const double z_u = a / (2.0 * std::sqrt(p.d_u));
    if (is_dv_pos(c)) {
        const double z_v = a / (2.0 * std::sqrt(p.d_v));
        return {p.d_u * p.U0 * std::sqrt(M_PI * p.d_v) * erfcx(z_v),
                p.d_v * p.V0 * std::sqrt(M_PI * p.d_u) * left_scaled(z_u, whole)};
    }
    return {sqrt_pi * p.V0 * z_u * left_scaled(z_u, whole), p.U0};
}

inline double equation_residual(const LimitParams& p, LimitCase c, double a) {
    const EquationSides s = equation_sides(p, c, a);
    return s.lhs - s.rhs;  // lhs, rhs never both infinite: the blowups are on opposite ends
}

inline double equation_residual_derivative(const LimitParams& p, LimitCase c, double a) {
    const bool whole = is_whole(c);
    const double z_u = a / (2.0 * std::sqrt(p.d_u));
    if (is_dv_pos(c)) {
        const double z_v = a / (2.0 * std::sqrt(p.d_v));
        return 0.5 * sqrt_pi *
               (p.d_u * p.U0 * erfcx_derivative(z_v) -
                p.d_v * p.V0 * left_scaled_derivative(z_u, whole));
    }
    const double L = left_scaled(z_u, whole);
    return sqrt_pi * p.V0 * ((1.0 + 2.0 * z_u * z_u) * L + two_over_sqrt_pi * z_u) /
           (2.0 * std::sqrt(p.d_u));
}

inline double relative_residual(const LimitParams& p, LimitCase c, double a) {
    const EquationSides s = equation_sides(p, c, a);
    const double scale = std::max({std::fabs(s.lhs), std::fabs(s.rhs), 1e-300});
    return std::fabs(s.lhs - s.rhs) / scale;
}

#if !defined(NDEBUG)
// Monotonicity of the residual on the solver's bracket is the uniqueness
// argument; sample it. Infinite samples (erfcx overflow at the far ends) are
// allowed to repeat.
inline void assert_monotone_residual(const LimitParams& p, LimitCase c, double lo, double hi) {
    double prev = equation_residual(p, c, lo);
    const bool decreasing = is_dv_pos(c);
    for (int i = 1; i <= 1000; ++i) {
        const double x = lo + (hi - lo) * i / 1000.0;
        const double r = equation_residual(p, c, x);
        if (std::isfinite(prev) && std::isfinite(r) && r != prev) {
            assert(decreasing ? (r < prev) : (r > prev));
        } else {
            assert(decreasing ? (r <= prev) : (r >= prev));
        }
        prev = r;
    }
}
#endif

}  // namespace detail

struct FreeBoundaryResult {
    double a = 0.0;
    double residual = 0.0;  // |lhs - rhs| / max(lhs, rhs) at a
    int iterations = 0;     // residual evaluations spent
};

// Solves the case's root equation for the free-boundary constant a.
// Whole_DvPos admits either sign; the other three cases have a unique root
// with a > 0 (the Half_DvZero equation is even in a, so the bracket starts
// at 0 to select the positive root).
inline FreeBoundaryResult solve_free_boundary_detailed(const LimitParams& p, LimitCase c) {
    detail::validate_limit_params(p, c);
    const bool two_sided = c == LimitCase::Whole_DvPos;

    auto resid = [&](double a) { return detail::equation_residual(p, c, a); };

    double hi = 10.0 * (std::sqrt(p.d_u) + std::sqrt(p.d_v)) *
                (1.0 + std::fabs(std::log(p.U0 / p.V0)));
    double lo = two_sided ? -hi : 0.0;
    int evals = 0;
    double f_lo = resid(lo), f_hi = resid(hi);
    evals += 2;
    for (int tries = 0; (f_lo > 0) == (f_hi > 0); ++tries) {
        if (tries >= 60) {
            throw internal_error("solve_free_boundary: no sign change on [" +
                                 std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
        hi *= 2.0;
        if (two_sided) lo = -hi;
        f_lo = resid(lo);
        f_hi = resid(hi);
        evals += 2;
    }
#if !defined(NDEBUG)
    detail::assert_monotone_residual(p, c, lo, hi);
#endif

    // bisect to a short interval, then polish with bracket-guarded Newton
    while (hi - lo > 1e-3 * (1.0 + std::fabs(lo) + std::fabs(hi)) && evals < 300) {
        const double mid = 0.5 * (lo + hi);
        const double f_mid = resid(mid);
        ++evals;
        if ((f_mid > 0) == (f_lo > 0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    double x = 0.5 * (lo + hi);
    double best_x = x, best_rel = detail::relative_residual(p, c, x);
    for (int it = 0; it < 100; ++it) {
        const double r = resid(x);
        ++evals;
        if ((r > 0) == (f_lo > 0)) {
            lo = x;
        } else {
            hi = x;
        }
        const double rel = detail::relative_residual(p, c, x);
        if (rel < best_rel) {
            best_rel = rel;
            best_x = x;
        }
        if (rel == 0.0 || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() *
                                          (1.0 + std::fabs(x))) {
            break;
        }
        const double dr = detail::equation_residual_derivative(p, c, x);
        double next = x - r / dr;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        if (next == x) break;
        x = next;
    }

    FreeBoundaryResult out;
    out.a = best_x;
    out.residual = best_rel;
    out.iterations = evals;
    if (!(out.residual <= 1e-12)) {
        throw internal_error("solve_free_boundary: residual " + std::to_string(out.residual) +
                             " exceeds 1e-12 at a = " + std::to_string(out.a));
    }
    return out;
}

inline double solve_free_boundary(const LimitParams& p, LimitCase c) {
    return solve_free_boundary_detailed(p, c).a;
}

// Sufficient sign conditions for the Whole_DvPos constant. The flux
// comparison sqrt(d_u) U0 vs sqrt(d_v) V0 must be strict: with equal fluxes
// the constant is exactly zero no matter how the diffusivities compare, so
// a d-strict but flux-equal cell stays Indeterminate.
inline SignClass classify_sign(double d_u, double d_v, double U0, double V0) {
    auto ok = [](double x) { return std::isfinite(x) && x > 0.0; };
    if (!ok(d_u) || !ok(d_v) || !ok(U0) || !ok(V0)) {
        throw invalid_input("classify_sign: all inputs must be finite and > 0");
    }
    const double flux_u = std::sqrt(d_u) * U0;
    const double flux_v = std::sqrt(d_v) * V0;
    if (d_u == d_v && U0 == V0) return SignClass::Zero;
    if (d_u <= d_v && flux_u < flux_v) return SignClass::Negative;
    if (d_u >= d_v && flux_u > flux_v) return SignClass::Positive;
    return SignClass::Indeterminate;
}

// Self-similar profile with its free-boundary constant and precomputed branch
// normalizers. Whole-line left and DvPos right normalizers are stored in
// e^{a^2/4d}-scaled form (the erfcx forms above) so they stay finite for any
// a; the half-line left normalizer sqrt(pi d_u) erf(z_a) is bounded and is
// stored unscaled.
struct SelfSimilarProfile {
    LimitCase limit_case = LimitCase::Whole_DvPos;
    double a = 0.0;
    LimitParams params;
    double denom_left = 0.0;   // scaled on the whole line, unscaled on the half line
    double denom_right = 0.0;  // scaled; 0 for DvZero cases
};

inline SelfSimilarProfile make_profile(const LimitParams& p, LimitCase c) {
    detail::validate_limit_params(p, c);
    SelfSimilarProfile prof;
    prof.limit_case = c;
    prof.params = p;
    prof.a = solve_free_boundary(p, c);
    const double z_u = prof.a / (2.0 * std::sqrt(p.d_u));
    prof.denom_left = detail::is_whole(c)
                          ? std::sqrt(M_PI * p.d_u) * erfcx(-z_u)
                          : std::sqrt(M_PI * p.d_u) * std::erf(z_u);
    if (detail::is_dv_pos(c)) {
        const double z_v = prof.a / (2.0 * std::sqrt(p.d_v));
        prof.denom_right = std::sqrt(M_PI * p.d_v) * erfcx(z_v);
    }
    return prof;
}

inline SelfSimilarProfile make_profile(const ProblemSpec& s) {
    return make_profile(limit_params(s), limit_case(s));
}

namespace detail {

// ratio erfc(p)/erfc(q) for p >= q, safe against underflow of both terms:
// for q >= 0 go through erfcx, where the exponent difference is <= 0; for
// q < 0 the denominator is in (1, 2) and direct evaluation is exact enough
inline double erfc_ratio(double p, double q) {
    double r;
    if (q >= 0.0) {
        r = erfcx(p) / erfcx(q) * std::exp(q * q - p * p);
    } else {
        r = std::erfc(p) / std::erfc(q);
    }
    return std::clamp(r, 0.0, 1.0);
}

}  // namespace detail

// f(eta): piecewise per case; zero at eta = a (left-continuous value there),
// monotone nonincreasing overall. DvZero cases jump to -V0 for eta > a.
inline double eval_profile_f(const SelfSimilarProfile& prof, double eta) {
    const LimitParams& p = prof.params;
    if (std::isnan(eta)) throw invalid_input("eval_profile_f: eta is NaN");
    if (!detail::is_whole(prof.limit_case) && eta < 0.0) {
        throw invalid_input("eval_profile_f: half-line profile needs eta >= 0");
    }
    if (eta == prof.a) return 0.0;
    if (eta < prof.a) {
        const double su = 2.0 * std::sqrt(p.d_u);
        double ratio;
        if (detail::is_whole(prof.limit_case)) {
            ratio = detail::erfc_ratio(-eta / su, -prof.a / su);
        } else {
            ratio = std::clamp(std::erf(eta / su) / std::erf(prof.a / su), 0.0, 1.0);
        }
        return p.U0 * (1.0 - ratio);
    }
    if (!detail::is_dv_pos(prof.limit_case)) return -p.V0;
    const double sv = 2.0 * std::sqrt(p.d_v);
    const double ratio = detail::erfc_ratio(eta / sv, prof.a / sv);
    return -p.V0 * (1.0 - ratio);
}

// (u, v) = (w+, -w-) at w = f(x/sqrt(t))
inline std::pair<double, double> eval_limit_uv(const SelfSimilarProfile& prof, double x,
                                               double t) {
    if (!(t > 0.0)) throw invalid_input("eval_limit_uv: t must be > 0");
    const double f = eval_profile_f(prof, x / std::sqrt(t));
    return {std::max(f, 0.0), std::max(-f, 0.0)};
}

// One-sided derivative of the piecewise formula, in closed form. The side
// argument matters only at eta = a; elsewhere both one-sided values agree.
inline double profile_derivative(const SelfSimilarProfile& prof, double eta, Side side) {
    const LimitParams& p = prof.params;
    if (std::isnan(eta)) throw invalid_input("profile_derivative: eta is NaN");
    if (!detail::is_whole(prof.limit_case) && eta < 0.0) {
        throw invalid_input("profile_derivative: half-line profile needs eta >= 0");
    }
    const bool left_branch = eta < prof.a || (eta == prof.a && side == Side::Left);
    if (left_branch) {
        const double z = eta / (2.0 * std::sqrt(p.d_u));
        if (detail::is_whole(prof.limit_case)) {
            const double z_a = prof.a / (2.0 * std::sqrt(p.d_u));
            return -p.U0 * std::exp(z_a * z_a - z * z) / prof.denom_left;
        }
        return -p.U0 * std::exp(-z * z) / prof.denom_left;
    }
    if (!detail::is_dv_pos(prof.limit_case)) return 0.0;  // constant branch
    const double z = eta / (2.0 * std::sqrt(p.d_v));
    const double z_a = prof.a / (2.0 * std::sqrt(p.d_v));
    return -p.V0 * std::exp(z_a * z_a - z * z) / prof.denom_right;
}

// Closed-form second derivative of the branch formulas; each branch solves
// d f'' + (eta/2) f' = 0, so f'' = -(eta / 2d) f' with the branch's d.
inline double profile_second_derivative(const SelfSimilarProfile& prof, double eta, Side side) {
    const bool left_branch = eta < prof.a || (eta == prof.a && side == Side::Left);
    const double d = left_branch ? prof.params.d_u : prof.params.d_v;
    if (!left_branch && !detail::is_dv_pos(prof.limit_case)) return 0.0;
    return -eta / (2.0 * d) * profile_derivative(prof, eta, side);
}

struct ProfileResidualReport {
    double root_residual = 0.0;
    double ode_residual_max = 0.0;
    double interface_flux_residual = 0.0;  // DvPos cases; 0 otherwise
    double stefan_residual = 0.0;          // DvZero cases; 0 otherwise
};

// Quantifies how well the constructed profile satisfies its defining
// conditions: the root equation at the stored a, the branch ODEs on a test
// grid, and the interface condition (flux continuity of w for DvPos, the
// Stefan balance for DvZero).
inline ProfileResidualReport residual_report(const SelfSimilarProfile& prof) {
    const LimitParams& p = prof.params;
    ProfileResidualReport rep;
    rep.root_residual = detail::relative_residual(p, prof.limit_case, prof.a);

    const double band = 1e-6;
    auto scan_side = [&](double from, double to, Side side, double d) {
        if (!(from < to)) return;
        for (int i = 0; i < 400; ++i) {
            const double eta = from + (to - from) * i / 399.0;
            const double r = d * profile_second_derivative(prof, eta, side) +
                             0.5 * eta * profile_derivative(prof, eta, side);
            rep.ode_residual_max = std::max(rep.ode_residual_max, std::fabs(r));
        }
    };
    const double left_from = detail::is_whole(prof.limit_case)
                                 ? prof.a - 8.0 * std::sqrt(p.d_u)
                                 : std::max(0.0, prof.a - 8.0 * std::sqrt(p.d_u));
    scan_side(left_from, prof.a - band, Side::Left, p.d_u);
    const double right_d = detail::is_dv_pos(prof.limit_case) ? p.d_v : p.d_u;
    scan_side(prof.a + band, prof.a + 8.0 * std::sqrt(right_d), Side::Right,
              detail::is_dv_pos(prof.limit_case) ? p.d_v : 0.0);

    const double flux_left = p.d_u * profile_derivative(prof, prof.a, Side::Left);
    if (detail::is_dv_pos(prof.limit_case)) {
        const double flux_right = p.d_v * profile_derivative(prof, prof.a, Side::Right);
        rep.interface_flux_residual = std::fabs(flux_left - flux_right) / std::fabs(flux_left);
    } else {
        rep.stefan_residual = std::fabs(0.5 * p.V0 * prof.a + flux_left) /
                              (0.5 * p.V0 * std::fabs(prof.a) + 1e-300);
    }
    return rep;
}

}  // namespace fastlim
