#pragma once

/**
 * @file problem.hpp
 * @brief Problem definitions shared by every module: domain variant, problem
 *        parameters, initial data, and the truncated grid.
 *
 * The whole-line problem lives on R with far-field data (U0, 0) on the left
 * and (0, V0) on the right; the half-line problem lives on (0, inf) with
 * u(0,t) = U0 pinned at the origin and far-field data (0, V0) on the right.
 * Grids truncate the unbounded domain with an 8*sqrt(d*T) penetration margin
 * so boundary contamination stays below double-precision-visible levels at
 * desk scale.
 */

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <fastlim/errors.hpp>
#include <fastlim/kinetics.hpp>

namespace fastlim {

enum class DomainVariant { WholeLine, HalfLine };

// The four self-similar limit regimes: domain variant crossed with whether
// the substrate diffuses (d_v > 0) or not (d_v = 0).
enum class LimitCase { Whole_DvPos, Whole_DvZero, Half_DvPos, Half_DvZero };

inline const char* to_string(DomainVariant v) {
    return v == DomainVariant::WholeLine ? "whole_line" : "half_line";
}

inline const char* to_string(LimitCase c) {
    switch (c) {
        case LimitCase::Whole_DvPos: return "whole_dv_pos";
        case LimitCase::Whole_DvZero: return "whole_dv_zero";
        case LimitCase::Half_DvPos: return "half_dv_pos";
        case LimitCase::Half_DvZero: return "half_dv_zero";
    }
    return "?";
}

struct Bump {
    double center = 0.0;
    double width = 1.0;
    double amplitude = 0.0;
};

enum class InitialKind { SharpStep, SmoothedStep, Perturbed };

struct InitialData {
    InitialKind kind = InitialKind::SharpStep;
    InitialKind base = InitialKind::SharpStep;  // underlying shape when kind == Perturbed
    double smooth_width = 0.0;                  // ramp width for SmoothedStep
    std::vector<Bump> bumps_u, bumps_v;         // additive perturbations

    static InitialData sharp_step() { return {}; }

    static InitialData smoothed_step(double width) {
        InitialData d;
        d.kind = InitialKind::SmoothedStep;
        d.smooth_width = width;
        return d;
    }

    static InitialData perturbed(const InitialData& base, std::vector<Bump> bumps_u,
                                 std::vector<Bump> bumps_v) {
        InitialData d = base;
        d.base = base.kind == InitialKind::Perturbed ? base.base : base.kind;
        d.kind = InitialKind::Perturbed;
        d.bumps_u = std::move(bumps_u);
        d.bumps_v = std::move(bumps_v);
        return d;
    }
};

struct ProblemSpec {
    DomainVariant variant = DomainVariant::WholeLine;
    double d_u = 1.0;  // diffusivity of u, > 0
    double d_v = 1.0;  // diffusivity of v, >= 0 (0 selects the ODE-substrate case)
    double k = 1.0;    // reaction rate, >= 0 (0 admitted for pure-diffusion checks)
    double U0 = 1.0;   // far-field / boundary value of u, > 0
    double V0 = 1.0;   // far-field value of v, > 0
    double M = 1.0;    // concentration cap, >= max(U0, V0)
    double T = 1.0;    // time horizon, > 0
    Kinetics kinetics = Kinetics::product();
    InitialData initial;
};

inline void validate(const ProblemSpec& s) {
    auto fin = [](double x) { return std::isfinite(x); };
    if (!fin(s.d_u) || !(s.d_u > 0.0)) throw invalid_input("ProblemSpec: d_u must be > 0");
    if (!fin(s.d_v) || s.d_v < 0.0) throw invalid_input("ProblemSpec: d_v must be >= 0");
    if (!fin(s.k) || s.k < 0.0) throw invalid_input("ProblemSpec: k must be >= 0");
    if (!fin(s.U0) || !(s.U0 > 0.0)) throw invalid_input("ProblemSpec: U0 must be > 0");
    if (!fin(s.V0) || !(s.V0 > 0.0)) throw invalid_input("ProblemSpec: V0 must be > 0");
    if (!fin(s.M) || s.M < std::max(s.U0, s.V0)) {
        throw invalid_input("ProblemSpec: M must be >= max(U0, V0)");
    }
    if (!fin(s.T) || !(s.T > 0.0)) throw invalid_input("ProblemSpec: T must be > 0");
    if (s.initial.kind == InitialKind::SmoothedStep ||
        (s.initial.kind == InitialKind::Perturbed && s.initial.base == InitialKind::SmoothedStep)) {
        if (!fin(s.initial.smooth_width) || !(s.initial.smooth_width > 0.0)) {
            throw invalid_input("InitialData: smoothed step needs width > 0");
        }
    }
    for (const auto* bumps : {&s.initial.bumps_u, &s.initial.bumps_v}) {
        for (const Bump& b : *bumps) {
            if (!fin(b.center) || !fin(b.amplitude) || !fin(b.width) || !(b.width > 0.0)) {
                throw invalid_input("InitialData: bump width must be > 0, all fields finite");
            }
        }
    }
}

inline LimitCase limit_case(const ProblemSpec& s) {
    if (s.variant == DomainVariant::WholeLine) {
        return s.d_v > 0.0 ? LimitCase::Whole_DvPos : LimitCase::Whole_DvZero;
    }
    return s.d_v > 0.0 ? LimitCase::Half_DvPos : LimitCase::Half_DvZero;
}

struct GridSpec {
    double x_left = -40.0;
    double x_right = 40.0;
    int nx = 2000;      // cell count; nodes run 0..nx
    double dt = 2e-4;
    std::vector<double> snapshot_times;  // sorted, within (0, T]

    double dx() const { return (x_right - x_left) / nx; }
    double x(int i) const { return x_left + i * dx(); }
    int nodes() const { return nx + 1; }
};

inline void validate_grid(const ProblemSpec& s, const GridSpec& g) {
    if (g.nx < 16) throw invalid_input("GridSpec: nx must be >= 16");
    if (!std::isfinite(g.dt) || !(g.dt > 0.0)) throw invalid_input("GridSpec: dt must be > 0");
    if (!(g.x_left < g.x_right)) throw invalid_input("GridSpec: x_left must be < x_right");
    if (s.variant == DomainVariant::WholeLine) {
        if (!(g.x_left < 0.0 && 0.0 < g.x_right)) {
            throw invalid_input("GridSpec: whole-line grid must straddle x = 0");
        }
    } else if (g.x_left != 0.0) {
        throw invalid_input("GridSpec: half-line grid must start at x = 0");
    }
    const double margin = 8.0 * std::sqrt(std::max(s.d_u, s.d_v) * s.T);
    const double reach = s.variant == DomainVariant::WholeLine
                             ? std::min(-g.x_left, g.x_right)
                             : g.x_right;
    if (reach < margin) {
        throw invalid_input("GridSpec: domain reach " + std::to_string(reach) +
                            " is under the 8*sqrt(d*T) truncation margin " +
                            std::to_string(margin));
    }
    double prev = 0.0;
    for (double t : g.snapshot_times) {
        if (!(t > prev) || t > s.T * (1.0 + 1e-12)) {
            throw invalid_input("GridSpec: snapshot times must increase within (0, T]");
        }
        prev = t;
    }
}

namespace detail {

// quintic smoothstep: C^2, 0 for r <= 0, 1 for r >= 1
inline double smoothstep5(double r) {
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 1.0;
    return r * r * r * (10.0 + r * (6.0 * r - 15.0));
}

inline double bump_sum(const std::vector<Bump>& bumps, double x) {
    double s = 0.0;
    for (const Bump& b : bumps) {
        const double r = (x - b.center) / b.width;
        if (std::fabs(r) < 1.0) {
            const double c = std::cos(1.5707963267948966 * r);
            s += b.amplitude * c * c;
        }
    }
    return s;
}

}  // namespace detail

// Samples initial data onto the grid nodes. The sharp step puts the jump at
// x = 0 with midpoint values at the jump node itself, which keeps the initial
// mass consistent to second order. Half-line data is u0 = 0, v0 = V0 with the
// boundary trace u0(0) = U0. Bump perturbations that leave [0, M] are
// rejected, not clamped.
inline std::pair<std::vector<double>, std::vector<double>>
sample_initial(const InitialData& data, const ProblemSpec& spec, const GridSpec& grid) {
    validate(spec);
    validate_grid(spec, grid);
    const int n = grid.nodes();
    std::vector<double> u0(n), v0(n);
    const double jump_tol = 1e-9 * grid.dx();
    const InitialKind shape = data.kind == InitialKind::Perturbed ? data.base : data.kind;

    for (int i = 0; i < n; ++i) {
        const double x = grid.x(i);
        if (spec.variant == DomainVariant::WholeLine) {
            if (shape == InitialKind::SharpStep) {
                if (x < -jump_tol) {
                    u0[i] = spec.U0;
                    v0[i] = 0.0;
                } else if (x > jump_tol) {
                    u0[i] = 0.0;
                    v0[i] = spec.V0;
                } else {
                    u0[i] = 0.5 * spec.U0;
                    v0[i] = 0.5 * spec.V0;
                }
            } else {
                const double w = data.smooth_width;
                const double r = detail::smoothstep5((x + 0.5 * w) / w);
                u0[i] = spec.U0 * (1.0 - r);
                v0[i] = spec.V0 * r;
            }
        } else {
            if (shape == InitialKind::SharpStep) {
                u0[i] = 0.0;
                v0[i] = spec.V0;
            } else {
                // ramp u down from the boundary value over [0, width]; v stays flat
                u0[i] = spec.U0 * (1.0 - detail::smoothstep5(x / data.smooth_width));
                v0[i] = spec.V0;
            }
        }
    }

    if (data.kind == InitialKind::Perturbed) {
        for (int i = 0; i < n; ++i) {
            const double x = grid.x(i);
            u0[i] += detail::bump_sum(data.bumps_u, x);
            v0[i] += detail::bump_sum(data.bumps_v, x);
        }
    }

    if (spec.variant == DomainVariant::HalfLine) u0[0] = spec.U0;  // boundary trace

    for (int i = 0; i < n; ++i) {
        if (u0[i] < 0.0 || u0[i] > spec.M || v0[i] < 0.0 || v0[i] > spec.M) {
            throw invalid_input("sample_initial: data leaves [0, M] at x = " +
                                std::to_string(grid.x(i)));
        }
    }
    return {std::move(u0), std::move(v0)};
}

}  // namespace fastlim
