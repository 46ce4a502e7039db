#pragma once

/**
 * @file analysis.hpp
 * @brief Quantitative verification of trajectories: windowed L2 distance to
 *        the self-similar profile, rescaled long-time error, segregation and
 *        reaction-mass integrals, free-boundary tracking with a sqrt-law fit,
 *        and the comparison / translate-contraction property checks.
 *
 * All integrals use the trapezoidal rule on the stored grid and snapshot
 * times; applied to fields that are exact at the nodes the quadrature error
 * is O(dx^2) in space and O(dt_snap^2) in time.
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <fastlim/errors.hpp>
#include <fastlim/limit_profile.hpp>
#include <fastlim/solver.hpp>

namespace fastlim {

enum class SweepAxis { K, Dv, Time };

inline std::string to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::K: return "k";
        case SweepAxis::Dv: return "d_v";
        case SweepAxis::Time: return "time";
    }
    return "?";
}

struct SweepEntry {
    double axis_value = 0.0;
    double l2_window_error_u = 0.0;
    double l2_window_error_v = 0.0;
    double segregation_integral = 0.0;
    double reaction_mass = 0.0;
    double fitted_a = std::numeric_limits<double>::quiet_NaN();
    double fitted_a_stderr = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceReport {
    SweepAxis sweep_axis = SweepAxis::K;
    std::vector<SweepEntry> entries;  // sorted by axis_value
    std::optional<SelfSimilarProfile> profile;
};

inline void validate(const ConvergenceReport& r) {
    for (std::size_t j = 0; j < r.entries.size(); ++j) {
        const SweepEntry& e = r.entries[j];
        if (j > 0 && !(e.axis_value > r.entries[j - 1].axis_value)) {
            throw invalid_input("ConvergenceReport: entries must be sorted by axis value");
        }
        const double errs[] = {e.l2_window_error_u, e.l2_window_error_v, e.segregation_integral,
                               e.reaction_mass};
        for (double x : errs) {
            if (!std::isfinite(x) || x < 0.0) {
                throw invalid_input("ConvergenceReport: error fields must be finite and >= 0");
            }
        }
    }
}

namespace detail {

// Node index range [first, last] covering the window [w_lo, w_hi]; nodes
// strictly outside are dropped, so a misaligned window is truncated inward.
inline std::pair<int, int> window_nodes(const GridSpec& g, double w_lo, double w_hi) {
    if (w_lo < g.x_left - 1e-12 || w_hi > g.x_right + 1e-12) {
        throw invalid_input("analysis: window exceeds the grid");
    }
    const double dx = g.dx();
    int first = static_cast<int>(std::ceil((w_lo - g.x_left) / dx - 1e-9));
    int last = static_cast<int>(std::floor((w_hi - g.x_left) / dx + 1e-9));
    first = std::max(first, 0);
    last = std::min(last, g.nx);
    return {first, last};
}

// Trapezoidal integral of fn(i) over nodes [first, last].
template <typename Fn>
inline double trapezoid_nodes(double dx, int first, int last, Fn&& fn) {
    if (last <= first) return 0.0;
    double s = 0.5 * (fn(first) + fn(last));
    for (int i = first + 1; i < last; ++i) s += fn(i);
    return s * dx;
}

inline std::pair<double, double> window_for(const SelfSimilarProfile& prof, double half_width) {
    const bool whole = prof.limit_case == LimitCase::Whole_DvPos ||
                       prof.limit_case == LimitCase::Whole_DvZero;
    return {whole ? -half_width : 0.0, half_width};
}

// Snapshot indices with t in [t_lo, t_hi], with relative slack on both ends.
inline std::vector<std::size_t> snapshots_in(const Trajectory& traj, double t_lo, double t_hi) {
    std::vector<std::size_t> idx;
    for (std::size_t j = 0; j < traj.snapshots.size(); ++j) {
        const double t = traj.snapshots[j].t;
        if (t >= t_lo * (1.0 - 1e-9) - 1e-300 && t <= t_hi * (1.0 + 1e-9)) idx.push_back(j);
    }
    return idx;
}

// Space-time trapezoid of per-snapshot spatial integrals: values[j] pairs
// with times[j]; returns sum of 0.5 (t_{j+1}-t_j)(I_j + I_{j+1}).
inline double trapezoid_time(const std::vector<double>& times, const std::vector<double>& vals) {
    double s = 0.0;
    for (std::size_t j = 1; j < times.size(); ++j) {
        s += 0.5 * (times[j] - times[j - 1]) * (vals[j] + vals[j - 1]);
    }
    return s;
}

}  // namespace detail

// Space-time L2 distance between the trajectory and the limit profile over
// the window (-J, J) (whole line) or (0, J) (half line) and times [t_lo, T].
// Returns (err_u, err_v), each the square root of the corresponding integral.
inline std::pair<double, double> l2_window_error(const Trajectory& traj,
                                                 const SelfSimilarProfile& prof, double J,
                                                 double t_lo) {
    if (!(J >= 0.0) || !std::isfinite(J)) throw invalid_input("l2_window_error: bad J");
    if (!(t_lo > 0.0)) throw invalid_input("l2_window_error: t_lo must be > 0");
    const auto [w_lo, w_hi] = detail::window_for(prof, J);
    const auto [first, last] = detail::window_nodes(traj.grid, w_lo, w_hi);
    const auto idx = detail::snapshots_in(traj, t_lo, traj.spec.T);
    if (idx.size() < 2) {
        throw invalid_input("l2_window_error: need at least two snapshots at or after t_lo");
    }
    const double dx = traj.grid.dx();
    std::vector<double> times, iu, iv;
    times.reserve(idx.size());
    iu.reserve(idx.size());
    iv.reserve(idx.size());
    for (std::size_t j : idx) {
        const Snapshot& s = traj.snapshots[j];
        times.push_back(s.t);
        iu.push_back(detail::trapezoid_nodes(dx, first, last, [&](int i) {
            const auto uv = eval_limit_uv(prof, traj.grid.x(i), s.t);
            const double d = s.u[static_cast<std::size_t>(i)] - uv.first;
            return d * d;
        }));
        iv.push_back(detail::trapezoid_nodes(dx, first, last, [&](int i) {
            const auto uv = eval_limit_uv(prof, traj.grid.x(i), s.t);
            const double d = s.v[static_cast<std::size_t>(i)] - uv.second;
            return d * d;
        }));
    }
    return {std::sqrt(detail::trapezoid_time(times, iu)),
            std::sqrt(detail::trapezoid_time(times, iv))};
}

// Space-time L2 distance between two trajectories on the same grid and
// snapshot schedule, over the same window convention as l2_window_error.
inline std::pair<double, double> l2_window_distance(const Trajectory& a, const Trajectory& b,
                                                    double J, double t_lo) {
    if (a.grid.nx != b.grid.nx || a.grid.x_left != b.grid.x_left ||
        a.grid.x_right != b.grid.x_right || a.snapshots.size() != b.snapshots.size()) {
        throw invalid_input("l2_window_distance: trajectories not on a shared grid/schedule");
    }
    const bool whole = a.spec.variant == DomainVariant::WholeLine;
    const auto [first, last] = detail::window_nodes(a.grid, whole ? -J : 0.0, J);
    const auto idx = detail::snapshots_in(a, t_lo, a.spec.T);
    if (idx.size() < 2) {
        throw invalid_input("l2_window_distance: need at least two snapshots at or after t_lo");
    }
    const double dx = a.grid.dx();
    std::vector<double> times, iu, iv;
    for (std::size_t j : idx) {
        const Snapshot& sa = a.snapshots[j];
        const Snapshot& sb = b.snapshots[j];
        if (std::fabs(sa.t - sb.t) > 1e-9 * (1.0 + sa.t)) {
            throw invalid_input("l2_window_distance: snapshot times differ");
        }
        times.push_back(sa.t);
        iu.push_back(detail::trapezoid_nodes(dx, first, last, [&](int i) {
            const double d = sa.u[static_cast<std::size_t>(i)] - sb.u[static_cast<std::size_t>(i)];
            return d * d;
        }));
        iv.push_back(detail::trapezoid_nodes(dx, first, last, [&](int i) {
            const double d = sa.v[static_cast<std::size_t>(i)] - sb.v[static_cast<std::size_t>(i)];
            return d * d;
        }));
    }
    return {std::sqrt(detail::trapezoid_time(times, iu)),
            std::sqrt(detail::trapezoid_time(times, iv))};
}

// Rescaled single-time error (1/sqrt(t)) int_{|y| <= J sqrt(t)} |u - f+|^2 dy
// and the v analogue; the quantity that must vanish along t_n -> infinity.
// Not square-rooted.
inline std::pair<double, double> kamin_rescaled_error(const Trajectory& traj,
                                                      const SelfSimilarProfile& prof,
                                                      double t_eval, double J) {
    if (!(t_eval > 0.0)) throw invalid_input("kamin_rescaled_error: t_eval must be > 0");
    if (!(J >= 0.0) || !std::isfinite(J)) throw invalid_input("kamin_rescaled_error: bad J");
    const Snapshot* snap = nullptr;
    for (const auto& s : traj.snapshots) {
        if (std::fabs(s.t - t_eval) <= 1e-9 * t_eval) {
            snap = &s;
            break;
        }
    }
    if (!snap) throw invalid_input("kamin_rescaled_error: t_eval is not a snapshot time");
    const double rt = std::sqrt(t_eval);
    const auto [w_lo, w_hi] = detail::window_for(prof, J * rt);
    const auto [first, last] = detail::window_nodes(traj.grid, w_lo, w_hi);
    const double dx = traj.grid.dx();
    const double eu = detail::trapezoid_nodes(dx, first, last, [&](int i) {
        const auto uv = eval_limit_uv(prof, traj.grid.x(i), t_eval);
        const double d = snap->u[static_cast<std::size_t>(i)] - uv.first;
        return d * d;
    });
    const double ev = detail::trapezoid_nodes(dx, first, last, [&](int i) {
        const auto uv = eval_limit_uv(prof, traj.grid.x(i), t_eval);
        const double d = snap->v[static_cast<std::size_t>(i)] - uv.second;
        return d * d;
    });
    return {eu / rt, ev / rt};
}

// Trapezoidal space-time integral of u v over the recorded snapshots; the
// discrete counterpart of the a.e. segregation of the limit.
inline double segregation_integral(const Trajectory& traj) {
    if (traj.snapshots.empty()) throw invalid_input("segregation_integral: empty trajectory");
    const double dx = traj.grid.dx();
    const int n = traj.grid.nx;
    std::vector<double> times, iv;
    for (const auto& s : traj.snapshots) {
        times.push_back(s.t);
        iv.push_back(detail::trapezoid_nodes(dx, 0, n, [&](int i) {
            return s.u[static_cast<std::size_t>(i)] * s.v[static_cast<std::size_t>(i)];
        }));
    }
    return detail::trapezoid_time(times, iv);
}

// The mass the reaction actually removed, summed exactly from the per-substep
// diagnostics: the discrete value of the double integral of k F(u, v).
inline double reaction_mass(const Trajectory& traj) {
    if (traj.snapshots.empty()) throw invalid_input("reaction_mass: empty trajectory");
    return traj.reaction_mass_total;
}

struct FreeBoundaryPoint {
    double t = 0.0;
    double xi = 0.0;
};

struct FreeBoundaryTrack {
    std::vector<FreeBoundaryPoint> points;
    int omitted = 0;  // snapshots with no sign change of u - v
};

// Zero crossings of w = u - v per snapshot, by linear interpolation in the
// bracketing cell. Multiple crossings resolve to the one nearest the previous
// point (first snapshot: nearest a sqrt(t) when a profile is supplied, else
// nearest 0); snapshots without a crossing are skipped and counted.
inline FreeBoundaryTrack track_free_boundary(const Trajectory& traj,
                                             const SelfSimilarProfile* prof = nullptr) {
    FreeBoundaryTrack track;
    const double dx = traj.grid.dx();
    bool have_prev = false;
    double prev = 0.0;
    for (const auto& s : traj.snapshots) {
        double anchor = prev;
        if (!have_prev) anchor = prof && s.t > 0.0 ? prof->a * std::sqrt(s.t) : 0.0;
        bool found = false;
        double best = 0.0, best_dist = std::numeric_limits<double>::infinity();
        for (int i = 0; i + 1 <= traj.grid.nx; ++i) {
            const double w0 = s.u[static_cast<std::size_t>(i)] - s.v[static_cast<std::size_t>(i)];
            const double w1 =
                s.u[static_cast<std::size_t>(i) + 1] - s.v[static_cast<std::size_t>(i) + 1];
            double xi;
            if (w0 == 0.0) {
                xi = traj.grid.x(i);
            } else if ((w0 > 0.0) != (w1 > 0.0)) {
                xi = traj.grid.x(i) + dx * w0 / (w0 - w1);
            } else {
                continue;
            }
            const double dist = std::fabs(xi - anchor);
            if (dist < best_dist) {
                best_dist = dist;
                best = xi;
                found = true;
            }
        }
        if (!found) {
            ++track.omitted;
            continue;
        }
        track.points.push_back({s.t, best});
        prev = best;
        have_prev = true;
    }
    return track;
}

struct SqrtLawFit {
    double a = 0.0;
    double stderr_a = 0.0;
};

// Least squares of xi against sqrt(t) through the origin:
// a = sum(xi sqrt(t)) / sum(t); standard error from the residual variance.
inline SqrtLawFit fit_sqrt_law(const std::vector<FreeBoundaryPoint>& points) {
    std::size_t n = 0;
    double st = 0.0, sxt = 0.0;
    for (const auto& p : points) {
        if (!(p.t >= 0.0) || !std::isfinite(p.t) || !std::isfinite(p.xi)) {
            throw invalid_input("fit_sqrt_law: points must be finite with t >= 0");
        }
        if (p.t == 0.0) continue;  // sqrt(0) regressor carries no information
        st += p.t;
        sxt += p.xi * std::sqrt(p.t);
        ++n;
    }
    if (n < 3) throw invalid_input("fit_sqrt_law: need at least 3 points with t > 0");
    SqrtLawFit fit;
    fit.a = sxt / st;
    double ss = 0.0;
    for (const auto& p : points) {
        if (p.t == 0.0) continue;
        const double r = p.xi - fit.a * std::sqrt(p.t);
        ss += r * r;
    }
    fit.stderr_a = std::sqrt(ss / (static_cast<double>(n - 1) * st));
    return fit;
}

// Runs the lower and upper data on the same grid and returns the largest
// ordering violation max(u_lo - u_hi, v_hi - v_lo) over all cells and
// snapshots. The initial samples must already be ordered.
inline double comparison_check(const ProblemSpec& spec, const GridSpec& grid,
                               const SolverConfig& cfg, const InitialData& lower,
                               const InitialData& upper) {
    ProblemSpec lo_spec = spec;
    lo_spec.initial = lower;
    ProblemSpec hi_spec = spec;
    hi_spec.initial = upper;
    auto [u_lo, v_lo] = sample_initial(lower, lo_spec, grid);
    auto [u_hi, v_hi] = sample_initial(upper, hi_spec, grid);
    for (std::size_t i = 0; i < u_lo.size(); ++i) {
        if (u_hi[i] < u_lo[i] || v_hi[i] > v_lo[i]) {
            throw invalid_input("comparison_check: initial data are not ordered");
        }
    }
    const Trajectory t_lo = run(lo_spec, grid, cfg);
    const Trajectory t_hi = run(hi_spec, grid, cfg);
    if (t_lo.failed || t_hi.failed) {
        throw solver_failure("comparison_check: member run failed: " +
                             (t_lo.failed ? t_lo.error : t_hi.error));
    }
    double violation = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < t_lo.snapshots.size(); ++j) {
        const Snapshot& a = t_lo.snapshots[j];
        const Snapshot& b = t_hi.snapshots[j];
        for (std::size_t i = 0; i < a.u.size(); ++i) {
            violation = std::max(violation, a.u[i] - b.u[i]);
            violation = std::max(violation, b.v[i] - a.v[i]);
        }
    }
    return violation;
}

struct ContractionSeries {
    std::vector<double> times;
    std::vector<double> lhs;  // translate distance per snapshot
    double rhs = 0.0;         // the t = 0 value
    double max_excess = 0.0;  // max over t of lhs(t) - rhs
};

// Discrete L1 translate distance sum |u(x) - u(x+xi)| + |v(x) - v(x+xi)| per
// snapshot, over the interior (two cells dropped at each boundary; half line
// additionally restricted to x > 4 xi). The contraction estimate says this
// never exceeds its t = 0 value.
inline ContractionSeries translate_contraction_check(const Trajectory& traj, double xi) {
    if (!(xi >= 0.0) || !std::isfinite(xi)) {
        throw invalid_input("translate_contraction_check: xi must be finite and >= 0");
    }
    const double dx = traj.grid.dx();
    const double cells = xi / dx;
    const long long m = std::llround(cells);
    if (std::fabs(cells - static_cast<double>(m)) > 1e-9 * (1.0 + cells)) {
        throw invalid_input("translate_contraction_check: xi must be a whole number of cells");
    }
    const int n = traj.grid.nodes();
    int first = 2;
    if (traj.spec.variant == DomainVariant::HalfLine) {
        const auto [f, l] = detail::window_nodes(traj.grid, 4.0 * xi, traj.grid.x_right);
        (void)l;
        first = std::max(first, f + 1);  // strictly x > 4 xi
    }
    const int last = n - 3 - static_cast<int>(m);  // i + m stays interior
    if (traj.snapshots.empty()) {
        throw invalid_input("translate_contraction_check: empty trajectory");
    }

    ContractionSeries out;
    for (const auto& s : traj.snapshots) {
        double acc = 0.0;
        for (int i = first; i <= last; ++i) {
            const std::size_t a = static_cast<std::size_t>(i);
            const std::size_t b = static_cast<std::size_t>(i + m);
            acc += std::fabs(s.u[a] - s.u[b]) + std::fabs(s.v[a] - s.v[b]);
        }
        out.times.push_back(s.t);
        out.lhs.push_back(acc * dx);
    }
    out.rhs = out.lhs.front();
    out.max_excess = -std::numeric_limits<double>::infinity();
    for (double l : out.lhs) out.max_excess = std::max(out.max_excess, l - out.rhs);
    return out;
}

}  // namespace fastlim
