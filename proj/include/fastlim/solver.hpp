#pragma once

/**
 * @file solver.hpp
 * @brief Strang-split time integration of the two-component system on the
 *        truncated grid: implicit pointwise reaction, theta-weighted implicit
 *        diffusion, snapshot recording with per-step diagnostics.
 *
 * The step is reaction(dt/2) -> diffusion(dt) -> reaction(dt/2). The implicit
 * reaction substep preserves u - v exactly up to rounding and keeps both
 * components inside [0, M]; theta = 1 diffusion is an M-matrix solve and
 * preserves the bounds unconditionally, theta = 0.5 requires
 * dt <= dx^2 / (2 max(d_u, d_v)).
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <fastlim/errors.hpp>
#include <fastlim/kinetics.hpp>
#include <fastlim/problem.hpp>
#include <fastlim/tridiag.hpp>

namespace fastlim {

enum class Scheme { StrangSplit };

struct SolverConfig {
    Scheme scheme = Scheme::StrangSplit;
    double diffusion_theta = 1.0;  // 1.0 backward Euler, 0.5 Crank-Nicolson
    double reaction_tol = 1e-12;   // bracket width target, in units of M
    int max_reaction_iters = 100;
};

inline void validate(const SolverConfig& cfg) {
    if (cfg.diffusion_theta != 1.0 && cfg.diffusion_theta != 0.5) {
        throw invalid_input("SolverConfig: diffusion_theta must be 1.0 or 0.5");
    }
    if (!std::isfinite(cfg.reaction_tol) || !(cfg.reaction_tol > 0.0)) {
        throw invalid_input("SolverConfig: reaction_tol must be > 0");
    }
    if (cfg.max_reaction_iters < 1) {
        throw invalid_input("SolverConfig: max_reaction_iters must be >= 1");
    }
}

struct State {
    double t = 0.0;
    std::vector<double> u, v;
};

namespace detail {

struct ReactionStepResult {
    double u = 0.0, v = 0.0;
    double residual = 0.0;  // |g| at the accepted root, concentration units
    int iterations = 0;
};

// Implicit-Euler point reaction: u' = u - tau F(u', v'), v' = v - tau F(u', v')
// with tau = k dt. Since u' - v' = u - v =: c, this is the scalar monotone
// root problem g(x) = x + tau F(x, x - c) - u = 0 on [max(c, 0), u], with
// g(lo) <= 0 <= g(hi). Newton with bracket safeguarding; g' >= 1 always.
inline ReactionStepResult reaction_point(double u, double v, double k, const Kinetics& kin,
                                         double dt, double tol_abs, int max_iters) {
    ReactionStepResult out{u, v, 0.0, 0};
    const double tau = k * dt;
    if (tau == 0.0 || kin(u, v) == 0.0) return out;

    const double c = u - v;
    double lo = std::max(c, 0.0);
    double hi = u;
    double x = hi;
    double gx = tau * kin(u, v);  // g(hi)
    while (hi - lo > tol_abs && gx != 0.0) {
        if (out.iterations++ >= max_iters) {
            throw solver_failure("reaction_point: no convergence at u=" + std::to_string(u) +
                                 " v=" + std::to_string(v) + " k=" + std::to_string(k) +
                                 " dt=" + std::to_string(dt));
        }
        const double gp = 1.0 + tau * (kin.partial_u(x, x - c) + kin.partial_v(x, x - c));
        double next = x - gx / gp;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        if (next == x) break;
        const double gn = (next - u) + tau * kin(next, next - c);
        if (gn > 0.0) {
            hi = next;
        } else {
            lo = next;
        }
        x = next;
        gx = gn;
    }
    out.u = x;
    out.v = std::max(x - c, 0.0);
    out.residual = std::fabs(gx);
    return out;
}

// Variant for the half-line boundary node: u is pinned at U0 by the Dirichlet
// row, so only v reacts, against the fixed boundary concentration.
// h(y) = y + tau F(U0, y) - v = 0 on [0, v], increasing.
inline ReactionStepResult reaction_point_fixed_u(double U0, double v, double k,
                                                 const Kinetics& kin, double dt, double tol_abs,
                                                 int max_iters) {
    ReactionStepResult out{U0, v, 0.0, 0};
    const double tau = k * dt;
    if (tau == 0.0 || kin(U0, v) == 0.0) return out;

    double lo = 0.0, hi = v;
    double y = hi;
    double hy = tau * kin(U0, v);
    while (hi - lo > tol_abs && hy != 0.0) {
        if (out.iterations++ >= max_iters) {
            throw solver_failure("reaction_point_fixed_u: no convergence at v=" +
                                 std::to_string(v) + " k=" + std::to_string(k) +
                                 " dt=" + std::to_string(dt));
        }
        const double hp = 1.0 + tau * kin.partial_v(U0, y);
        double next = y - hy / hp;
        if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
        if (next == y) break;
        const double hn = (next - v) + tau * kin(U0, next);
        if (hn > 0.0) {
            hi = next;
        } else {
            lo = next;
        }
        y = next;
        hy = hn;
    }
    out.v = y;
    out.residual = std::fabs(hy);
    return out;
}

}  // namespace detail

// Pointwise implicit reaction substep, the scheme's stiff half. Preserves
// u - v to rounding and keeps (u', v') inside the rectangle spanned by the
// inputs and the segregated rest states.
inline std::pair<double, double> reaction_substep(double u, double v, double k,
                                                  const Kinetics& kin, double dt,
                                                  const SolverConfig& cfg = {}, double M = 1.0) {
    const auto r =
        detail::reaction_point(u, v, k, kin, dt, cfg.reaction_tol * M, cfg.max_reaction_iters);
    return {r.u, r.v};
}

// Tridiagonal theta-weighted diffusion with the case's boundary rows.
// Dirichlet rows pin the boundary nodes at the trace of the run's initial
// data (equal to the far-field constants for step-type data); the half-line
// v component gets a zero-flux ghost row at x=0 when d_v > 0 and no spatial
// coupling at all when d_v = 0.
class DiscreteOperator {
  public:
    struct Workspace {
        std::vector<double> sub, diag, sup, rhs, scratch;
    };

    DiscreteOperator(const ProblemSpec& spec, const GridSpec& grid,
                     const std::vector<double>& u0, const std::vector<double>& v0)
        : variant_(spec.variant),
          d_u_(spec.d_u),
          d_v_(spec.d_v),
          dx_(grid.dx()),
          n_(grid.nodes()),
          u_left_(u0.front()),
          u_right_(u0.back()),
          v_left_(v0.front()),
          v_right_(v0.back()) {
        validate(spec);
        validate_grid(spec, grid);
        if (static_cast<int>(u0.size()) != n_ || static_cast<int>(v0.size()) != n_) {
            throw invalid_input("DiscreteOperator: trace arrays must match the grid");
        }
    }

    int nodes() const { return n_; }
    double dx() const { return dx_; }
    double u_left() const { return u_left_; }

    // One implicit diffusion step of size dt for both components.
    void diffuse(std::vector<double>& u, std::vector<double>& v, double dt, double theta,
                 Workspace& ws) const {
        solve_component(u, d_u_, dt, theta, /*is_u=*/true, ws);
        if (d_v_ > 0.0) solve_component(v, d_v_, dt, theta, /*is_u=*/false, ws);
    }

  private:
    void solve_component(std::vector<double>& w, double d, double dt, double theta, bool is_u,
                         Workspace& ws) const {
        const double r = d * dt / (dx_ * dx_);
        const std::size_t n = static_cast<std::size_t>(n_);
        ws.sub.assign(n, -theta * r);
        ws.diag.assign(n, 1.0 + 2.0 * theta * r);
        ws.sup.assign(n, -theta * r);
        ws.rhs.resize(n);
        const double ex = (1.0 - theta) * r;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            ws.rhs[i] = w[i] + ex * (w[i - 1] - 2.0 * w[i] + w[i + 1]);
        }

        if (!is_u && variant_ == DomainVariant::HalfLine) {
            // zero-flux ghost row: v_{-1} = v_1
            ws.diag[0] = 1.0 + 2.0 * theta * r;
            ws.sup[0] = -2.0 * theta * r;
            ws.rhs[0] = w[0] + 2.0 * ex * (w[1] - w[0]);
        } else {
            ws.diag[0] = 1.0;
            ws.sup[0] = 0.0;
            ws.rhs[0] = is_u ? u_left_ : v_left_;
        }
        ws.diag[n - 1] = 1.0;
        ws.sub[n - 1] = 0.0;
        ws.rhs[n - 1] = is_u ? u_right_ : v_right_;

        thomas_solve(ws.sub, ws.diag, ws.sup, ws.rhs, ws.scratch);
        w.swap(ws.rhs);
    }

    DomainVariant variant_;
    double d_u_, d_v_, dx_;
    int n_;
    double u_left_, u_right_, v_left_, v_right_;
};

inline DiscreteOperator build_operator(const ProblemSpec& spec, const GridSpec& grid,
                                       const std::vector<double>& u0,
                                       const std::vector<double>& v0) {
    return DiscreteOperator(spec, grid, u0, v0);
}

inline DiscreteOperator build_operator(const ProblemSpec& spec, const GridSpec& grid) {
    auto [u0, v0] = sample_initial(spec.initial, spec, grid);
    return DiscreteOperator(spec, grid, u0, v0);
}

struct StepDiagnostics {
    double conservation_drift_max = 0.0;  // |(u'-v') - (u-v)| over cells and substeps
    double reaction_residual_max = 0.0;   // |g| at accepted roots
    double reaction_mass = 0.0;           // sum of trapezoid-weight * (v - v') over substeps
};

namespace detail {

inline void react_all(State& s, const ProblemSpec& spec, const SolverConfig& cfg, double k,
                      double dt, double dx, StepDiagnostics& diag) {
    const double tol_abs = cfg.reaction_tol * spec.M;
    const std::size_t n = s.u.size();
    const bool half = spec.variant == DomainVariant::HalfLine;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 * dx : dx;
        const double before = s.u[i] - s.v[i];
        ReactionStepResult r;
        if (half && i == 0) {
            r = reaction_point_fixed_u(s.u[0], s.v[0], k, spec.kinetics, dt, tol_abs,
                                       cfg.max_reaction_iters);
            diag.reaction_mass += w * (s.v[0] - r.v);
            s.v[0] = r.v;
            diag.reaction_residual_max = std::max(diag.reaction_residual_max, r.residual);
            continue;
        }
        r = reaction_point(s.u[i], s.v[i], k, spec.kinetics, dt, tol_abs,
                           cfg.max_reaction_iters);
        diag.reaction_mass += w * (s.v[i] - r.v);
        diag.conservation_drift_max =
            std::max(diag.conservation_drift_max, std::fabs((r.u - r.v) - before));
        diag.reaction_residual_max = std::max(diag.reaction_residual_max, r.residual);
        s.u[i] = r.u;
        s.v[i] = r.v;
    }
}

}  // namespace detail

// One Strang step: reaction(dt/2), diffusion(dt), reaction(dt/2).
// Mutates the state in place and accumulates diagnostics.
inline void advance(State& s, const ProblemSpec& spec, const DiscreteOperator& op,
                    const SolverConfig& cfg, double k, double dt,
                    DiscreteOperator::Workspace& ws, StepDiagnostics& diag) {
    detail::react_all(s, spec, cfg, k, 0.5 * dt, op.dx(), diag);
    op.diffuse(s.u, s.v, dt, cfg.diffusion_theta, ws);
    detail::react_all(s, spec, cfg, k, 0.5 * dt, op.dx(), diag);
    s.t += dt;
}

// Value-returning spelling of one step.
inline State step(const State& s, const ProblemSpec& spec, const DiscreteOperator& op,
                  const SolverConfig& cfg, double k, double dt) {
    State out = s;
    DiscreteOperator::Workspace ws;
    StepDiagnostics diag;
    advance(out, spec, op, cfg, k, dt, ws, diag);
    return out;
}

struct Snapshot {
    double t = 0.0;
    std::vector<double> u, v;
    double reaction_mass_cum = 0.0;  // integral of kF dx dt from 0 to t
};

struct Trajectory {
    ProblemSpec spec;
    GridSpec grid;
    SolverConfig cfg;
    std::vector<Snapshot> snapshots;  // snapshots.front() is the t=0 state
    double min_u = 0.0, max_u = 0.0, min_v = 0.0, max_v = 0.0;  // over every step
    double conservation_drift_max = 0.0;
    double reaction_residual_max = 0.0;
    double reaction_mass_total = 0.0;
    long long steps = 0;
    bool failed = false;
    std::string error;
};

// Integrates from t = 0 to T, landing on each snapshot time by shrinking the
// final step of that segment. The t = 0 state is always recorded; T is
// appended to the snapshot list when absent. A reaction failure marks the
// trajectory failed and keeps everything recorded so far.
inline Trajectory run(const ProblemSpec& spec, const GridSpec& grid, const SolverConfig& cfg) {
    validate(cfg);
    Trajectory traj;
    traj.spec = spec;
    traj.grid = grid;
    traj.cfg = cfg;

    auto [u0, v0] = sample_initial(spec.initial, spec, grid);
    const DiscreteOperator op(spec, grid, u0, v0);
    State s{0.0, std::move(u0), std::move(v0)};

    std::vector<double> targets = grid.snapshot_times;
    if (targets.empty() || targets.back() < spec.T * (1.0 - 1e-12)) {
        targets.push_back(spec.T);
    }

    auto track_bounds = [&](const State& st) {
        for (double x : st.u) {
            traj.min_u = std::min(traj.min_u, x);
            traj.max_u = std::max(traj.max_u, x);
        }
        for (double x : st.v) {
            traj.min_v = std::min(traj.min_v, x);
            traj.max_v = std::max(traj.max_v, x);
        }
    };
    traj.min_u = traj.max_u = s.u[0];
    traj.min_v = traj.max_v = s.v[0];
    track_bounds(s);
    traj.snapshots.push_back({0.0, s.u, s.v, 0.0});

    DiscreteOperator::Workspace ws;
    double mass_cum = 0.0;
    for (double target : targets) {
        // Fixed per-segment step count with exact landing: dt_seg = span / n
        // never exceeds grid.dt by more than rounding, and s.t is set to the
        // target outright so accumulation error cannot leak across segments.
        const double span = target - s.t;
        const long long n_steps =
            std::max<long long>(1, static_cast<long long>(std::ceil(span / grid.dt - 1e-9)));
        const double dt_seg = span / static_cast<double>(n_steps);
        for (long long j = 0; j < n_steps; ++j) {
            StepDiagnostics diag;
            try {
                advance(s, spec, op, cfg, spec.k, dt_seg, ws, diag);
            } catch (const solver_failure& e) {
                traj.failed = true;
                traj.error = e.what();
                traj.reaction_mass_total = mass_cum;
                return traj;
            }
            mass_cum += diag.reaction_mass;
            traj.conservation_drift_max =
                std::max(traj.conservation_drift_max, diag.conservation_drift_max);
            traj.reaction_residual_max =
                std::max(traj.reaction_residual_max, diag.reaction_residual_max);
            track_bounds(s);
            ++traj.steps;
        }
        s.t = target;
        traj.snapshots.push_back({target, s.u, s.v, mass_cum});
    }
    traj.reaction_mass_total = mass_cum;
    return traj;
}

}  // namespace fastlim
