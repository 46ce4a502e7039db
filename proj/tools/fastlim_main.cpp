/**
 * @file fastlim_main.cpp
 * @brief Command-line harness: profile, solve, sweep, longtime, verify.
 *
 * Exit codes: 0 success, 1 configuration or validation error, 2 solver
 * failure, 3 property failure. Data outputs (CSV/JSON) are bit-identical for
 * identical config and seed; wall-clock times go only into manifest.json.
 */

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <fastlim/analysis.hpp>
#include <fastlim/config.hpp>
#include <fastlim/parallel.hpp>
#include <fastlim/report.hpp>
#include <fastlim/rng.hpp>

namespace {

using namespace fastlim;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitSolver = 2;
constexpr int kExitProperty = 3;

struct CliContext {
    RunConfig cfg;
    std::string config_text;
    std::string command;
    int workers = 1;
    bool quiet = false;
    std::vector<std::pair<std::string, double>> timings;
};

class PhaseTimer {
  public:
    PhaseTimer(CliContext& ctx, std::string name)
        : ctx_(ctx), name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}
    ~PhaseTimer() {
        const auto stop = std::chrono::steady_clock::now();
        ctx_.timings.emplace_back(name_,
                                  std::chrono::duration<double>(stop - start_).count());
    }

  private:
    CliContext& ctx_;
    std::string name_;
    std::chrono::steady_clock::time_point start_;
};

void info(const CliContext& ctx, const std::string& line) {
    if (!ctx.quiet) std::cout << line << "\n";
}

std::string out_path(const CliContext& ctx, const std::string& name) {
    return (std::filesystem::path(ctx.cfg.output_dir) / name).string();
}

void finish_manifest(CliContext& ctx) {
    write_manifest(ctx.cfg.output_dir, ctx.config_text, ctx.cfg.seed, ctx.command, ctx.timings);
}

// Default snapshot schedule when the config gives none: t_lo and five evenly
// spaced times up to T, so windowed space-time norms always have nodes.
void ensure_snapshot_schedule(RunConfig& cfg) {
    if (!cfg.grid.snapshot_times.empty()) return;
    const double t_lo = cfg.analysis.resolved_t_lo(cfg.spec.T);
    for (int j = 0; j <= 5; ++j) {
        cfg.grid.snapshot_times.push_back(t_lo + (cfg.spec.T - t_lo) * j / 5.0);
    }
    validate_grid(cfg.spec, cfg.grid);
}

ordered_json residuals_json(const SelfSimilarProfile& prof, const ProfileResidualReport& rep) {
    ordered_json j;
    j["root_residual"] = rep.root_residual;
    j["ode_residual_max"] = rep.ode_residual_max;
    if (prof.limit_case == LimitCase::Whole_DvPos || prof.limit_case == LimitCase::Half_DvPos) {
        j["interface_flux_residual"] = rep.interface_flux_residual;
    } else {
        j["stefan_residual"] = rep.stefan_residual;
    }
    return j;
}

double worst_residual(const ProfileResidualReport& rep) {
    return std::max(std::max(rep.root_residual, rep.ode_residual_max),
                    std::max(rep.interface_flux_residual, rep.stefan_residual));
}

bool bounds_ok(const Trajectory& traj, double tol_abs) {
    const double M = traj.spec.M;
    return traj.min_u >= -tol_abs && traj.min_v >= -tol_abs && traj.max_u <= M + tol_abs &&
           traj.max_v <= M + tol_abs;
}

// ---------------------------------------------------------------- profile --

int cmd_profile(CliContext& ctx) {
    const ProblemSpec& spec = ctx.cfg.spec;
    SelfSimilarProfile prof;
    try {
        PhaseTimer t(ctx, "root_solve");
        prof = make_profile(spec);
    } catch (const internal_error& e) {
        std::cerr << "profile: root solve failed: " << e.what() << "\n";
        finish_manifest(ctx);
        return kExitSolver;
    }
    const auto rep = residual_report(prof);

    {
        PhaseTimer t(ctx, "write");
        const double right_d = spec.d_v > 0.0 ? spec.d_v : spec.d_u;
        const double lo = spec.variant == DomainVariant::WholeLine
                              ? prof.a - 8.0 * std::sqrt(spec.d_u)
                              : 0.0;
        const double hi = prof.a + 8.0 * std::sqrt(right_d);
        CsvWriter csv(out_path(ctx, "profile.csv"), {"eta", "f", "u", "v"});
        const int samples = 801;
        for (int i = 0; i < samples; ++i) {
            const double eta = lo + (hi - lo) * i / (samples - 1);
            const double f = eval_profile_f(prof, eta);
            csv.row({eta, f, std::max(f, 0.0), std::max(-f, 0.0)});
        }

        ordered_json j;
        j["case"] = to_string(prof.limit_case);
        j["a"] = prof.a;
        j["params"] = {{"d_u", spec.d_u}, {"d_v", spec.d_v}, {"U0", spec.U0}, {"V0", spec.V0}};
        j["residuals"] = residuals_json(prof, rep);
        j["residual_tol"] = ctx.cfg.analysis.profile_residual_tol;
        j["pass"] = worst_residual(rep) <= ctx.cfg.analysis.profile_residual_tol;
        write_json(out_path(ctx, "profile.json"), j);
    }
    finish_manifest(ctx);

    info(ctx, "profile: case " + std::string(to_string(prof.limit_case)) +
                  ", a = " + format_g17(prof.a));
    if (worst_residual(rep) > ctx.cfg.analysis.profile_residual_tol) {
        std::cerr << "profile: residuals exceed " << format_g17(ctx.cfg.analysis.profile_residual_tol)
                  << "\n";
        return kExitProperty;
    }
    return kExitOk;
}

// ------------------------------------------------------------------ solve --

void write_snapshots_csv(const CliContext& ctx, const Trajectory& traj) {
    CsvWriter csv(out_path(ctx, "snapshots.csv"), {"t", "x", "u", "v"});
    for (const auto& s : traj.snapshots) {
        for (int i = 0; i < traj.grid.nodes(); ++i) {
            const auto idx = static_cast<std::size_t>(i);
            csv.row({s.t, traj.grid.x(i), s.u[idx], s.v[idx]});
        }
    }
}

int cmd_solve(CliContext& ctx) {
    ensure_snapshot_schedule(ctx.cfg);
    Trajectory traj;
    {
        PhaseTimer t(ctx, "run");
        traj = run(ctx.cfg.spec, ctx.cfg.grid, ctx.cfg.solver);
    }
    const double tol_abs = ctx.cfg.analysis.bounds_tol * ctx.cfg.spec.M;
    const bool ok = bounds_ok(traj, tol_abs);
    {
        PhaseTimer t(ctx, "write");
        write_snapshots_csv(ctx, traj);
        ordered_json j;
        j["failed"] = traj.failed;
        if (traj.failed) j["error"] = traj.error;
        j["steps"] = traj.steps;
        j["min_u"] = traj.min_u;
        j["max_u"] = traj.max_u;
        j["min_v"] = traj.min_v;
        j["max_v"] = traj.max_v;
        j["conservation_drift_max"] = traj.conservation_drift_max;
        j["reaction_residual_max"] = traj.reaction_residual_max;
        j["reaction_mass"] = traj.reaction_mass_total;
        j["bounds_tol_abs"] = tol_abs;
        j["bounds_ok"] = ok;
        write_json(out_path(ctx, "summary.json"), j);
    }
    finish_manifest(ctx);

    if (traj.failed) {
        std::cerr << "solve: solver failure: " << traj.error << "\n";
        return kExitSolver;
    }
    info(ctx, "solve: " + std::to_string(traj.steps) + " steps, reaction mass " +
                  format_g17(traj.reaction_mass_total));
    if (!ok) {
        std::cerr << "solve: bounds invariant violated\n";
        return kExitProperty;
    }
    return kExitOk;
}

// ------------------------------------------------------------------ sweep --

void write_report_csv(const CliContext& ctx, const ConvergenceReport& report) {
    CsvWriter csv(out_path(ctx, "report.csv"),
                  {to_string(report.sweep_axis), "l2_window_error_u", "l2_window_error_v",
                   "segregation_integral", "reaction_mass", "fitted_a", "fitted_a_stderr"});
    for (const auto& e : report.entries) {
        csv.row({e.axis_value, e.l2_window_error_u, e.l2_window_error_v, e.segregation_integral,
                 e.reaction_mass, e.fitted_a, e.fitted_a_stderr});
    }
}

// err[i+1] <= err[i] * (1 + slack) along the given direction
bool nonincreasing_within(const std::vector<double>& vals, double slack) {
    for (std::size_t i = 1; i < vals.size(); ++i) {
        if (vals[i] > vals[i - 1] * (1.0 + slack)) return false;
    }
    return true;
}

SweepEntry make_entry(const RunConfig& cfg, double axis_value, const Trajectory& traj,
                      const SelfSimilarProfile& prof) {
    SweepEntry e;
    e.axis_value = axis_value;
    const double t_lo = cfg.analysis.resolved_t_lo(cfg.spec.T);
    const auto [eu, ev] = l2_window_error(traj, prof, cfg.analysis.J, t_lo);
    e.l2_window_error_u = eu;
    e.l2_window_error_v = ev;
    e.segregation_integral = segregation_integral(traj);
    e.reaction_mass = reaction_mass(traj);
    try {
        const auto track = track_free_boundary(traj, &prof);
        const auto fit = fit_sqrt_law(track.points);
        e.fitted_a = fit.a;
        e.fitted_a_stderr = fit.stderr_a;
    } catch (const invalid_input&) {
        // too few crossings to fit; the NaN defaults stand
    }
    return e;
}

int cmd_sweep(CliContext& ctx) {
    RunConfig& cfg = ctx.cfg;
    if (!cfg.sweep) {
        std::cerr << "sweep: config has no [sweep] section\n";
        return kExitConfig;
    }
    if (cfg.sweep->axis == SweepAxis::Time) {
        std::cerr << "sweep: axis time belongs to the longtime command\n";
        return kExitConfig;
    }
    ensure_snapshot_schedule(cfg);
    const bool k_axis = cfg.sweep->axis == SweepAxis::K;
    const auto& values = cfg.sweep->values;

    // member specs; d_v sweeps prepend the d_v = 0 reference run
    std::vector<ProblemSpec> specs;
    if (!k_axis) {
        ProblemSpec ref = cfg.spec;
        ref.d_v = 0.0;
        specs.push_back(ref);
    }
    for (double v : values) {
        ProblemSpec s = cfg.spec;
        if (k_axis) {
            s.k = v;
        } else {
            s.d_v = v;
        }
        specs.push_back(s);
    }
    for (const auto& s : specs) validate(s);

    std::vector<Trajectory> trajs(specs.size());
    {
        PhaseTimer t(ctx, "runs");
        parallel_for(static_cast<int>(specs.size()), ctx.workers, [&](int i) {
            trajs[static_cast<std::size_t>(i)] =
                run(specs[static_cast<std::size_t>(i)], cfg.grid, cfg.solver);
        });
    }

    ConvergenceReport report;
    report.sweep_axis = cfg.sweep->axis;
    bool partial = false;
    std::string first_error;
    for (const auto& traj : trajs) {
        if (traj.failed && first_error.empty()) {
            partial = true;
            first_error = traj.error;
        }
    }

    const double t_lo = cfg.analysis.resolved_t_lo(cfg.spec.T);
    if (!partial) {
        PhaseTimer t(ctx, "analysis");
        if (k_axis) {
            report.profile = make_profile(cfg.spec);
            for (std::size_t i = 0; i < values.size(); ++i) {
                report.entries.push_back(
                    make_entry(cfg, values[i], trajs[i], *report.profile));
            }
        } else {
            // distance to the d_v = 0 reference replaces the profile error
            const Trajectory& ref = trajs.front();
            for (std::size_t i = 0; i < values.size(); ++i) {
                const Trajectory& traj = trajs[i + 1];
                SweepEntry e;
                e.axis_value = values[i];
                const auto [du, dv] = l2_window_distance(traj, ref, cfg.analysis.J, t_lo);
                e.l2_window_error_u = du;
                e.l2_window_error_v = dv;
                e.segregation_integral = segregation_integral(traj);
                e.reaction_mass = reaction_mass(traj);
                report.entries.push_back(e);
            }
        }
        validate(report);
    }

    bool err_ok = false, seg_ok = false;
    if (!partial) {
        std::vector<double> errs, segs;
        for (const auto& e : report.entries) {
            errs.push_back(e.l2_window_error_u);
            segs.push_back(e.segregation_integral);
        }
        if (k_axis) {
            err_ok = nonincreasing_within(errs, cfg.analysis.monotone_slack);
            seg_ok = nonincreasing_within(segs, cfg.analysis.monotone_slack);
        } else {
            // distance to the d_v=0 run must shrink as d_v drops: with entries
            // sorted by increasing d_v this means strictly increasing values
            err_ok = true;
            for (std::size_t i = 1; i < errs.size(); ++i) {
                if (!(errs[i] > errs[i - 1])) err_ok = false;
            }
            seg_ok = true;
        }
    }

    {
        PhaseTimer t(ctx, "write");
        write_report_csv(ctx, report);
        ordered_json j;
        j["axis"] = to_string(cfg.sweep->axis);
        j["values"] = values;
        j["partial"] = partial;
        if (partial) j["error"] = first_error;
        ordered_json entries = ordered_json::array();
        for (const auto& e : report.entries) {
            ordered_json row;
            row["axis_value"] = e.axis_value;
            row["l2_window_error_u"] = e.l2_window_error_u;
            row["l2_window_error_v"] = e.l2_window_error_v;
            row["segregation_integral"] = e.segregation_integral;
            row["reaction_mass"] = e.reaction_mass;
            if (std::isfinite(e.fitted_a)) {
                row["fitted_a"] = e.fitted_a;
                row["fitted_a_stderr"] = e.fitted_a_stderr;
            }
            entries.push_back(row);
        }
        j["entries"] = entries;
        j["properties"] = {{k_axis ? "err_u_nonincreasing" : "distance_decreasing_to_dv0", err_ok},
                           {"segregation_nonincreasing", seg_ok}};
        j["pass"] = !partial && err_ok && seg_ok;
        write_json(out_path(ctx, "report.json"), j);
    }
    finish_manifest(ctx);

    if (partial) {
        std::cerr << "sweep: member run failed: " << first_error << "\n";
        return kExitSolver;
    }
    info(ctx, "sweep: " + std::to_string(report.entries.size()) + " members analyzed");
    if (!err_ok || !seg_ok) {
        std::cerr << "sweep: monotone-decrease property failed\n";
        return kExitProperty;
    }
    return kExitOk;
}

// --------------------------------------------------------------- longtime --

int cmd_longtime(CliContext& ctx) {
    RunConfig& cfg = ctx.cfg;
    if (!cfg.sweep || cfg.sweep->axis != SweepAxis::Time) {
        std::cerr << "longtime: config needs [sweep] with axis = time\n";
        return kExitConfig;
    }
    const std::vector<double> times = cfg.sweep->values;
    cfg.spec.T = times.back();
    cfg.grid.snapshot_times = times;
    validate(cfg.spec);
    validate_grid(cfg.spec, cfg.grid);
    const double reach = cfg.analysis.J * std::sqrt(times.back());
    const double have = cfg.spec.variant == DomainVariant::WholeLine
                            ? std::min(-cfg.grid.x_left, cfg.grid.x_right)
                            : cfg.grid.x_right;
    if (reach > have) {
        std::cerr << "longtime: window J*sqrt(t_max) = " << format_g17(reach)
                  << " exceeds the grid\n";
        return kExitConfig;
    }

    const auto prof = make_profile(cfg.spec);
    Trajectory traj;
    {
        PhaseTimer t(ctx, "run");
        traj = run(cfg.spec, cfg.grid, cfg.solver);
    }
    if (traj.failed) {
        finish_manifest(ctx);
        std::cerr << "longtime: solver failure: " << traj.error << "\n";
        return kExitSolver;
    }

    std::vector<double> err_u(times.size()), err_v(times.size());
    {
        PhaseTimer t(ctx, "analysis");
        for (std::size_t i = 0; i < times.size(); ++i) {
            const auto [eu, ev] = kamin_rescaled_error(traj, prof, times[i], cfg.analysis.J);
            err_u[i] = eu;
            err_v[i] = ev;
        }
    }

    const bool stepwise = nonincreasing_within(err_u, cfg.analysis.time_slack);
    const bool overall = times.size() < 2 || err_u.back() < err_u.front();
    // a non-monotone dip with a decreasing overall trend is informational,
    // not a failure: the guarantee is only along a subsequence of times
    const bool pass = stepwise || overall;
    const bool informational = !stepwise && overall;

    {
        PhaseTimer t(ctx, "write");
        CsvWriter csv(out_path(ctx, "kamin.csv"), {"t", "kamin_err_u", "kamin_err_v"});
        for (std::size_t i = 0; i < times.size(); ++i) csv.row({times[i], err_u[i], err_v[i]});
        ordered_json j;
        j["times"] = times;
        j["kamin_err_u"] = err_u;
        j["kamin_err_v"] = err_v;
        j["stepwise_decreasing"] = stepwise;
        j["overall_decreasing"] = overall;
        j["informational_dip"] = informational;
        j["pass"] = pass;
        write_json(out_path(ctx, "longtime.json"), j);
    }
    finish_manifest(ctx);

    info(ctx, std::string("longtime: stepwise ") + (stepwise ? "decreasing" : "non-monotone") +
                  (informational ? " (informational dip, overall decreasing)" : ""));
    if (!pass) {
        std::cerr << "longtime: rescaled error trend is not decreasing\n";
        return kExitProperty;
    }
    return kExitOk;
}

// ----------------------------------------------------------------- verify --

struct PropertyResult {
    std::string name;
    bool pass = false;
    ordered_json details;
};

// Random ordered pair: the upper datum adds nonnegative u bumps everywhere
// and negative v bumps where the base v is at its plateau, so both samples
// stay inside [0, M] and the order holds pointwise.
std::pair<InitialData, InitialData> random_ordered_pair(const RunConfig& cfg, Rng& rng) {
    const ProblemSpec& s = cfg.spec;
    const auto base = InitialData::sharp_step();
    const double span_u = s.M - s.U0;
    std::vector<Bump> bu, bv;
    const int n_u = 1 + static_cast<int>(rng.below(2));
    for (int j = 0; j < n_u && span_u > 0.0; ++j) {
        Bump b;
        b.center = rng.uniform(cfg.grid.x_left * 0.5, cfg.grid.x_right * 0.5);
        b.width = rng.uniform(1.0, 4.0);
        // budget split across bumps so overlaps cannot leave [0, M]
        b.amplitude = rng.uniform(0.05, 0.9) * span_u / n_u;
        bu.push_back(b);
    }
    const int n_v = 1 + static_cast<int>(rng.below(2));
    for (int j = 0; j < n_v; ++j) {
        Bump b;
        b.width = rng.uniform(1.0, 4.0);
        // keep the dent inside the v plateau: support right of x = 1
        const double lo = 1.0 + 0.5 * b.width;
        b.center = rng.uniform(lo, cfg.grid.x_right * 0.75);
        b.amplitude = -rng.uniform(0.05, 0.9) * s.V0 / n_v;
        bv.push_back(b);
    }
    return {base, InitialData::perturbed(base, std::move(bu), std::move(bv))};
}

int cmd_verify(CliContext& ctx) {
    RunConfig& cfg = ctx.cfg;
    ensure_snapshot_schedule(cfg);
    const double M = cfg.spec.M;
    const double eps = std::numeric_limits<double>::epsilon();
    std::vector<PropertyResult> results;

    // suite runs: fixed k ladder on the configured problem and grid
    const std::vector<double> k_ladder = {1.0, 100.0, 1000.0, 10000.0};
    std::vector<Trajectory> k_runs(k_ladder.size());
    {
        PhaseTimer t(ctx, "k_ladder_runs");
        parallel_for(static_cast<int>(k_ladder.size()), ctx.workers, [&](int i) {
            ProblemSpec s = cfg.spec;
            s.k = k_ladder[static_cast<std::size_t>(i)];
            k_runs[static_cast<std::size_t>(i)] = run(s, cfg.grid, cfg.solver);
        });
    }
    for (const auto& traj : k_runs) {
        if (traj.failed) {
            std::cerr << "verify: suite run failed: " << traj.error << "\n";
            finish_manifest(ctx);
            return kExitSolver;
        }
    }

    {
        PropertyResult r;
        r.name = "bounds";
        const double tol_abs = cfg.analysis.bounds_tol * M;
        r.pass = true;
        double worst_low = 0.0, worst_high = 0.0;
        for (const auto& traj : k_runs) {
            r.pass = r.pass && bounds_ok(traj, tol_abs);
            worst_low = std::min({worst_low, traj.min_u, traj.min_v});
            worst_high = std::max({worst_high, traj.max_u, traj.max_v});
        }
        r.details = {{"k_values", k_ladder},
                     {"worst_low", worst_low},
                     {"worst_high", worst_high},
                     {"tol_abs", tol_abs}};
        results.push_back(std::move(r));
    }

    {
        PropertyResult r;
        r.name = "conservation";
        double drift = 0.0, resid = 0.0;
        for (const auto& traj : k_runs) {
            drift = std::max(drift, traj.conservation_drift_max);
            resid = std::max(resid, traj.reaction_residual_max);
        }
        const double drift_tol = 4.0 * eps * M;
        const double resid_tol = 1e-8 * M;
        r.pass = drift <= drift_tol && resid <= resid_tol;
        r.details = {{"conservation_drift_max", drift},
                     {"drift_tol", drift_tol},
                     {"reaction_residual_max", resid},
                     {"residual_tol", resid_tol}};
        results.push_back(std::move(r));
    }

    {
        PhaseTimer t(ctx, "comparison_pairs");
        PropertyResult r;
        r.name = "comparison";
        ProblemSpec pair_spec = cfg.spec;
        pair_spec.k = 100.0;
        pair_spec.T = std::min(cfg.spec.T, 0.25);
        GridSpec pair_grid = cfg.grid;
        pair_grid.snapshot_times.clear();
        validate_grid(pair_spec, pair_grid);
        const int pairs = cfg.analysis.pairs;
        Rng seeder(cfg.seed);
        std::vector<std::pair<InitialData, InitialData>> data;
        data.reserve(static_cast<std::size_t>(pairs));
        for (int p = 0; p < pairs; ++p) data.push_back(random_ordered_pair(cfg, seeder));
        std::vector<double> violations(static_cast<std::size_t>(pairs));
        parallel_for(pairs, ctx.workers, [&](int p) {
            const auto& [lo, hi] = data[static_cast<std::size_t>(p)];
            violations[static_cast<std::size_t>(p)] =
                comparison_check(pair_spec, pair_grid, cfg.solver, lo, hi);
        });
        const double worst = *std::max_element(violations.begin(), violations.end());
        r.pass = worst <= cfg.analysis.comparison_tol * M;
        r.details = {{"pairs", pairs},
                     {"k", pair_spec.k},
                     {"T", pair_spec.T},
                     {"max_violation", worst},
                     {"tol", cfg.analysis.comparison_tol * M}};
        results.push_back(std::move(r));
    }

    {
        PropertyResult r;
        r.name = "contraction";
        const Trajectory& traj = k_runs[1];  // the k = 100 run
        const double dx = cfg.grid.dx();
        const double xi = cfg.analysis.xi_shift * dx;
        const auto series = translate_contraction_check(traj, xi);
        const double tol = cfg.analysis.contraction_coeff * M * xi + 10.0 * dx * dx;
        r.pass = series.max_excess <= tol;
        r.details = {{"xi", xi}, {"max_excess", series.max_excess}, {"tol", tol}};
        results.push_back(std::move(r));
    }

    {
        PropertyResult r;
        r.name = "segregation_trend";
        const std::vector<double> segs = {segregation_integral(k_runs[0]),
                                          segregation_integral(k_runs[1]),
                                          segregation_integral(k_runs[3])};
        const bool mono = nonincreasing_within(segs, cfg.analysis.monotone_slack);
        const double floor = 1e-300;
        const double ratio = segs.back() / std::max(segs.front(), floor);
        r.pass = mono && ratio <= cfg.analysis.segregation_ratio_max;
        r.details = {{"k_values", std::vector<double>{k_ladder[0], k_ladder[1], k_ladder[3]}},
                     {"segregation", segs},
                     {"ratio", ratio},
                     {"ratio_max", cfg.analysis.segregation_ratio_max}};
        results.push_back(std::move(r));
    }

    {
        PropertyResult r;
        r.name = "reaction_mass_bound";
        const std::vector<double> masses = {reaction_mass(k_runs[1]), reaction_mass(k_runs[2]),
                                            reaction_mass(k_runs[3])};
        const double lo = *std::min_element(masses.begin(), masses.end());
        const double hi = *std::max_element(masses.begin(), masses.end());
        const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
        r.pass = ratio <= cfg.analysis.mass_ratio_max;
        r.details = {{"k_values", std::vector<double>{k_ladder[1], k_ladder[2], k_ladder[3]}},
                     {"masses", masses},
                     {"ratio", ratio},
                     {"ratio_max", cfg.analysis.mass_ratio_max}};
        results.push_back(std::move(r));
    }

    {
        PropertyResult r;
        r.name = "profile_residuals";
        try {
            const auto prof = make_profile(cfg.spec);
            const auto rep = residual_report(prof);
            r.pass = worst_residual(rep) <= cfg.analysis.profile_residual_tol;
            r.details = residuals_json(prof, rep);
            r.details["tol"] = cfg.analysis.profile_residual_tol;
        } catch (const internal_error& e) {
            r.pass = false;
            r.details = {{"error", e.what()}};
        }
        results.push_back(std::move(r));
    }

    {
        PhaseTimer t(ctx, "self_convergence");
        PropertyResult r;
        r.name = "self_convergence";
        // fixed smooth benchmark, Crank-Nicolson, three nested grids
        auto level = [&](int nx, double dt) {
            ProblemSpec s;
            s.variant = DomainVariant::WholeLine;
            s.k = 10.0;
            s.T = 0.5;
            s.initial = InitialData::smoothed_step(1.0);
            GridSpec g;
            g.x_left = -20.0;
            g.x_right = 20.0;
            g.nx = nx;
            g.dt = dt;
            SolverConfig sc = cfg.solver;
            sc.diffusion_theta = 0.5;
            return run(s, g, sc);
        };
        std::vector<Trajectory> levels(3);
        const int nxs[3] = {250, 500, 1000};
        const double dts[3] = {3.2e-3, 1.6e-3, 8e-4};
        parallel_for(3, ctx.workers, [&](int i) {
            levels[static_cast<std::size_t>(i)] = level(nxs[i], dts[i]);
        });
        auto diff_coarse = [](const Trajectory& coarse, const Trajectory& fine) {
            const auto& cu = coarse.snapshots.back().u;
            const auto& fu = fine.snapshots.back().u;
            const double dx = coarse.grid.dx();
            double s = 0.0;
            for (std::size_t i = 0; i < cu.size(); ++i) {
                const double w = (i == 0 || i + 1 == cu.size()) ? 0.5 * dx : dx;
                const double d = cu[i] - fu[2 * i];
                s += w * d * d;
            }
            return std::sqrt(s);
        };
        bool failed = false;
        for (const auto& traj : levels) failed = failed || traj.failed;
        if (failed) {
            r.pass = false;
            r.details = {{"error", "a refinement run failed"}};
        } else {
            const double e1 = diff_coarse(levels[0], levels[1]);
            const double e2 = diff_coarse(levels[1], levels[2]);
            const double factor = e1 / e2;
            r.pass = factor >= 3.0;
            r.details = {{"coarse_error", e1}, {"fine_error", e2}, {"factor", factor}};
        }
        results.push_back(std::move(r));
    }

    bool all_pass = true;
    std::string first_fail;
    {
        PhaseTimer t(ctx, "write");
        ordered_json j;
        ordered_json props = ordered_json::object();
        for (const auto& r : results) {
            ordered_json entry;
            entry["pass"] = r.pass;
            entry["details"] = r.details;
            props[r.name] = entry;
            if (!r.pass && first_fail.empty()) first_fail = r.name;
            all_pass = all_pass && r.pass;
            info(ctx, std::string("verify: ") + (r.pass ? "pass " : "FAIL ") + r.name);
        }
        j["properties"] = props;
        j["pass"] = all_pass;
        j["seed"] = cfg.seed;
        write_json(out_path(ctx, "scorecard.json"), j);
    }
    finish_manifest(ctx);

    if (!all_pass) {
        std::cerr << "verify: property failed: " << first_fail << "\n";
        return kExitProperty;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"simulation and verification toolkit for two-component "
                 "fast-reaction limits on the line"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_override;
    int workers = 0;
    long long seed_override = -1;
    bool quiet = false;
    app.add_option("--config", config_path, "configuration file (INI)")->required();
    app.add_option("--output", output_override, "output directory (overrides [output] dir)");
    app.add_option("--workers", workers, "worker threads, 0 = hardware");
    app.add_option("--seed", seed_override, "seed override for randomized suites");
    app.add_flag("--quiet", quiet, "suppress informational output");

    const char* names[] = {"profile", "solve", "sweep", "longtime", "verify"};
    const char* descs[] = {"limit profile and its residuals", "single trajectory",
                           "k or d_v sweep with convergence report",
                           "long-time rescaled convergence", "property scorecard"};
    for (int i = 0; i < 5; ++i) {
        auto* sub = app.add_subcommand(names[i], descs[i]);
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    CliContext ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.quiet = quiet;
    ctx.workers = workers > 0 ? workers
                              : std::max(1u, std::thread::hardware_concurrency());

    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "config: cannot open " << config_path << "\n";
            return kExitConfig;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        ctx.config_text = buf.str();
        ctx.cfg = parse_config_text(ctx.config_text);
        if (!output_override.empty()) ctx.cfg.output_dir = output_override;
        if (seed_override >= 0) ctx.cfg.seed = static_cast<std::uint64_t>(seed_override);
        ensure_dir(ctx.cfg.output_dir);

        if (ctx.command == "profile") return cmd_profile(ctx);
        if (ctx.command == "solve") return cmd_solve(ctx);
        if (ctx.command == "sweep") return cmd_sweep(ctx);
        if (ctx.command == "longtime") return cmd_longtime(ctx);
        if (ctx.command == "verify") return cmd_verify(ctx);
        std::cerr << "unknown command\n";
        return kExitConfig;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const solver_failure& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    } catch (const internal_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}
