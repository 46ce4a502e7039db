/**
 * @file sharpening_demo.cpp
 * @brief Runs the solver at increasing reaction rates on a coarse grid and
 *        prints how the computed state approaches the self-similar limit:
 *        the windowed L2 error and the segregation integral both shrink.
 */

#include <cstdio>

#include <fastlim/analysis.hpp>
#include <fastlim/solver.hpp>

using namespace fastlim;

int main() {
    ProblemSpec spec;
    spec.T = 0.5;
    validate(spec);

    GridSpec grid;
    grid.x_left = -20.0;
    grid.x_right = 20.0;
    grid.nx = 400;
    grid.dt = 1e-3;
    grid.snapshot_times = {0.1, 0.2, 0.3, 0.4, 0.5};

    const SolverConfig solver;
    const SelfSimilarProfile prof = make_profile(spec);
    std::printf("limit interface constant a = %.6f\n\n", prof.a);
    std::printf("%8s %16s %16s %14s\n", "k", "l2_window_err_u", "segregation", "reaction_mass");

    for (double k : {1.0, 10.0, 100.0, 1000.0}) {
        spec.k = k;
        validate(spec);
        const Trajectory traj = run(spec, grid, solver);
        if (traj.failed) {
            std::fprintf(stderr, "run failed at k = %g: %s\n", k, traj.error.c_str());
            return 1;
        }
        const auto [err_u, err_v] = l2_window_error(traj, prof, 4.0, 0.1);
        std::printf("%8g %16.6e %16.6e %14.6f\n", k, err_u, segregation_integral(traj),
                    reaction_mass(traj));
    }

    std::printf("\nthe error and the segregation integral shrink as k grows;\n");
    std::printf("the total reacted mass stays on one scale across k\n");
    return 0;
}
