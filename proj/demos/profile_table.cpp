/**
 * @file profile_table.cpp
 * @brief Builds the self-similar limit profile for each domain and
 *        diffusivity case and prints the interface constant, the residuals
 *        of the defining conditions, and a short table of f(eta).
 */

#include <cstdio>

#include <fastlim/limit_profile.hpp>

using namespace fastlim;

namespace {

void show(const char* label, const ProblemSpec& spec) {
    const SelfSimilarProfile prof = make_profile(spec);
    const ProfileResidualReport rep = residual_report(prof);
    std::printf("%s\n", label);
    std::printf("  case %-14s a = %+.10f\n", to_string(prof.limit_case), prof.a);
    std::printf("  residuals: root %.1e  ode %.1e  flux %.1e  stefan %.1e\n",
                rep.root_residual, rep.ode_residual_max, rep.interface_flux_residual,
                rep.stefan_residual);
    std::printf("  %10s %12s %10s %10s\n", "eta", "f", "u", "v");
    const bool whole = spec.variant == DomainVariant::WholeLine;
    for (double eta : {-2.0, -0.5, 0.0, 0.5, 2.0}) {
        if (!whole && eta < 0.0) continue;
        const double f = eval_profile_f(prof, eta);
        const auto [u, v] = eval_limit_uv(prof, eta, 1.0);
        std::printf("  %10.2f %12.6f %10.6f %10.6f\n", eta, f, u, v);
    }
    std::printf("\n");
}

}  // namespace

int main() {
    ProblemSpec spec;
    spec.d_u = 1.0;
    spec.d_v = 0.5;
    spec.U0 = 2.0;
    spec.V0 = 1.0;

    spec.variant = DomainVariant::WholeLine;
    show("whole line, mobile v", spec);

    spec.d_v = 0.0;
    show("whole line, immobile v", spec);

    spec.variant = DomainVariant::HalfLine;
    spec.d_v = 0.5;
    show("half line, mobile v", spec);

    spec.d_v = 0.0;
    show("half line, immobile v", spec);

    // the sign of a follows the diffusive flux comparison
    std::printf("sign classification for (d_u=1, d_v=0.5, U0=2, V0=1): %s\n",
                to_string(classify_sign(1.0, 0.5, 2.0, 1.0)));
    return 0;
}
