#pragma once

/**
 * @file tridiag.hpp
 * @brief Thomas algorithm for the theta-weighted diffusion systems.
 *
 * Every system assembled by the solver is strictly diagonally dominant
 * (Dirichlet rows are identity, interior rows have diag 1+2*theta*r against
 * off-diagonal mass 2*theta*r), so elimination without pivoting is stable.
 */

#include <cstddef>
#include <vector>

#include <fastlim/errors.hpp>

namespace fastlim {

// Solves the tridiagonal system in place: sub/diag/sup are the bands
// (sub[0] and sup[n-1] are ignored), rhs holds the right-hand side on entry
// and the solution on exit. scratch is resized as needed.
inline void thomas_solve(const std::vector<double>& sub, const std::vector<double>& diag,
                         const std::vector<double>& sup, std::vector<double>& rhs,
                         std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    scratch.resize(n);
    double piv = diag[0];
    if (piv == 0.0) throw internal_error("thomas_solve: zero pivot at row 0");
    scratch[0] = sup[0] / piv;
    rhs[0] /= piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - sub[i] * scratch[i - 1];
        if (piv == 0.0) {
            throw internal_error("thomas_solve: zero pivot at row " + std::to_string(i));
        }
        scratch[i] = sup[i] / piv;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
}

}  // namespace fastlim
