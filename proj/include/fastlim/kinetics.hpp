#pragma once

/**
 * @file kinetics.hpp
 * @brief The interaction rate F(u, v) and its C^1 regularization F_mu.
 *
 * Every kind satisfies, on the evaluation range [0, M]^2:
 *   F(u, 0) = F(0, v) = 0,  F(u, v) > 0 for u, v > 0,
 *   F nondecreasing in each argument.
 *
 * Negative arguments are clamped to 0 before evaluation, so transient
 * undershoots from the solver cannot produce spurious sources.
 *
 * With mu > 0 the evaluated function is F_mu(u, v) = F(u, v) s(u/mu) s(v/mu)
 * where s is the cubic smoothstep; F_mu is continuously differentiable, keeps
 * the zero edges and the monotonicity, and converges to F uniformly on
 * [0, M]^2 as mu -> 0.
 */

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <fastlim/errors.hpp>

namespace fastlim {

enum class KineticsKind { Product, Power, TabulatedMonotone };

namespace detail {

// cubic smoothstep: 0 for r <= 0, 3r^2 - 2r^3 on [0,1], 1 for r >= 1
inline double smoothstep(double r) {
    if (r <= 0.0) return 0.0;
    if (r >= 1.0) return 1.0;
    return r * r * (3.0 - 2.0 * r);
}

inline double smoothstep_prime(double r) {
    if (r <= 0.0 || r >= 1.0) return 0.0;
    return 6.0 * r * (1.0 - r);
}

}  // namespace detail

class Kinetics {
  public:
    static Kinetics product(double mu = 0.0) {
        Kinetics k;
        k.kind_ = KineticsKind::Product;
        k.set_mu(mu);
        return k;
    }

    static Kinetics power(double m, double n, double mu = 0.0) {
        if (!(m > 0.0) || !(n > 0.0) || !std::isfinite(m) || !std::isfinite(n)) {
            throw invalid_input("Kinetics::power: exponents must be positive and finite");
        }
        Kinetics k;
        k.kind_ = KineticsKind::Power;
        k.m_ = m;
        k.n_ = n;
        k.set_mu(mu);
        return k;
    }

    // Rectangular sample table, row-major over (u_nodes x v_nodes), evaluated
    // by bilinear interpolation and clamped to the table hull outside it.
    // Construction rejects tables that break the zero edges or monotonicity.
    static Kinetics tabulated(std::vector<double> u_nodes, std::vector<double> v_nodes,
                              std::vector<double> values, double mu = 0.0) {
        const std::size_t nu = u_nodes.size();
        const std::size_t nv = v_nodes.size();
        if (nu < 2 || nv < 2 || values.size() != nu * nv) {
            throw invalid_input("Kinetics::tabulated: need >= 2 nodes per axis and nu*nv values");
        }
        auto strictly_increasing = [](const std::vector<double>& g) {
            for (std::size_t i = 1; i < g.size(); ++i) {
                if (!(g[i] > g[i - 1])) return false;
            }
            return true;
        };
        if (!strictly_increasing(u_nodes) || !strictly_increasing(v_nodes) ||
            u_nodes.front() != 0.0 || v_nodes.front() != 0.0) {
            throw invalid_input("Kinetics::tabulated: sample grids must start at 0 and increase");
        }
        for (std::size_t i = 0; i < nu; ++i) {
            for (std::size_t j = 0; j < nv; ++j) {
                const double f = values[i * nv + j];
                if (!std::isfinite(f) || f < 0.0) {
                    throw invalid_input("Kinetics::tabulated: values must be finite and >= 0");
                }
                if ((i == 0 || j == 0) && f != 0.0) {
                    throw invalid_input("Kinetics::tabulated: zero edges F(u,0)=F(0,v)=0 violated");
                }
                if (i > 0 && values[(i - 1) * nv + j] > f) {
                    throw invalid_input("Kinetics::tabulated: not nondecreasing in u");
                }
                if (j > 0 && values[i * nv + j - 1] > f) {
                    throw invalid_input("Kinetics::tabulated: not nondecreasing in v");
                }
            }
        }
        Kinetics k;
        k.kind_ = KineticsKind::TabulatedMonotone;
        k.u_nodes_ = std::move(u_nodes);
        k.v_nodes_ = std::move(v_nodes);
        k.values_ = std::move(values);
        k.set_mu(mu);
        return k;
    }

    KineticsKind kind() const { return kind_; }
    double mu() const { return mu_; }
    double exponent_m() const { return m_; }
    double exponent_n() const { return n_; }

    // F(max(u,0), max(v,0)), or F_mu when mu > 0. Throws on non-finite input.
    double operator()(double u, double v) const {
        if (!std::isfinite(u) || !std::isfinite(v)) {
            throw invalid_input("Kinetics: non-finite argument");
        }
        u = u > 0.0 ? u : 0.0;
        v = v > 0.0 ? v : 0.0;
        double f = raw(u, v);
        if (mu_ > 0.0) {
            f *= detail::smoothstep(u / mu_) * detail::smoothstep(v / mu_);
        }
        return f;
    }

    // One-sided partial derivatives of the evaluated (mu-mollified) rate.
    // May be +inf at u = 0 for Power with m < 1; implicit solvers must guard
    // non-finite values. Zero on the clamped region and outside a table hull.
    double partial_u(double u, double v) const {
        if (!std::isfinite(u) || !std::isfinite(v)) {
            throw invalid_input("Kinetics: non-finite argument");
        }
        if (u < 0.0 || v <= 0.0) return 0.0;  // F vanishes identically there
        double fu;
        switch (kind_) {
            case KineticsKind::Product:
                fu = v;
                break;
            case KineticsKind::Power:
                fu = m_ * std::pow(u, m_ - 1.0) * std::pow(v, n_);
                break;
            case KineticsKind::TabulatedMonotone:
            default:
                fu = bilinear_slope(u, v, true);
                break;
        }
        if (mu_ > 0.0) {
            const double su = detail::smoothstep(u / mu_);
            const double sv = detail::smoothstep(v / mu_);
            fu = fu * su * sv + raw(u, v) * detail::smoothstep_prime(u / mu_) / mu_ * sv;
        }
        return fu;
    }

    double partial_v(double u, double v) const {
        if (!std::isfinite(u) || !std::isfinite(v)) {
            throw invalid_input("Kinetics: non-finite argument");
        }
        if (v < 0.0 || u <= 0.0) return 0.0;
        double fv;
        switch (kind_) {
            case KineticsKind::Product:
                fv = u;
                break;
            case KineticsKind::Power:
                fv = n_ * std::pow(u, m_) * std::pow(v, n_ - 1.0);
                break;
            case KineticsKind::TabulatedMonotone:
            default:
                fv = bilinear_slope(u, v, false);
                break;
        }
        if (mu_ > 0.0) {
            const double su = detail::smoothstep(u / mu_);
            const double sv = detail::smoothstep(v / mu_);
            fv = fv * su * sv + raw(u, v) * detail::smoothstep_prime(v / mu_) / mu_ * su;
        }
        return fv;
    }

  private:
    Kinetics() = default;

    void set_mu(double mu) {
        if (mu < 0.0 || !std::isfinite(mu)) {
            throw invalid_input("Kinetics: mu must be finite and >= 0");
        }
        mu_ = mu;
    }

    double raw(double u, double v) const {
        switch (kind_) {
            case KineticsKind::Product:
                return u * v;
            case KineticsKind::Power:
                return std::pow(u, m_) * std::pow(v, n_);
            case KineticsKind::TabulatedMonotone:
            default:
                return bilinear(u, v);
        }
    }

    static std::size_t cell_of(const std::vector<double>& g, double x) {
        std::size_t i = 1;
        while (i + 1 < g.size() && g[i] < x) ++i;
        return i;  // g[i-1] <= x <= g[i] for in-range x
    }

    double bilinear(double u, double v) const {
        u = std::min(u, u_nodes_.back());
        v = std::min(v, v_nodes_.back());
        const std::size_t i = cell_of(u_nodes_, u);
        const std::size_t j = cell_of(v_nodes_, v);
        const double tu = (u - u_nodes_[i - 1]) / (u_nodes_[i] - u_nodes_[i - 1]);
        const double tv = (v - v_nodes_[j - 1]) / (v_nodes_[j] - v_nodes_[j - 1]);
        const std::size_t nv = v_nodes_.size();
        const double f00 = values_[(i - 1) * nv + (j - 1)];
        const double f01 = values_[(i - 1) * nv + j];
        const double f10 = values_[i * nv + (j - 1)];
        const double f11 = values_[i * nv + j];
        return (1.0 - tu) * ((1.0 - tv) * f00 + tv * f01) + tu * ((1.0 - tv) * f10 + tv * f11);
    }

    // exact slope of the piecewise-bilinear surface inside its cell; 0 in the
    // clamped region beyond the hull (the surface is constant there)
    double bilinear_slope(double u, double v, bool along_u) const {
        if (along_u && u >= u_nodes_.back()) return 0.0;
        if (!along_u && v >= v_nodes_.back()) return 0.0;
        u = std::min(u, u_nodes_.back());
        v = std::min(v, v_nodes_.back());
        const std::size_t i = cell_of(u_nodes_, u);
        const std::size_t j = cell_of(v_nodes_, v);
        const double du = u_nodes_[i] - u_nodes_[i - 1];
        const double dv = v_nodes_[j] - v_nodes_[j - 1];
        const double tu = (u - u_nodes_[i - 1]) / du;
        const double tv = (v - v_nodes_[j - 1]) / dv;
        const std::size_t nv = v_nodes_.size();
        const double f00 = values_[(i - 1) * nv + (j - 1)];
        const double f01 = values_[(i - 1) * nv + j];
        const double f10 = values_[i * nv + (j - 1)];
        const double f11 = values_[i * nv + j];
        if (along_u) return ((1.0 - tv) * (f10 - f00) + tv * (f11 - f01)) / du;
        return ((1.0 - tu) * (f01 - f00) + tu * (f11 - f10)) / dv;
    }

    KineticsKind kind_ = KineticsKind::Product;
    double m_ = 1.0;
    double n_ = 1.0;
    double mu_ = 0.0;
    std::vector<double> u_nodes_, v_nodes_, values_;
};

// Free-function spelling of Kinetics::operator().
inline double eval_F(const Kinetics& kin, double u, double v) { return kin(u, v); }

}  // namespace fastlim
