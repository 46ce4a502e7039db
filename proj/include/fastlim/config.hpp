#pragma once

/**
 * @file config.hpp
 * @brief Run configuration: the INI schema with sections [problem], [grid],
 *        [solver], [sweep], [analysis], [output], parsed into the typed specs
 *        of the library. Unknown keys are rejected, every value is validated
 *        at parse time.
 */

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fastlim/analysis.hpp>
#include <fastlim/errors.hpp>
#include <fastlim/problem.hpp>
#include <fastlim/solver.hpp>

namespace fastlim {

struct SweepConfig {
    SweepAxis axis = SweepAxis::K;
    std::vector<double> values;
};

struct AnalysisConfig {
    double J = 4.0;
    double t_lo = -1.0;    // < 0 means "0.05 T", resolved against the problem
    int xi_shift = 4;      // contraction shift, in whole cells
    double monotone_slack = 0.02;        // per-step slack for k-sweep decrease
    double time_slack = 0.05;            // per-step slack for long-time decrease
    double comparison_tol = 1e-8;        // of M
    double contraction_coeff = 1e-6;     // of M * |xi|, plus 10 dx^2
    double mass_ratio_max = 2.0;         // reaction-mass uniformity
    double segregation_ratio_max = 0.1;  // largest-k vs smallest-k
    double bounds_tol = 1e-10;           // of M
    double profile_residual_tol = 1e-10;
    int pairs = 20;  // randomized ordered pairs in the comparison suite

    double resolved_t_lo(double T) const { return t_lo < 0.0 ? 0.05 * T : t_lo; }
};

struct RunConfig {
    ProblemSpec spec;
    GridSpec grid;
    SolverConfig solver;
    std::optional<SweepConfig> sweep;
    AnalysisConfig analysis;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
};

namespace detail {

inline std::vector<std::string> split_list(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream iss(text);
    while (std::getline(iss, item, sep)) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        const auto e = item.find_last_not_of(" \t");
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    double val = 0.0;
    try {
        val = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw invalid_input("config: " + key + ": not a number: '" + text + "'");
    }
    if (pos != text.size()) {
        throw invalid_input("config: " + key + ": trailing characters in '" + text + "'");
    }
    return val;
}

inline long long parse_int(const std::string& key, const std::string& text) {
    std::size_t pos = 0;
    long long val = 0;
    try {
        val = std::stoll(text, &pos);
    } catch (const std::exception&) {
        throw invalid_input("config: " + key + ": not an integer: '" + text + "'");
    }
    if (pos != text.size()) {
        throw invalid_input("config: " + key + ": trailing characters in '" + text + "'");
    }
    return val;
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    for (const auto& item : split_list(text, ',')) out.push_back(parse_double(key, item));
    return out;
}

// bump syntax: "center:width:amplitude", comma-separated list
inline std::vector<Bump> parse_bumps(const std::string& key, const std::string& text) {
    std::vector<Bump> out;
    for (const auto& item : split_list(text, ',')) {
        const auto parts = split_list(item, ':');
        if (parts.size() != 3) {
            throw invalid_input("config: " + key + ": bump must be center:width:amplitude");
        }
        Bump b;
        b.center = parse_double(key, parts[0]);
        b.width = parse_double(key, parts[1]);
        b.amplitude = parse_double(key, parts[2]);
        out.push_back(b);
    }
    return out;
}

class SectionReader {
  public:
    SectionReader(const boost::property_tree::ptree& pt, const std::string& name)
        : name_(name) {
        const auto child = pt.get_child_optional(name);
        if (child) {
            for (const auto& kv : *child) values_[kv.first] = kv.second.data();
        }
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return values_.count(key) > 0;
    }

    std::string str(const std::string& key, const std::string& fallback) {
        seen_.insert(key);
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    double num(const std::string& key, double fallback) {
        seen_.insert(key);
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : parse_double(name_ + "." + key, it->second);
    }

    long long integer(const std::string& key, long long fallback) {
        seen_.insert(key);
        const auto it = values_.find(key);
        return it == values_.end() ? fallback : parse_int(name_ + "." + key, it->second);
    }

    std::string require(const std::string& key) {
        seen_.insert(key);
        const auto it = values_.find(key);
        if (it == values_.end()) throw invalid_input("config: missing key " + name_ + "." + key);
        return it->second;
    }

    void reject_unknown() const {
        for (const auto& kv : values_) {
            if (!seen_.count(kv.first)) {
                throw invalid_input("config: unknown key " + name_ + "." + kv.first);
            }
        }
    }

    std::string qualified(const std::string& key) const { return name_ + "." + key; }

  private:
    std::string name_;
    std::map<std::string, std::string> values_;
    std::set<std::string> seen_;
};

inline Kinetics parse_kinetics(SectionReader& sec) {
    const double mu = sec.num("kinetics_mu", 0.0);
    const std::string kind = sec.str("kinetics", "product");
    if (kind == "product") return Kinetics::product(mu);
    if (kind == "power") {
        const double m = sec.num("kinetics_m", 1.0);
        const double n = sec.num("kinetics_n", 1.0);
        return Kinetics::power(m, n, mu);
    }
    if (kind == "tabulated") {
        const auto u_nodes =
            parse_double_list(sec.qualified("kinetics_u_grid"), sec.require("kinetics_u_grid"));
        const auto v_nodes =
            parse_double_list(sec.qualified("kinetics_v_grid"), sec.require("kinetics_v_grid"));
        const auto values =
            parse_double_list(sec.qualified("kinetics_values"), sec.require("kinetics_values"));
        return Kinetics::tabulated(u_nodes, v_nodes, values, mu);
    }
    throw invalid_input("config: problem.kinetics must be product, power, or tabulated");
}

inline InitialData parse_initial(SectionReader& sec) {
    const std::string kind = sec.str("initial", "sharp");
    const bool is_perturbed = kind == "perturbed";
    if (kind != "sharp" && kind != "smoothed" && !is_perturbed) {
        throw invalid_input("config: problem.initial must be sharp, smoothed, or perturbed");
    }
    const std::string base_kind = is_perturbed ? sec.str("initial_base", "sharp") : kind;
    if (base_kind != "sharp" && base_kind != "smoothed") {
        throw invalid_input("config: problem.initial_base must be sharp or smoothed");
    }
    if (base_kind == "sharp" && sec.has("smooth_width")) {
        throw invalid_input("config: problem.smooth_width requires a smoothed base");
    }
    const InitialData base = base_kind == "smoothed"
                                 ? InitialData::smoothed_step(sec.num("smooth_width", 0.5))
                                 : InitialData::sharp_step();
    if (!is_perturbed) {
        if (sec.has("bumps_u") || sec.has("bumps_v")) {
            throw invalid_input("config: bumps require problem.initial = perturbed");
        }
        if (sec.has("initial_base")) {
            throw invalid_input("config: problem.initial_base requires initial = perturbed");
        }
        return base;
    }
    std::vector<Bump> bu, bv;
    if (sec.has("bumps_u")) bu = parse_bumps(sec.qualified("bumps_u"), sec.require("bumps_u"));
    if (sec.has("bumps_v")) bv = parse_bumps(sec.qualified("bumps_v"), sec.require("bumps_v"));
    return InitialData::perturbed(base, std::move(bu), std::move(bv));
}

}  // namespace detail

// Parses and fully validates a configuration. Throws invalid_input with the
// offending key on any problem; a returned config is ready to run.
inline RunConfig parse_config(std::istream& in) {
    boost::property_tree::ptree pt;
    try {
        boost::property_tree::read_ini(in, pt);
    } catch (const std::exception& e) {
        throw invalid_input(std::string("config: malformed INI: ") + e.what());
    }
    for (const auto& sec : pt) {
        static const std::set<std::string> known = {"problem", "grid",     "solver",
                                                    "sweep",   "analysis", "output"};
        if (!known.count(sec.first)) {
            throw invalid_input("config: unknown section [" + sec.first + "]");
        }
    }

    RunConfig cfg;

    detail::SectionReader problem(pt, "problem");
    const std::string variant = problem.str("variant", "whole");
    if (variant == "whole") {
        cfg.spec.variant = DomainVariant::WholeLine;
    } else if (variant == "half") {
        cfg.spec.variant = DomainVariant::HalfLine;
    } else {
        throw invalid_input("config: problem.variant must be whole or half");
    }
    cfg.spec.d_u = problem.num("d_u", 1.0);
    cfg.spec.d_v = problem.num("d_v", 1.0);
    cfg.spec.k = problem.num("k", 1.0);
    cfg.spec.U0 = problem.num("U0", 1.0);
    cfg.spec.V0 = problem.num("V0", 1.0);
    cfg.spec.M = problem.num("M", std::max(cfg.spec.U0, cfg.spec.V0));
    cfg.spec.T = problem.num("T", 1.0);
    cfg.spec.kinetics = detail::parse_kinetics(problem);
    cfg.spec.initial = detail::parse_initial(problem);
    problem.reject_unknown();
    validate(cfg.spec);

    detail::SectionReader grid(pt, "grid");
    cfg.grid.x_left = grid.num("x_left", cfg.spec.variant == DomainVariant::HalfLine ? 0.0 : -40.0);
    cfg.grid.x_right = grid.num("x_right", 40.0);
    cfg.grid.nx = static_cast<int>(grid.integer("nx", 2000));
    cfg.grid.dt = grid.num("dt", 2e-4);
    if (grid.has("snapshot_times")) {
        cfg.grid.snapshot_times = detail::parse_double_list(grid.qualified("snapshot_times"),
                                                            grid.require("snapshot_times"));
    }
    grid.reject_unknown();
    validate_grid(cfg.spec, cfg.grid);

    detail::SectionReader solver(pt, "solver");
    const std::string scheme = solver.str("scheme", "strang");
    if (scheme != "strang") throw invalid_input("config: solver.scheme must be strang");
    cfg.solver.scheme = Scheme::StrangSplit;
    cfg.solver.diffusion_theta = solver.num("theta", 1.0);
    cfg.solver.reaction_tol = solver.num("reaction_tol", 1e-12);
    cfg.solver.max_reaction_iters =
        static_cast<int>(solver.integer("max_reaction_iters", 100));
    solver.reject_unknown();
    validate(cfg.solver);

    if (pt.get_child_optional("sweep")) {
        detail::SectionReader sweep(pt, "sweep");
        SweepConfig sc;
        const std::string axis = sweep.require("axis");
        if (axis == "k") {
            sc.axis = SweepAxis::K;
        } else if (axis == "d_v") {
            sc.axis = SweepAxis::Dv;
        } else if (axis == "time") {
            sc.axis = SweepAxis::Time;
        } else {
            throw invalid_input("config: sweep.axis must be k, d_v, or time");
        }
        sc.values = detail::parse_double_list(sweep.qualified("values"), sweep.require("values"));
        if (sc.values.empty()) throw invalid_input("config: sweep.values is empty");
        for (std::size_t i = 0; i < sc.values.size(); ++i) {
            if (!(sc.values[i] > 0.0) || !std::isfinite(sc.values[i])) {
                throw invalid_input("config: sweep.values must be positive and finite");
            }
            if (i > 0 && !(sc.values[i] > sc.values[i - 1])) {
                throw invalid_input("config: sweep.values must be strictly increasing");
            }
        }
        sweep.reject_unknown();
        cfg.sweep = std::move(sc);
    }

    detail::SectionReader analysis(pt, "analysis");
    cfg.analysis.J = analysis.num("J", 4.0);
    cfg.analysis.t_lo = analysis.num("t_lo", -1.0);
    cfg.analysis.xi_shift = static_cast<int>(analysis.integer("xi_shift", 4));
    cfg.analysis.monotone_slack = analysis.num("monotone_slack", 0.02);
    cfg.analysis.time_slack = analysis.num("time_slack", 0.05);
    cfg.analysis.comparison_tol = analysis.num("comparison_tol", 1e-8);
    cfg.analysis.contraction_coeff = analysis.num("contraction_coeff", 1e-6);
    cfg.analysis.mass_ratio_max = analysis.num("mass_ratio_max", 2.0);
    cfg.analysis.segregation_ratio_max = analysis.num("segregation_ratio_max", 0.1);
    cfg.analysis.bounds_tol = analysis.num("bounds_tol", 1e-10);
    cfg.analysis.profile_residual_tol = analysis.num("profile_residual_tol", 1e-10);
    cfg.analysis.pairs = static_cast<int>(analysis.integer("pairs", 20));
    cfg.seed = static_cast<std::uint64_t>(analysis.integer("seed", 1));
    analysis.reject_unknown();
    if (!(cfg.analysis.J >= 0.0) || !std::isfinite(cfg.analysis.J)) {
        throw invalid_input("config: analysis.J must be >= 0");
    }
    if (cfg.analysis.xi_shift < 0) throw invalid_input("config: analysis.xi_shift must be >= 0");
    if (cfg.analysis.pairs < 1) throw invalid_input("config: analysis.pairs must be >= 1");
    for (double s : {cfg.analysis.monotone_slack, cfg.analysis.time_slack,
                     cfg.analysis.comparison_tol, cfg.analysis.contraction_coeff,
                     cfg.analysis.bounds_tol, cfg.analysis.profile_residual_tol}) {
        if (!(s >= 0.0) || !std::isfinite(s)) {
            throw invalid_input("config: analysis tolerances must be finite and >= 0");
        }
    }
    if (!(cfg.analysis.mass_ratio_max >= 1.0)) {
        throw invalid_input("config: analysis.mass_ratio_max must be >= 1");
    }
    if (!(cfg.analysis.segregation_ratio_max > 0.0)) {
        throw invalid_input("config: analysis.segregation_ratio_max must be > 0");
    }

    detail::SectionReader output(pt, "output");
    cfg.output_dir = output.str("dir", "out");
    output.reject_unknown();

    return cfg;
}

inline RunConfig parse_config_text(const std::string& text) {
    std::istringstream iss(text);
    return parse_config(iss);
}

}  // namespace fastlim
