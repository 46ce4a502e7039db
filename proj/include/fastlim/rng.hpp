#pragma once

/**
 * @file rng.hpp
 * @brief Seeded random draws with a fixed bit-level mapping, so identical
 *        seeds give identical sequences on every standard library.
 */

#include <cmath>
#include <cstdint>
#include <random>

#include <fastlim/errors.hpp>

namespace fastlim {

// std::uniform_real_distribution is implementation-defined; this maps the
// top 53 engine bits directly, which is reproducible everywhere.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) {
        if (!(lo <= hi)) throw invalid_input("Rng::uniform: lo must be <= hi");
        return lo + (hi - lo) * uniform();
    }

    // log-uniform in [lo, hi], lo > 0
    double log_uniform(double lo, double hi) {
        if (!(lo > 0.0) || !(lo <= hi)) throw invalid_input("Rng::log_uniform: need 0 < lo <= hi");
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) throw invalid_input("Rng::below: n must be > 0");
        return eng_() % n;
    }

  private:
    std::mt19937_64 eng_;
};

}  // namespace fastlim
