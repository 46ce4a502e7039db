#pragma once

/**
 * @file errors.hpp
 * @brief Error taxonomy shared by all modules.
 *
 * invalid_input  - caller handed in something outside a documented precondition.
 * solver_failure - an iteration exhausted its budget before reaching tolerance.
 * internal_error - a condition that is impossible if the math holds (e.g. a
 *                  bracketing failure for a provably monotone residual).
 */

#include <stdexcept>
#include <string>

namespace fastlim {

struct invalid_input : std::invalid_argument {
    explicit invalid_input(const std::string& msg) : std::invalid_argument(msg) {}
};

struct solver_failure : std::runtime_error {
    explicit solver_failure(const std::string& msg) : std::runtime_error(msg) {}
};

struct internal_error : std::logic_error {
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace fastlim
