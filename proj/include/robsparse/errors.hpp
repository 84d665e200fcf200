#pragma once

#include <stdexcept>
#include <string>

namespace robsparse {

// Bad caller input: dimension mismatches, out-of-range parameters, malformed configs.
struct input_error : std::invalid_argument {
    explicit input_error(const std::string& what) : std::invalid_argument(what) {}
};

// A numerical routine left its sane operating regime (eigensolver stall,
// ellipsoid shape matrix losing positive definiteness, ...).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// The estimation pipeline cannot produce an estimate (everything pruned away,
// no feasible weights ever visited, degenerate model).
struct estimation_error : std::runtime_error {
    explicit estimation_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace robsparse
