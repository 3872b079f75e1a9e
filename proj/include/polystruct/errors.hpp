// errors.hpp -- exception taxonomy shared by all modules.
//
// The CLI maps these onto its exit-code contract:
//   structural_error / std::invalid_argument -> usage (64) at the CLI boundary
//   resource_error                           -> cost-guard message (64)
//   threshold_error                          -> infeasibility diagnostic (2)
//   verification_error                       -> internal verification failure (1)
#pragma once

#include <stdexcept>
#include <string>

namespace polystruct {

// Malformed input: dimension mismatches, non-prime modulus, singular matrix...
struct structural_error : std::invalid_argument {
    explicit structural_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// A size/cost guard tripped (table too large, enumeration too deep).
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A pipeline stage found its quantitative precondition unmet (e.g. measured
// bias below threshold).  Not a bug: an honest "this instance is infeasible".
struct threshold_error : std::runtime_error {
    std::string stage;
    threshold_error(std::string stage_, const std::string& msg)
        : std::runtime_error(stage_ + ": " + msg), stage(std::move(stage_)) {}
};

// An internal certificate failed its independent re-check.  Always a bug.
struct verification_error : std::logic_error {
    explicit verification_error(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace polystruct
