#pragma once

#include <stdexcept>
#include <string>

namespace fdrelay {

// Bracketing precondition of a root solve failed (no sign change).
struct bracket_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numeric kernel hit a non-finite value or could not converge.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Quadrature ran out of refinement depth; carries the best estimate so far.
struct accuracy_error : std::runtime_error {
    accuracy_error(const std::string& msg, double best, double err)
        : std::runtime_error(msg), best_estimate(best), error_estimate(err) {}
    double best_estimate;
    double error_estimate;
};

struct infeasible_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct unbounded_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The (omega, F) region is empty for the requested budget; the caller must
// use the omega >= pmax branch instead.
struct empty_region_error : std::domain_error {
    using std::domain_error::domain_error;
};

// The solver's case dispatch reached a state that the threshold analysis
// should have excluded.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace fdrelay
