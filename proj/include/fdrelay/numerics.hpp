#pragma once

#include <functional>
#include <vector>

namespace fdrelay::numerics {

struct RootResult {
    double root;
    double residual;
    int iterations;
};

/// Brent-style bracketing root finder. Requires f(lo) * f(hi) <= 0; the
/// iterate never leaves the initial bracket. Stops once the bracket width
/// drops below tol * max(1, |root|).
RootResult find_root(const std::function<double(double)>& f, double lo,
                     double hi, double tol = 1e-12);

struct MaxResult {
    double arg;
    double value;
};

/// Golden-section maximizer guarded by a uniform pre-scan (default 33 points)
/// that picks the best cell before refinement, so gross non-unimodality does
/// not silently return a poor local maximum.
MaxResult maximize_scalar(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-10, int prescan = 33);

/// Adaptive Gauss-Kronrod (7,15) quadrature to a relative tolerance.
/// Throws accuracy_error (carrying the best estimate) if the interval budget
/// is exhausted first.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol = 1e-10);

/// maximize objective . x  subject to  eq_matrix x = eq_rhs  and
/// x[i] >= lower_bounds[i], where a lower bound of -infinity marks a free
/// variable. Solved by dense two-phase simplex with Bland anti-cycling.
struct LpProblem {
    std::vector<double> objective;
    std::vector<std::vector<double>> eq_matrix;
    std::vector<double> eq_rhs;
    std::vector<double> lower_bounds; // empty = all zero
};

struct LpSolution {
    std::vector<double> x;
    double value;
};

LpSolution solve_lp(const LpProblem& problem);

} // namespace fdrelay::numerics
