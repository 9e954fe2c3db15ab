#pragma once

#include <utility>
#include <vector>

namespace fdrelay::twodelta {

struct Atom {
    double location;
    double weight;
};

/// Discrete distribution of at most two mass points, locations strictly
/// increasing, weights positive and summing to 1.
struct TwoAtomDistribution {
    std::vector<Atom> atoms;

    double mean() const;
    // Moment of an arbitrary scalar function of the location.
    template <class F>
    double moment(F&& f) const {
        double s = 0.0;
        for (const auto& a : atoms) s += a.weight * f(a.location);
        return s;
    }
};

/// Minimizer of  integral f(p) log(1+gamma1 p) dp  over distributions f on
/// [a, b] with mean m and log-moment  integral f psi = c  where
/// psi(p) = log(1+gamma1 p) + log(1+gamma2 p).
///
/// The minimizer pins one atom to an endpoint: (a, p2) when gamma1 >= gamma2
/// and (p1, b) otherwise; the interior location solves the log-moment
/// constraint, which is monotone along the bracket.
TwoAtomDistribution solve_two_delta(double gamma1, double gamma2, double a,
                                    double b, double m, double c);

/// Endpoint/Jensen bounds on integral f(p) log(1+curvature p) dp over
/// distributions on [a, b] with mean m: returns (lower, upper) where
/// lower = p* phi(a) + (1-p*) phi(b), p* = (b-m)/(b-a), and upper = phi(m).
std::pair<double, double> lemma1_bounds(double curvature, double a, double b,
                                        double m);

} // namespace fdrelay::twodelta
