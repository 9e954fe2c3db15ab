#include "fdrelay/twodelta.hpp"

#include "fdrelay/errors.hpp"
#include "fdrelay/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdrelay::twodelta {

double TwoAtomDistribution::mean() const {
    double s = 0.0;
    for (const auto& a : atoms) s += a.weight * a.location;
    return s;
}

std::pair<double, double> lemma1_bounds(double curvature, double a, double b,
                                        double m) {
    if (!(a <= m && m <= b))
        throw std::invalid_argument("lemma1_bounds: need a <= m <= b");
    auto phi = [&](double p) { return std::log1p(curvature * p); };
    if (a == b) return {phi(a), phi(a)};
    const double p_star = (b - m) / (b - a);
    return {p_star * phi(a) + (1.0 - p_star) * phi(b), phi(m)};
}

TwoAtomDistribution solve_two_delta(double gamma1, double gamma2, double a,
                                    double b, double m, double c) {
    if (!(a >= 0.0) || !(a < b))
        throw std::invalid_argument("solve_two_delta: need 0 <= a < b");
    if (!(a <= m && m <= b))
        throw std::invalid_argument("solve_two_delta: need a <= m <= b");
    if (!(gamma1 > 0.0) || !(gamma2 > 0.0))
        throw std::invalid_argument("solve_two_delta: gammas must be positive");

    auto psi = [&](double p) {
        return std::log1p(gamma1 * p) + std::log1p(gamma2 * p);
    };
    // psi is concave, so the attainable range of its moment is given by the
    // endpoint/Jensen bounds for the prescribed mean.
    const double p_star = (b - m) / (b - a);
    const double psi_lo = p_star * psi(a) + (1.0 - p_star) * psi(b);
    const double psi_hi = psi(m);
    const double slack = 1e-9 * std::max(1.0, std::abs(psi_hi));
    if (c < psi_lo - slack || c > psi_hi + slack)
        throw infeasible_error("solve_two_delta: log-moment target outside attainable range");
    c = std::clamp(c, psi_lo, psi_hi); // keep the root bracket sign-definite

    TwoAtomDistribution out;
    if (m == a || m == b) {
        out.atoms = {{m, 1.0}};
        return out;
    }

    if (gamma1 >= gamma2) {
        // Atoms (a, p2), p2 in [m, b]. The psi-moment runs from psi(m) at
        // p2 = m down to the endpoint bound at p2 = b.
        auto h = [&](double p2) {
            const double w1 = (p2 - m) / (p2 - a);
            return w1 * psi(a) + (1.0 - w1) * psi(p2) - c;
        };
        const double p2 = numerics::find_root(h, m, b, 1e-13).root;
        const double w1 = (p2 - m) / (p2 - a);
        if (w1 <= 0.0 || p2 - a <= 0.0)
            out.atoms = {{m, 1.0}};
        else
            out.atoms = {{a, w1}, {p2, 1.0 - w1}};
    } else {
        // Atoms (p1, b), p1 in [a, m].
        auto h = [&](double p1) {
            const double w1 = (b - m) / (b - p1);
            return w1 * psi(p1) + (1.0 - w1) * psi(b) - c;
        };
        const double p1 = numerics::find_root(h, a, m, 1e-13).root;
        const double w1 = (b - m) / (b - p1);
        if (w1 >= 1.0)
            out.atoms = {{m, 1.0}};
        else
            out.atoms = {{p1, w1}, {b, 1.0 - w1}};
    }
    return out;
}

} // namespace fdrelay::twodelta
