#include "fdrelay/twodelta.hpp"

#include "fdrelay/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace fdrelay;
using namespace fdrelay::twodelta;

namespace {

double psi_of(double g1, double g2, double p) {
    return std::log1p(g1 * p) + std::log1p(g2 * p);
}

} // namespace

TEST_CASE("lemma1_bounds") {
    const auto [lo, hi] = lemma1_bounds(1.0, 0.0, 1.0, 0.5);
    CHECK(lo == doctest::Approx(0.34657359027997264).epsilon(1e-14));
    CHECK(hi == doctest::Approx(0.4054651081081644).epsilon(1e-14));
    CHECK(lo <= hi);

    // pinned means collapse both bounds onto phi(m)
    const auto [lo_a, hi_a] = lemma1_bounds(2.5, 0.2, 1.4, 0.2);
    CHECK(lo_a == doctest::Approx(std::log1p(2.5 * 0.2)).epsilon(1e-14));
    CHECK(lo_a == hi_a);
    const auto [lo_b, hi_b] = lemma1_bounds(2.5, 0.2, 1.4, 1.4);
    CHECK(lo_b == doctest::Approx(std::log1p(2.5 * 1.4)).epsilon(1e-14));
    CHECK(lo_b == hi_b);
}

TEST_CASE("lemma1 sandwich holds for random discrete distributions") {
    std::mt19937_64 rng(113);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 1000; ++rep) {
        const double a = u(rng), width = 0.2 + 2.0 * u(rng), b = a + width;
        const double curv = 0.1 + 60.0 * u(rng);
        const int n = 2 + static_cast<int>(u(rng) * 5);
        std::vector<double> p(n), w(n);
        double wsum = 0.0, mean = 0.0;
        for (int i = 0; i < n; ++i) {
            p[i] = a + width * u(rng);
            w[i] = 0.05 + u(rng);
            wsum += w[i];
        }
        double val = 0.0;
        for (int i = 0; i < n; ++i) {
            w[i] /= wsum;
            mean += w[i] * p[i];
            val += w[i] * std::log1p(curv * p[i]);
        }
        const auto [lo, hi] = lemma1_bounds(curv, a, b, mean);
        CHECK(val >= lo - 1e-12);
        CHECK(val <= hi + 1e-12);
    }
}

TEST_CASE("pinned mean returns a single atom") {
    const auto d = solve_two_delta(2.0, 3.0, 0.1, 1.0, 0.1, psi_of(2.0, 3.0, 0.1));
    REQUIRE(d.atoms.size() == 1);
    CHECK(d.atoms[0].location == 0.1);
    CHECK(d.atoms[0].weight == 1.0);
}

TEST_CASE("jensen corner reproduces the point mass") {
    // c at the attainable maximum forces f = delta(m)
    const double c = psi_of(1.0, 1.0, 0.5);
    const auto d = solve_two_delta(1.0, 1.0, 0.0, 1.0, 0.5, c);
    CHECK(d.mean() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(d.moment([&](double p) { return psi_of(1.0, 1.0, p); }) ==
          doctest::Approx(c).epsilon(1e-10));
    CHECK(d.moment([](double p) { return std::log1p(p); }) ==
          doctest::Approx(std::log1p(0.5)).epsilon(1e-9));
}

TEST_CASE("branch selection follows the gamma order") {
    // g1 < g2: atoms sit at (p1, b)
    const auto hi_form = solve_two_delta(39.81, 996.5, 0.0, 0.2, 0.1, 4.5);
    REQUIRE(hi_form.atoms.size() == 2);
    CHECK(hi_form.atoms[1].location == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(hi_form.atoms[0].location < 0.1);

    // g1 > g2: atoms sit at (a, p2)
    const auto lo_form = solve_two_delta(996.5, 39.81, 0.0, 0.2, 0.1, 4.5);
    REQUIRE(lo_form.atoms.size() == 2);
    CHECK(lo_form.atoms[0].location == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(lo_form.atoms[1].location > 0.1);
}

TEST_CASE("constraints are reproduced exactly") {
    std::mt19937_64 rng(229);
    for (int rep = 0; rep < 200; ++rep) {
        const auto ins = testsup::random_two_delta_instance(rng);
        const auto d = solve_two_delta(ins.g1, ins.g2, ins.a, ins.b, ins.m, ins.c);
        double wsum = 0.0;
        for (const auto& at : d.atoms) {
            CHECK(at.weight > 0.0);
            CHECK(at.location >= ins.a - 1e-12);
            CHECK(at.location <= ins.b + 1e-12);
            wsum += at.weight;
        }
        if (d.atoms.size() == 2) CHECK(d.atoms[0].location < d.atoms[1].location);
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(d.mean() == doctest::Approx(ins.m).epsilon(1e-10));
        CHECK(d.moment([&](double p) { return psi_of(ins.g1, ins.g2, p); }) ==
              doctest::Approx(ins.c).epsilon(1e-10));
    }
}

TEST_CASE("objective matches the discretized LP") {
    std::mt19937_64 rng(331);
    for (int rep = 0; rep < 40; ++rep) {
        const auto ins = testsup::random_two_delta_instance(rng);
        const auto d = solve_two_delta(ins.g1, ins.g2, ins.a, ins.b, ins.m, ins.c);
        const double closed =
            d.moment([&](double p) { return std::log1p(ins.g1 * p); });
        const double lp = testsup::two_delta_lp_objective(ins.g1, ins.g2, ins.a,
                                                          ins.b, ins.m, ins.c);
        // grid restriction can only raise the minimum
        CHECK(lp >= closed - 1e-9);
        CHECK(lp - closed < 2e-4);
    }
}

TEST_CASE("selection tie at gamma1 = gamma2 is benign") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 50; ++rep) {
        const double g = 0.5 + 40.0 * u(rng);
        const double a = 0.2 * u(rng), b = a + 0.5 + u(rng);
        const double m = a + (0.2 + 0.6 * u(rng)) * (b - a);
        auto psi = [&](double p) { return psi_of(g, g, p); };
        const double p_star = (b - m) / (b - a);
        const double c = 0.5 * (p_star * psi(a) + (1 - p_star) * psi(b)) +
                         0.5 * psi(m);
        // nudging gamma2 across the tie flips the branch; objectives agree
        const auto left = solve_two_delta(g, g * (1.0 - 1e-12), a, b, m, c);
        const auto right = solve_two_delta(g, g * (1.0 + 1e-12), a, b, m, c);
        const double obj_left =
            left.moment([&](double p) { return std::log1p(g * p); });
        const double obj_right =
            right.moment([&](double p) { return std::log1p(g * p); });
        CHECK(obj_left == doctest::Approx(obj_right).epsilon(1e-9));
    }
}

TEST_CASE("infeasible targets are rejected") {
    const double c_hi = psi_of(1.0, 1.0, 0.5);
    CHECK_THROWS_AS(solve_two_delta(1.0, 1.0, 0.0, 1.0, 0.5, c_hi + 0.1),
                    infeasible_error);
    CHECK_THROWS_AS(solve_two_delta(1.0, 1.0, 0.0, 1.0, 0.5, -0.5),
                    infeasible_error);
    CHECK_THROWS_AS(solve_two_delta(1.0, 1.0, 0.5, 0.5, 0.5, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(solve_two_delta(-1.0, 1.0, 0.0, 1.0, 0.5, 0.5),
                    std::invalid_argument);
}
