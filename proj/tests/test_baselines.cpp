#include "fdrelay/baselines.hpp"

#include "fdrelay/allocator.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace fdrelay;
using namespace fdrelay::baselines;

namespace {

ChannelModel channel_a_tiny_si() {
    // self-interference pushed 30 orders of magnitude down: FD, IP and ideal
    // schemes must collapse onto each other
    return channel_from_pathloss(500.0, 2.4e9, 3.0, db_to_watts(-151.0), -300.0);
}

// dense trapezoid reference for the Gaussian interference expectation
double trapezoid_reference(const ChannelModel& m, double P, double var, int n) {
    const double hi = 8.0 * std::sqrt(var);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
    auto f = [&](double x) {
        return std::log1p(P * m.h1_gain / (m.noise_power + m.si_factor * x * x)) *
               norm * std::exp(-x * x / (2.0 * var));
    };
    double acc = 0.5 * (f(-hi) + f(hi));
    for (int i = 1; i < n; ++i) acc += f(-hi + 2.0 * hi * i / n);
    return acc * 2.0 * hi / n;
}

} // namespace

TEST_CASE("fd_ideal") {
    const auto model = testsup::channel_a();
    const auto r = fd_ideal(model, testsup::budget_dbw(0.0));
    // second hop binds: min(log(1+P h1/N0), log(1+pbar v)) = log(1+pbar v)
    CHECK(r.rate == doctest::Approx(std::log1p(0.1 * model.v())).epsilon(1e-12));
    CHECK(fd_ideal(model, testsup::budget_dbw(-300.0)).rate <= 1e-10);
    CHECK(fd_ideal(model, make_budget(0.0, 0.2, 1.0)).rate == 0.0);
}

TEST_CASE("fd_ip quadrature matches a dense trapezoid") {
    const auto model = testsup::channel_a();
    const auto budget = make_budget(0.1, db_to_watts(-7.0), 0.1);
    const double hop1 = gaussian_interference_rate(model, 0.1, 0.1);
    const double ref = trapezoid_reference(model, 0.1, 0.1, 2'000'000);
    CHECK(std::abs(hop1 - ref) < 1e-8);
    const auto r = fd_ip(model, budget);
    CHECK(r.rate == doctest::Approx(std::min(hop1, std::log1p(0.1 * model.v())))
                        .epsilon(1e-12));
}

TEST_CASE("fd_ip saturates to the second hop at large source power") {
    const auto model = testsup::channel_a();
    const auto r = fd_ip(model, make_budget(0.1, db_to_watts(-7.0), 100.0));
    CHECK(r.rate == doctest::Approx(std::log1p(0.1 * model.v())).epsilon(1e-12));
}

TEST_CASE("fd_ip equals fd_ideal without self-interference") {
    const auto model = channel_a_tiny_si();
    for (double P : {-20.0, -10.0, 0.0}) {
        const auto budget = testsup::budget_dbw(P);
        CHECK(fd_ip(model, budget).rate ==
              doctest::Approx(fd_ideal(model, budget).rate).epsilon(1e-9));
    }
}

TEST_CASE("hd matches a dense grid scan") {
    const auto model = testsup::channel_a();
    const auto budget = testsup::budget_dbw(-20.0);
    const auto res = hd(model, budget);
    auto rate = [&](double t) {
        const double first =
            t < 1.0 ? (1.0 - t) * std::log1p(model.h1_gain * budget.P_bar /
                                             ((1.0 - t) * model.noise_power))
                    : 0.0;
        const double second =
            t * std::log1p(budget.p_bar * model.h2_gain / (t * model.noise_power));
        return std::min(first, second);
    };
    const double lo = budget.p_bar / budget.p_max;
    double grid_best = -1.0;
    for (int i = 0; i <= 1'000'000; ++i) {
        grid_best = std::max(grid_best, rate(lo + (1.0 - lo) * i / 1e6));
    }
    CHECK(std::abs(res.rate - grid_best) < 1e-6);
    const double t = std::get<HdDetail>(res.detail).t;
    CHECK(t >= lo - 1e-12);
    // either the relay-peak boundary binds or the two hops balance
    if (t > lo + 1e-9 && t < 1.0 - 1e-9) {
        const double first = (1.0 - t) * std::log1p(model.h1_gain * budget.P_bar /
                                                    ((1.0 - t) * model.noise_power));
        const double second =
            t * std::log1p(budget.p_bar * model.h2_gain / (t * model.noise_power));
        CHECK(std::abs(first - second) < 1e-6);
    }
}

TEST_CASE("hd degenerate budgets") {
    const auto model = testsup::channel_a();
    CHECK(hd(model, make_budget(0.1, 0.2, 0.0)).rate == 0.0);
    const auto pinned = hd(model, make_budget(0.2, 0.2, 1.0));
    CHECK(pinned.rate == 0.0); // relay must transmit the whole frame
    CHECK(std::get<HdDetail>(pinned.detail).t == 1.0);
}

TEST_CASE("fd_hd dominates both corner schemes and respects its budget") {
    const auto model = testsup::channel_a();
    for (double P : {-30.0, -20.0, -12.0, -5.0, 0.0}) {
        const auto budget = testsup::budget_dbw(P);
        const auto res = fd_hd(model, budget);
        CHECK(res.rate >= fd_ip(model, budget).rate - 1e-12);
        CHECK(res.rate >= hd(model, budget).rate - 1e-12);
        CHECK(res.rate <= fd_ideal(model, budget).rate + 1e-9);
        const auto d = std::get<FdHdDetail>(res.detail);
        CHECK(std::abs(d.t_a + d.t_b + d.t_c - 1.0) < 1e-8);
        CHECK(std::abs(d.t_a * d.P_a + d.t_c * d.P_c - budget.P_bar) <
              1e-8 * std::max(1.0, budget.P_bar));
        CHECK(std::abs(d.t_b * d.p_b + d.t_c * d.p_c - budget.p_bar) < 1e-8);
        CHECK(d.p_b <= budget.p_max * (1.0 + 1e-9));
        CHECK(d.p_c <= budget.p_max * (1.0 + 1e-9));
    }
}

TEST_CASE("fd_hd collapses to fd_ip when the relay is pinned at its peak") {
    const auto model = testsup::channel_a();
    const auto budget = make_budget(db_to_watts(-7.0), db_to_watts(-7.0),
                                    db_to_watts(-10.0));
    const double gap =
        std::abs(fd_hd(model, budget).rate - fd_ip(model, budget).rate);
    CHECK(gap < 1e-4);
}

TEST_CASE("fd_hd equals fd_ideal without self-interference") {
    const auto model = channel_a_tiny_si();
    for (double P : {-20.0, -10.0}) {
        const auto budget = testsup::budget_dbw(P);
        CHECK(std::abs(fd_hd(model, budget).rate - fd_ideal(model, budget).rate) <
              1e-6);
    }
}

TEST_CASE("fd_hd is within 1e-3 of a finer pure grid search") {
    const auto model = testsup::channel_a();
    for (double P : {-20.0, -8.0}) {
        const auto budget = testsup::budget_dbw(P);
        const double ours = fd_hd(model, budget).rate;
        // independent 25^4-style scan (no descent); time axes linear to
        // differ from the implementation's log spacing
        double finer = -1.0;
        const int n = 24;
        const double v_w = model.h2_gain / model.noise_power;
        for (int ia = 0; ia <= n; ++ia) {
            const double t_a = double(ia) / n;
            for (int ic = 0; t_a + double(ic) / n <= 1.0 + 1e-12 && ic <= n; ++ic) {
                const double t_c = double(ic) / n;
                const double t_b = 1.0 - t_a - t_c;
                for (int ip = 0; ip <= n; ++ip) {
                    const double P_c =
                        t_c > 0 ? budget.P_bar / t_c * ip / n : 0.0;
                    for (int iq = 0; iq <= n; ++iq) {
                        const double p_c =
                            t_c > 0
                                ? std::min(budget.p_max, budget.p_bar / t_c) * iq / n
                                : 0.0;
                        const double P_rem = budget.P_bar - t_c * P_c;
                        const double p_rem = budget.p_bar - t_c * p_c;
                        if (P_rem < -1e-12 || p_rem < -1e-12) continue;
                        double hop1 = 0.0, hop2 = 0.0;
                        if (t_c > 0) {
                            hop1 += t_c * gaussian_interference_rate(model, P_c, p_c);
                            hop2 += t_c * std::log1p(v_w * p_c);
                        }
                        if (t_a > 0)
                            hop1 += t_a * std::log1p(model.h1_gain * P_rem /
                                                     (t_a * model.noise_power));
                        else if (P_rem > 1e-12)
                            continue;
                        if (t_b > 0) {
                            const double p_b = p_rem / t_b;
                            if (p_b > budget.p_max * (1 + 1e-12)) continue;
                            hop2 += t_b * std::log1p(v_w * p_b);
                        } else if (p_rem > 1e-12) {
                            continue;
                        }
                        finer = std::max(finer, std::min(hop1, hop2));
                        if (t_c == 0.0) break;
                    }
                    if (t_c == 0.0) break;
                }
            }
        }
        CHECK(ours >= finer - 1e-3);
    }
}
