#include "fdrelay/geometry.hpp"

#include "fdrelay/errors.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

using namespace fdrelay;
using namespace fdrelay::geometry;

namespace {

RateContext ctx_for(const ChannelModel& m, const PowerBudget& b) {
    return make_context(m, b);
}

// Uniform interior point of the region with a relative margin off every edge.
OmegaPoint interior_point(const OmegaRegion& reg, std::mt19937_64& rng,
                          double margin = 1e-3) {
    std::uniform_real_distribution<double> u(margin, 1.0 - margin);
    const double w =
        reg.omega_lo() + (reg.omega_hi() - reg.omega_lo()) * u(rng);
    const double f_lo = reg.f_lower(w);
    const double f_hi = reg.f_upper(w);
    return {w, f_lo + (f_hi - f_lo) * u(rng)};
}

} // namespace

TEST_CASE("region vertices") {
    const auto reg = region(0.05, 0.1, 0.2);
    CHECK(reg.v1.omega == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(reg.v1.f == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(reg.v2.omega == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(reg.v2.f == 1.0);
    CHECK(reg.v3.omega == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(reg.v3.f == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

    CHECK(reg.contains({0.12, 0.6}));
    CHECK_FALSE(reg.contains({0.09, 0.6}));
    CHECK_FALSE(reg.contains({0.12, 0.3}));
    // boundary points produced upstream must pass the slackened test
    CHECK(reg.contains({0.1 - 1e-12, 0.5}));
}

TEST_CASE("region boundary collapse at cal = pmax - pbar") {
    const auto reg = region(0.1, 0.1, 0.2);
    CHECK(reg.v1.omega == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(reg.omega_lo() == doctest::Approx(reg.omega_hi()).epsilon(1e-14));
}

TEST_CASE("region with zero source budget") {
    const auto reg = region(0.0, 0.1, 0.2);
    CHECK(reg.v1.omega == 0.0);
    CHECK(reg.v1.f == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(reg.v3.omega == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(reg.v3.f == 0.0);
}

TEST_CASE("region errors") {
    CHECK_THROWS_AS(region(0.11, 0.1, 0.2), empty_region_error);
    CHECK_THROWS_AS(region(0.05, 0.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(region(0.05, 0.3, 0.2), std::invalid_argument);
}

TEST_CASE("r1 bounds coincide on the lower edge") {
    // at V3 both equal (cal/(cal+pbar)) log(1 + beta0 (cal+pbar))
    RateContext ctx{0.05, 0.1, 0.2, 995.2, 39.81};
    const OmegaPoint v3{0.15, 0.05 / 0.15};
    const double expected = (1.0 / 3.0) * std::log1p(39.81 * 0.15);
    CHECK(r1_min(v3, ctx) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(r1_max(v3, ctx) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(expected == doctest::Approx(0.6472768032176462).epsilon(1e-12));
}

TEST_CASE("degenerate budgets zero the bounds") {
    RateContext no_src{0.0, 0.1, 0.2, 995.2, 39.81};
    RateContext no_hop2{0.05, 0.1, 0.2, 0.0, 39.81};
    std::mt19937_64 rng(3);
    const auto reg0 = region(0.0, 0.1, 0.2);
    const auto reg = region(0.05, 0.1, 0.2);
    for (int i = 0; i < 50; ++i) {
        const auto pt0 = interior_point(reg0, rng);
        CHECK(r1_min(pt0, no_src) == 0.0);
        CHECK(r1_max(pt0, no_src) == 0.0);
        CHECK(q1(pt0, no_src) <= 0.0); // q1 = -r2t_max without source power
        const auto pt = interior_point(reg, rng);
        CHECK(r2t_max(pt, no_hop2) == 0.0);
        CHECK(r2t_min(pt, no_hop2) == 0.0);
    }
}

TEST_CASE("bounds reject points outside the region") {
    RateContext ctx{0.05, 0.1, 0.2, 995.2, 39.81};
    CHECK_THROWS_AS(r1_min({0.12, 0.05}, ctx), std::domain_error);
    CHECK_THROWS_AS(r2t_max({0.12, 0.05}, ctx), std::domain_error);
}

TEST_CASE("point A solves q1 = 0 = q2 on the lower edge") {
    // low relay budget opens the interior band: A exists for P_bar = -30 dBW
    const auto model = testsup::channel_a();
    const auto budget = testsup::budget_dbw(-30.0, -20.0, -7.0);
    const auto ctx = ctx_for(model, budget);
    const auto reg = region(ctx.pbar_cal, ctx.p_bar, ctx.p_max);
    const auto a = point_a(reg, ctx);
    REQUIRE(a.has_value());
    CHECK(reg.contains(*a));
    CHECK(std::abs(q1(*a, ctx)) < 1e-9);
    CHECK(std::abs(q2(*a, ctx)) < 1e-9);
    CHECK(a->f == doctest::Approx(ctx.pbar_cal / a->omega).epsilon(1e-12));
}

TEST_CASE("point A absent outside its band") {
    const auto model = testsup::channel_a();
    // below P3: A lies left of V1
    const auto low = ctx_for(model, testsup::budget_dbw(-40.0, -20.0, -7.0));
    CHECK_FALSE(point_a(region(low.pbar_cal, low.p_bar, low.p_max), low).has_value());
    // above P4 (but below P0): A lies right of V3; B and D both exist
    const auto high = ctx_for(model, testsup::budget_dbw(-25.0, -20.0, -7.0));
    const auto reg = region(high.pbar_cal, high.p_bar, high.p_max);
    CHECK_FALSE(point_a(reg, high).has_value());
    CHECK(point_b(reg, high).has_value());
    CHECK(point_d(reg, high).has_value());
}

TEST_CASE("points B and C land on the upper edge") {
    const auto model = testsup::channel_a();
    const auto ctx = ctx_for(model, testsup::budget_dbw(-30.0, -20.0, -7.0));
    const auto reg = region(ctx.pbar_cal, ctx.p_bar, ctx.p_max);
    const auto b = point_b(reg, ctx);
    REQUIRE(b.has_value());
    CHECK(std::abs(q1(*b, ctx)) < 1e-9);
    CHECK(b->f == doctest::Approx(reg.f_upper(b->omega)).epsilon(1e-12));
    const auto c = point_c(reg, ctx);
    REQUIRE(c.has_value());
    CHECK(std::abs(q2(*c, ctx)) < 1e-9);
}

TEST_CASE("q1 flips sign across its root on a horizontal slice") {
    const auto model = testsup::channel_a();
    const auto ctx = ctx_for(model, testsup::budget_dbw(-30.0, -20.0, -7.0));
    const auto reg = region(ctx.pbar_cal, ctx.p_bar, ctx.p_max);
    const auto a = point_a(reg, ctx);
    const auto b = point_b(reg, ctx);
    REQUIRE((a && b));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int i = 0; i < 20; ++i) {
        const double f = a->f + (b->f - a->f) * u(rng);
        double w_lo = f > reg.v1.f
                          ? reg.p_max - (reg.p_max - reg.p_bar - reg.pbar_cal) / f
                          : reg.pbar_cal / f;
        const double w_hi = reg.omega_hi();
        const double g_lo = q1({w_lo, f}, ctx);
        const double g_hi = q1({w_hi, f}, ctx);
        CHECK(g_lo >= -1e-12);
        CHECK(g_hi <= 1e-12);
        // scan: exactly one sign change along the slice
        int flips = 0;
        double prev = g_lo;
        for (int k = 1; k <= 200; ++k) {
            const double w = w_lo + (w_hi - w_lo) * k / 200;
            const double g = q1({w, f}, ctx);
            if (prev > 0 && g < 0) ++flips;
            if (prev < 0 && g > 0) ++flips;
            prev = g;
        }
        CHECK(flips == 1);
    }
}

TEST_CASE("q1 = 0 has at most one solution on the omega = cal + pbar line") {
    for (const auto& [model, Pdbw, pbardbw] :
         {std::tuple{testsup::channel_a(), -25.0, -20.0},
          std::tuple{testsup::channel_a(), -30.0, -20.0},
          std::tuple{testsup::channel_b(), -12.0, -10.0}}) {
        const auto ctx = ctx_for(model, testsup::budget_dbw(Pdbw, pbardbw, -7.0));
        const auto reg = region(ctx.pbar_cal, ctx.p_bar, ctx.p_max);
        const double w = reg.omega_hi();
        int flips = 0;
        double prev = q1({w, reg.v3.f}, ctx);
        for (int k = 1; k <= 10000; ++k) {
            const double f = reg.v3.f + (1.0 - reg.v3.f) * k / 10000.0;
            const double g = q1({w, f}, ctx);
            if ((prev > 0 && g < 0) || (prev < 0 && g > 0)) ++flips;
            prev = g;
        }
        CHECK(flips <= 1);
    }
}

TEST_CASE("bound monotonicity across random region points") {
    // finite-difference signs at interior points, both channel flavors
    const struct {
        ChannelModel model;
        double Pdbw, pbardbw;
    } cases[] = {
        {testsup::channel_a(), -30.0, -20.0},
        {testsup::channel_b(), -14.0, -10.0},
    };
    std::mt19937_64 rng(71);
    for (const auto& c : cases) {
        const auto ctx = ctx_for(c.model, testsup::budget_dbw(c.Pdbw, c.pbardbw, -7.0));
        const auto reg = region(ctx.pbar_cal, ctx.p_bar, ctx.p_max);
        for (int i = 0; i < 500; ++i) {
            const auto pt = interior_point(reg, rng, 5e-3);
            const double hw = 1e-7 * std::max(1.0, pt.omega);
            const double hf = 1e-7;
            const OmegaPoint wplus{pt.omega + hw, pt.f}, wminus{pt.omega - hw, pt.f};
            const OmegaPoint fplus{pt.omega, pt.f + hf}, fminus{pt.omega, pt.f - hf};

            CHECK(r1_min(wplus, ctx) < r1_min(wminus, ctx));
            CHECK(r1_min(fplus, ctx) <= r1_min(fminus, ctx) + 1e-15);
            CHECK(r1_max(wplus, ctx) < r1_max(wminus, ctx));
            CHECK(r1_max(fplus, ctx) == r1_max(fminus, ctx));
            CHECK(r2t_min(wplus, ctx) > r2t_min(wminus, ctx));
            CHECK(r2t_min(fplus, ctx) <= r2t_min(fminus, ctx) + 1e-15);
            CHECK(r2t_max(wplus, ctx) > r2t_max(wminus, ctx));

            // sandwich
            CHECK(r1_min(pt, ctx) <= r1_max(pt, ctx) + 1e-15);
            CHECK(r2t_min(pt, ctx) <= r2t_max(pt, ctx) + 1e-15);
        }
    }
}
