#include "fdrelay/allocator.hpp"

#include "fdrelay/errors.hpp"
#include "fdrelay/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace fdrelay::allocator {

namespace {

constexpr double qnan = std::numeric_limits<double>::quiet_NaN();
constexpr double inf = std::numeric_limits<double>::infinity();

double cal_to_dbw(double cal, const ChannelModel& model) {
    if (std::isinf(cal)) return inf;
    if (!(cal > 0.0)) return qnan;
    return watts_to_db(cal / model.src_scale());
}

// log[(1 + beta0 p)(1 + v p)], the joint log-moment kernel.
double psi(double p, const geometry::RateContext& ctx) {
    return std::log1p(ctx.beta0 * p) + std::log1p(ctx.v * p);
}

double threshold_p4(double p_bar, double v, double beta0) {
    if (p_bar == 0.0) return 0.0;
    auto g = [&](double cal) {
        return p_bar * std::log1p(v * (cal + p_bar)) -
               cal * std::log1p(beta0 * (cal + p_bar));
    };
    double hi = std::max(p_bar, 1.0);
    while (g(hi) > 0.0) {
        hi *= 2.0;
        if (hi > 1e30) throw numeric_error("threshold_p4: no sign change found");
    }
    return numerics::find_root(g, 0.0, hi, 1e-13).root;
}

// find_root with endpoint slack: at band boundaries the root sits exactly on
// lo or hi and rounding can erase the sign change.
double root_in_bracket(const std::function<double(double)>& g, double lo,
                       double hi) {
    const double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if (glo * ghi > 0.0) {
        constexpr double slack = 1e-9;
        if (std::abs(glo) <= slack && std::abs(glo) <= std::abs(ghi)) return lo;
        if (std::abs(ghi) <= slack) return hi;
    }
    return numerics::find_root(g, lo, hi, 1e-13).root;
}

DuplexMode classify_mode(double source_power, double relay_power) {
    const bool src = source_power > 0.0;
    const bool rel = relay_power > 0.0;
    if (src && rel) return DuplexMode::FD;
    if (rel) return DuplexMode::HD_TX;
    if (src) return DuplexMode::HD_RX;
    return DuplexMode::Idle;
}

Phase make_phase(double duration, double source_watts, double relay_watts,
                 double p_max) {
    relay_watts = std::max(relay_watts, 0.0);
    if (relay_watts > p_max && relay_watts <= p_max + 1e-12)
        relay_watts = p_max; // root-finder slack only
    source_watts = std::max(source_watts, 0.0);
    return Phase{duration, source_watts, relay_watts,
                 classify_mode(source_watts, relay_watts)};
}

void push_phase(std::vector<Phase>& phases, Phase ph) {
    if (ph.duration > 1e-15) phases.push_back(ph);
}

} // namespace

const char* region_label_name(RegionLabel label) {
    switch (label) {
        case RegionLabel::T1Low: return "T1-low";
        case RegionLabel::T1Mid: return "T1-mid";
        case RegionLabel::T1High: return "T1-high";
        case RegionLabel::T2a: return "T2-a";
        case RegionLabel::T2b: return "T2-b";
        case RegionLabel::T2cdVge: return "T2-cd-vge";
        case RegionLabel::T2cVlt: return "T2-c-vlt";
        case RegionLabel::T2dVlt: return "T2-d-vlt";
        case RegionLabel::OracleScan: return "oracle-scan";
    }
    return "?";
}

Thresholds thresholds(const ChannelModel& model, const PowerBudget& budget) {
    const double pb = budget.p_bar;
    const double pm = budget.p_max;
    const double v = model.v();
    const double b0 = model.beta0();

    Thresholds th;
    th.p0 = pm - pb;
    const double k = (1.0 + pm * b0) * (1.0 + pm * v);
    th.p1 = (std::pow(k, pb / pm) - 1.0 - pb * b0) / b0;
    th.p2 = pb * v * (1.0 + pb * b0) / b0;
    if (pb == pm)
        th.p3 = inf; // the exponent pb/(pm-pb) diverges; Table-2 band is empty
    else
        th.p3 = (pm - pb) / (pm * b0) *
                (std::pow(1.0 + pm * v, pb / (pm - pb)) - 1.0);
    th.p4 = threshold_p4(pb, v, b0);

    th.p0_dbw = cal_to_dbw(th.p0, model);
    th.p1_dbw = cal_to_dbw(th.p1, model);
    th.p2_dbw = cal_to_dbw(th.p2, model);
    th.p3_dbw = cal_to_dbw(th.p3, model);
    th.p4_dbw = cal_to_dbw(th.p4, model);
    return th;
}

double solve_p1_eq14(const geometry::RateContext& ctx) {
    const double pb = ctx.p_bar;
    const double pm = ctx.p_max;
    const double target = std::log1p(ctx.beta0 * (ctx.pbar_cal + pb));
    auto g = [&](double p1) {
        return (pm - pb) / (pm - p1) * (psi(p1, ctx) - psi(pm, ctx)) -
               (target - psi(pm, ctx));
    };
    return root_in_bracket(g, 0.0, pb);
}

double solve_p2_eq16(const geometry::RateContext& ctx) {
    const double pb = ctx.p_bar;
    if (!(pb > 0.0))
        throw std::invalid_argument("solve_p2_eq16: requires p_bar > 0");
    const double target = std::log1p(ctx.beta0 * (ctx.pbar_cal + pb));
    auto g = [&](double p2) { return pb / p2 * psi(p2, ctx) - target; };
    return root_in_bracket(g, pb, ctx.p_max);
}

std::pair<geometry::OmegaPoint, double>
solve_omega_star(const geometry::OmegaRegion& reg, const geometry::RateContext& ctx) {
    // q1 is strictly decreasing in omega, so each horizontal F-slice of the
    // region holds at most one curve point and bisection is safe.
    auto curve_omega = [&](double f) {
        double lo = reg.omega_lo();
        if (f > reg.v1.f && f > 0.0)
            lo = std::max(lo, reg.p_max - (reg.p_max - reg.p_bar - reg.pbar_cal) / f);
        else if (f > 0.0)
            lo = std::max(lo, reg.pbar_cal / f);
        const double hi = reg.omega_hi();
        auto g = [&](double w) { return geometry::q1({w, f}, ctx); };
        if (g(lo) <= 0.0) return lo;
        if (g(hi) >= 0.0) return hi;
        return numerics::find_root(g, lo, hi, 1e-13).root;
    };

    // Curve endpoints: exactly two of A (lower edge), B (upper edge) and
    // D (right edge) exist in the bands this solver serves.
    std::vector<double> fs;
    if (auto b = geometry::point_b(reg, ctx)) fs.push_back(b->f);
    if (auto a = geometry::point_a(reg, ctx)) fs.push_back(a->f);
    if (auto d = geometry::point_d(reg, ctx)) fs.push_back(d->f);
    if (fs.size() < 2)
        throw internal_error("solve_omega_star: curve endpoints not found");
    const double f_lo = *std::min_element(fs.begin(), fs.end());
    const double f_hi = *std::max_element(fs.begin(), fs.end());

    auto objective = [&](double f) {
        return geometry::r1_min({curve_omega(f), f}, ctx);
    };
    const auto best = numerics::maximize_scalar(objective, f_lo, f_hi, 1e-12);
    const geometry::OmegaPoint pt{curve_omega(best.arg), best.arg};
    return {pt, geometry::r1_min(pt, ctx)};
}

double source_power_profile(double omega, double relay_power,
                            const ChannelModel& model,
                            std::optional<double> source_peak) {
    const double watts =
        std::max(omega - relay_power, 0.0) / model.src_scale();
    if (source_peak) return std::min(watts, *source_peak);
    return watts;
}

AllocationPlan solve(const ChannelModel& model, const PowerBudget& budget) {
    const auto ctx = geometry::make_context(model, budget);
    const auto th = thresholds(model, budget);
    const double cal = ctx.pbar_cal;
    const double pb = budget.p_bar;
    const double pm = budget.p_max;
    const double b0 = ctx.beta0;
    const double v = ctx.v;
    const double denorm = 1.0 / model.src_scale(); // beta / |h1|^2

    AllocationPlan plan;

    if (cal >= th.p0) {
        // Water level above the relay peak: omega = cal + pbar.
        plan.omega = cal + pb;
        const double full = std::log1p(b0 * (cal + pb));
        if (cal <= th.p1) {
            plan.region = RegionLabel::T1Low;
            const double ta = pb / pm;
            push_phase(plan.phases,
                       make_phase(ta, denorm * (cal + pb - pm), pm, pm));
            push_phase(plan.phases,
                       make_phase(1.0 - ta, denorm * (cal + pb), 0.0, pm));
            plan.rate = full - ta * std::log1p(b0 * pm);
        } else if (cal >= th.p2) {
            plan.region = RegionLabel::T1High;
            push_phase(plan.phases, make_phase(1.0, denorm * cal, pb, pm));
            plan.rate = std::log1p(v * pb);
        } else if (v >= b0) {
            plan.region = RegionLabel::T1Mid;
            const double p1 = solve_p1_eq14(ctx);
            const double ta = (pb - p1) / (pm - p1);
            const double tb = (pm - pb) / (pm - p1);
            push_phase(plan.phases,
                       make_phase(ta, denorm * (cal + pb - pm), pm, pm));
            push_phase(plan.phases,
                       make_phase(tb, denorm * (cal + pb - p1), p1, pm));
            plan.rate = full - tb * std::log1p(b0 * p1) - ta * std::log1p(b0 * pm);
        } else {
            plan.region = RegionLabel::T1Mid;
            const double p2 = solve_p2_eq16(ctx);
            const double ta = pb / p2;
            push_phase(plan.phases,
                       make_phase(ta, denorm * (cal + pb - p2), p2, pm));
            push_phase(plan.phases,
                       make_phase(1.0 - ta, denorm * (cal + pb), 0.0, pm));
            plan.rate = full - ta * std::log1p(b0 * p2);
        }
    } else {
        if (cal <= th.p3) {
            plan.region = RegionLabel::T2a;
            plan.omega = pm * cal / (pm - pb);
            const double ta = pb / pm;
            push_phase(plan.phases, make_phase(ta, 0.0, pm, pm));
            push_phase(plan.phases,
                       make_phase(1.0 - ta, denorm * plan.omega, 0.0, pm));
            plan.rate = (1.0 - ta) * std::log1p(b0 * plan.omega);
        } else if (cal >= std::max(th.p2, th.p4)) {
            plan.region = RegionLabel::T2b;
            plan.omega = cal + pb;
            push_phase(plan.phases, make_phase(1.0, denorm * cal, pb, pm));
            plan.rate = std::log1p(v * pb);
        } else if (v >= b0) {
            plan.region = RegionLabel::T2cdVge;
            const auto reg = geometry::region(cal, pb, pm);
            const auto [pt, rate] = solve_omega_star(reg, ctx);
            plan.omega = pt.omega;
            plan.rate = rate;
            const double f = pt.f;
            push_phase(plan.phases,
                       make_phase(1.0 - f, 0.0,
                                  (cal + pb - f * pt.omega) / (1.0 - f), pm));
            push_phase(plan.phases,
                       make_phase(f, denorm * cal / f, pt.omega - cal / f, pm));
        } else if (cal > th.p4) {
            plan.region = RegionLabel::T2cVlt;
            plan.omega = cal + pb;
            const double p2 = solve_p2_eq16(ctx);
            const double ta = pb / p2;
            push_phase(plan.phases,
                       make_phase(ta, denorm * (cal + pb - p2), p2, pm));
            push_phase(plan.phases,
                       make_phase(1.0 - ta, denorm * (cal + pb), 0.0, pm));
            plan.rate = std::log1p(b0 * (cal + pb)) - ta * std::log1p(b0 * p2);
        } else {
            plan.region = RegionLabel::T2dVlt;
            const auto reg = geometry::region(cal, pb, pm);
            const auto a = geometry::point_a(reg, ctx);
            if (!a) throw internal_error("solve: point A missing in the HD band");
            plan.omega = a->omega;
            const double fa = a->f;
            push_phase(plan.phases, make_phase(1.0 - fa, 0.0, pb / (1.0 - fa), pm));
            push_phase(plan.phases, make_phase(fa, denorm * cal / fa, 0.0, pm));
            plan.rate = fa * std::log1p(b0 * a->omega);
        }
    }

    if (budget.P_max) {
        for (const auto& ph : plan.phases) {
            if (ph.source_power > *budget.P_max * (1.0 + 1e-12)) {
                std::ostringstream os;
                os << "phase source power " << ph.source_power
                   << " W exceeds configured source peak " << *budget.P_max
                   << " W; peak-limited re-optimization is not performed";
                plan.warning = os.str();
                break;
            }
        }
    }
    return plan;
}

std::pair<double, double> phase_rates(const AllocationPlan& plan,
                                      const ChannelModel& model) {
    const double b0 = model.beta0();
    const double v = model.v();
    double r1 = 0.0, r2 = 0.0;
    for (const auto& ph : plan.phases) {
        const double src_cal = ph.source_power * model.src_scale();
        r1 += ph.duration *
              std::log1p(b0 * src_cal / (1.0 + b0 * ph.relay_power));
        r2 += ph.duration * std::log1p(v * ph.relay_power);
    }
    return {r1, r2};
}

void check_invariants(const AllocationPlan& plan, const ChannelModel& model,
                      const PowerBudget& budget) {
    auto fail = [&](const std::string& what) {
        throw internal_error("plan invariant violated: " + what);
    };
    if (plan.phases.empty() || plan.phases.size() > 2)
        fail("expected one or two phases");
    double tsum = 0.0, p_avg = 0.0, P_avg = 0.0;
    for (const auto& ph : plan.phases) {
        if (!(ph.duration > 0.0 && ph.duration <= 1.0 + 1e-12))
            fail("phase duration outside (0, 1]");
        if (ph.relay_power > budget.p_max + 1e-12) fail("relay power above peak");
        if (ph.source_power < 0.0 || ph.relay_power < 0.0)
            fail("negative phase power");
        if (classify_mode(ph.source_power, ph.relay_power) != ph.mode)
            fail("mode inconsistent with phase powers");
        tsum += ph.duration;
        p_avg += ph.duration * ph.relay_power;
        P_avg += ph.duration * ph.source_power;
    }
    if (std::abs(tsum - 1.0) > 1e-12) fail("durations do not sum to 1");
    if (std::abs(p_avg - budget.p_bar) > 1e-9 * std::max(1.0, budget.p_bar))
        fail("relay frame average off budget");
    if (std::abs(P_avg - budget.P_bar) > 1e-9 * std::max(1.0, budget.P_bar))
        fail("source frame average off budget");
    const auto [r1, r2] = phase_rates(plan, model);
    if (std::abs(plan.rate - std::min(r1, r2)) > 1e-9)
        fail("rate does not match min of recomputed hop rates");
}

} // namespace fdrelay::allocator
