#include "fdrelay/geometry.hpp"

#include "fdrelay/errors.hpp"
#include "fdrelay/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace fdrelay::geometry {

namespace {

double checked_log1p(double x, const char* where) {
    if (!(x > -1.0))
        throw std::domain_error(std::string(where) + ": log argument <= 0 (point outside region)");
    return std::log1p(x);
}

// Shared (1-F) log(1 + v (cal + pbar - F omega) / (1-F)) term. Extended by
// continuity to 0 at F = 1.
double tail_term(const OmegaPoint& pt, const RateContext& ctx) {
    const double rem = 1.0 - pt.f;
    if (rem <= 0.0) return 0.0;
    double mass = ctx.pbar_cal + ctx.p_bar - pt.f * pt.omega;
    if (mass < 0.0 && mass > -1e-12 * (ctx.pbar_cal + ctx.p_bar)) mass = 0.0;
    return rem * checked_log1p(ctx.v * mass / rem, "second-hop tail");
}

} // namespace

RateContext make_context(const ChannelModel& model, const PowerBudget& budget) {
    return RateContext{normalize_budget(model, budget).pbar_cal, budget.p_bar,
                       budget.p_max, model.v(), model.beta0()};
}

double OmegaRegion::f_lower(double omega) const {
    if (pbar_cal == 0.0) return 0.0;
    return pbar_cal / omega;
}

double OmegaRegion::f_upper(double omega) const {
    const double den = p_max - omega;
    if (den <= 0.0) return 1.0;
    return std::min(1.0, (p_max - p_bar - pbar_cal) / den);
}

bool OmegaRegion::contains(const OmegaPoint& pt, double rel_slack) const {
    const double w_slack = rel_slack * std::max(1.0, omega_hi());
    if (pt.omega < omega_lo() - w_slack || pt.omega > omega_hi() + w_slack)
        return false;
    const double f_slack = rel_slack;
    return pt.f >= f_lower(pt.omega) - f_slack &&
           pt.f <= f_upper(pt.omega) + f_slack;
}

OmegaRegion region(double pbar_cal, double p_bar, double p_max) {
    if (!(p_bar > 0.0) || !(p_bar < p_max))
        throw std::invalid_argument("region: need 0 < p_bar < p_max");
    if (!(pbar_cal >= 0.0))
        throw std::invalid_argument("region: pbar_cal must be >= 0");
    if (pbar_cal > (p_max - p_bar) * (1.0 + 1e-12))
        throw empty_region_error("region: pbar_cal > p_max - p_bar, use the omega >= pmax branch");
    OmegaRegion reg;
    reg.pbar_cal = pbar_cal;
    reg.p_bar = p_bar;
    reg.p_max = p_max;
    reg.v1 = {p_max * pbar_cal / (p_max - p_bar), 1.0 - p_bar / p_max};
    reg.v2 = {pbar_cal + p_bar, 1.0};
    reg.v3 = {pbar_cal + p_bar, pbar_cal / (pbar_cal + p_bar)};
    return reg;
}

double r1_min(const OmegaPoint& pt, const RateContext& ctx) {
    if (ctx.pbar_cal == 0.0) return 0.0;
    const double scaled = pt.f * (1.0 + pt.omega * ctx.beta0);
    const double den = scaled - ctx.pbar_cal * ctx.beta0;
    if (!(den > 0.0))
        throw std::domain_error("r1_min: log argument <= 0 (point outside region)");
    return pt.f * std::log1p(ctx.pbar_cal * ctx.beta0 / den);
}

double r1_max(const OmegaPoint& pt, const RateContext& ctx) {
    if (ctx.pbar_cal == 0.0) return 0.0;
    return ctx.pbar_cal / pt.omega * checked_log1p(ctx.beta0 * pt.omega, "r1_max");
}

double r2t_max(const OmegaPoint& pt, const RateContext& ctx) {
    double head = 0.0;
    if (pt.f > 0.0) {
        double g_mean = pt.omega - ctx.pbar_cal / pt.f;
        if (g_mean < 0.0 && g_mean > -1e-12 * std::max(1.0, pt.omega)) g_mean = 0.0;
        head = pt.f * checked_log1p(ctx.v * g_mean, "r2t_max");
    } else if (ctx.pbar_cal > 0.0) {
        throw std::domain_error("r2t_max: F = 0 with positive source budget");
    }
    return head + tail_term(pt, ctx);
}

double r2t_min(const OmegaPoint& pt, const RateContext& ctx) {
    const double coeff = pt.f - (pt.omega > 0.0 ? ctx.pbar_cal / pt.omega : 0.0);
    return coeff * checked_log1p(ctx.v * pt.omega, "r2t_min") + tail_term(pt, ctx);
}

double q1(const OmegaPoint& pt, const RateContext& ctx) {
    return r1_min(pt, ctx) - r2t_max(pt, ctx);
}

double q2(const OmegaPoint& pt, const RateContext& ctx) {
    return r2t_min(pt, ctx) - r1_max(pt, ctx);
}

namespace {

// Scans g over [lo, hi] (256 cells), refines the first sign change by Brent.
// Returns the abscissa of the root, or nothing if g keeps one sign.
std::optional<double> edge_root(const std::function<double(double)>& g,
                                double lo, double hi) {
    constexpr int cells = 256;
    double prev_x = lo;
    double prev_g = g(lo);
    if (prev_g == 0.0) return lo;
    for (int i = 1; i <= cells; ++i) {
        const double x = lo + (hi - lo) * i / cells;
        const double gx = g(x);
        if (gx == 0.0) return x;
        if (prev_g * gx < 0.0)
            return numerics::find_root(g, prev_x, x, 1e-13).root;
        prev_x = x;
        prev_g = gx;
    }
    return std::nullopt;
}

} // namespace

std::optional<OmegaPoint> point_a(const OmegaRegion& reg, const RateContext& ctx) {
    if (reg.pbar_cal == 0.0) return std::nullopt; // lower edge degenerates to F = 0
    auto g = [&](double w) { return q1({w, reg.f_lower(w)}, ctx); };
    if (auto w = edge_root(g, reg.omega_lo(), reg.omega_hi()))
        return OmegaPoint{*w, reg.f_lower(*w)};
    return std::nullopt;
}

std::optional<OmegaPoint> point_b(const OmegaRegion& reg, const RateContext& ctx) {
    auto g = [&](double w) { return q1({w, reg.f_upper(w)}, ctx); };
    if (auto w = edge_root(g, reg.omega_lo(), reg.omega_hi()))
        return OmegaPoint{*w, reg.f_upper(*w)};
    return std::nullopt;
}

std::optional<OmegaPoint> point_c(const OmegaRegion& reg, const RateContext& ctx) {
    auto g = [&](double w) { return q2({w, reg.f_upper(w)}, ctx); };
    if (auto w = edge_root(g, reg.omega_lo(), reg.omega_hi()))
        return OmegaPoint{*w, reg.f_upper(*w)};
    return std::nullopt;
}

std::optional<OmegaPoint> point_d(const OmegaRegion& reg, const RateContext& ctx) {
    const double w = reg.omega_hi();
    auto g = [&](double f) { return q1({w, f}, ctx); };
    if (auto f = edge_root(g, reg.v3.f, 1.0)) return OmegaPoint{w, *f};
    return std::nullopt;
}

} // namespace fdrelay::geometry
