#pragma once

#include "fdrelay/model.hpp"

#include <optional>

namespace fdrelay::geometry {

/// A point of the (omega, F) plane: omega is the water-filling level on the
/// normalized power scale, F the cumulative relay-power mass below omega.
struct OmegaPoint {
    double omega;
    double f;
};

/// Everything the four rate bounds need: the normalized source budget and
/// the relay budget plus the channel ratios.
struct RateContext {
    double pbar_cal;
    double p_bar;
    double p_max;
    double v;
    double beta0;
};

RateContext make_context(const ChannelModel& model, const PowerBudget& budget);

/// Feasible (omega, F) region for the omega < pmax branch, a curved triangle
/// with vertices
///   V1 = (pmax cal / (pmax - pbar), 1 - pbar/pmax)
///   V2 = (cal + pbar, 1)
///   V3 = (cal + pbar, cal / (cal + pbar)).
struct OmegaRegion {
    OmegaPoint v1, v2, v3;
    double pbar_cal, p_bar, p_max;

    double omega_lo() const { return v1.omega; }
    double omega_hi() const { return v2.omega; }
    // Lower edge V1-V3: F = cal / omega.
    double f_lower(double omega) const;
    // Upper edge V1-V2: F = (pmax - pbar - cal) / (pmax - omega), <= 1.
    double f_upper(double omega) const;
    bool contains(const OmegaPoint& pt, double rel_slack = 1e-9) const;
};

/// Throws empty_region_error when pbar_cal > p_max - p_bar (the omega >= pmax
/// branch applies there), std::invalid_argument on a bad relay budget.
OmegaRegion region(double pbar_cal, double p_bar, double p_max);

// The four rate bounds of the split-distribution analysis, in nats. Each
// throws std::domain_error when a log argument is non-positive, which signals
// a point outside the region.
double r1_min(const OmegaPoint& pt, const RateContext& ctx);
double r1_max(const OmegaPoint& pt, const RateContext& ctx);
double r2t_max(const OmegaPoint& pt, const RateContext& ctx);
double r2t_min(const OmegaPoint& pt, const RateContext& ctx);

// Bound-crossing indicators: q1 = r1_min - r2t_max, q2 = r2t_min - r1_max.
double q1(const OmegaPoint& pt, const RateContext& ctx);
double q2(const OmegaPoint& pt, const RateContext& ctx);

// Curve/edge intersections. A not-present result is informative: it drives
// the case classification of the allocator.
//   A: q1 = 0 on edge V1-V3,   B: q1 = 0 on edge V1-V2,
//   C: q2 = 0 on edge V1-V2,   D: q1 = 0 on edge V2-V3 (omega = cal + pbar).
std::optional<OmegaPoint> point_a(const OmegaRegion& reg, const RateContext& ctx);
std::optional<OmegaPoint> point_b(const OmegaRegion& reg, const RateContext& ctx);
std::optional<OmegaPoint> point_c(const OmegaRegion& reg, const RateContext& ctx);
std::optional<OmegaPoint> point_d(const OmegaRegion& reg, const RateContext& ctx);

} // namespace fdrelay::geometry
