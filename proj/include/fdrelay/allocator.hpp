#pragma once

#include "fdrelay/geometry.hpp"
#include "fdrelay/model.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fdrelay::allocator {

/// Region boundaries of the optimal allocation, on the normalized power
/// scale, plus their dBW mirrors on the source-watt scale
/// (P_i = cal_i * beta / |h1|^2). A mirror is NaN when the normalized value
/// is not positive (reported as not applicable).
struct Thresholds {
    double p0, p1, p2, p3, p4;
    double p0_dbw, p1_dbw, p2_dbw, p3_dbw, p4_dbw;

    std::array<double, 5> cal() const { return {p0, p1, p2, p3, p4}; }
    std::array<double, 5> dbw() const {
        return {p0_dbw, p1_dbw, p2_dbw, p3_dbw, p4_dbw};
    }
};

Thresholds thresholds(const ChannelModel& model, const PowerBudget& budget);

enum class DuplexMode { FD, HD_TX, HD_RX, Idle };

/// One fraction of the frame with constant source/relay transmit power
/// (source power in watts, relay power in watts).
struct Phase {
    double duration;
    double source_power;
    double relay_power;
    DuplexMode mode;
};

enum class RegionLabel {
    T1Low,     // omega >= pmax, cal <= P1
    T1Mid,     // omega >= pmax, P1 < cal < P2
    T1High,    // omega >= pmax, cal >= P2
    T2a,       // omega < pmax, cal <= P3
    T2b,       // omega < pmax, cal >= max(P2, P4)
    T2cdVge,   // omega < pmax, interior band, v >= beta0
    T2cVlt,    // omega < pmax, cal > P4, v < beta0
    T2dVlt,    // omega < pmax, P3 < cal <= P4, v < beta0
    OracleScan // produced by the brute-force two-atom scan, not the solver
};

const char* region_label_name(RegionLabel label);

struct AllocationPlan {
    std::vector<Phase> phases; // one or two
    double rate;               // nats per channel use
    RegionLabel region;
    double omega;              // water-filling level, normalized scale
    std::optional<std::string> warning;
};

/// Solves the max-min rate problem for the given channel and budget and
/// returns the optimal plan. A configured source peak power that the plan
/// exceeds only attaches a warning (peak-limited re-optimization is out of
/// scope).
AllocationPlan solve(const ChannelModel& model, const PowerBudget& budget);

/// Interior relay level for the two-FD-phase band (v >= beta0): solves
/// [(1+p1 b0)(1+p1 v)/k]^((pmax-pbar)/(pmax-p1)) = (1+b0(cal+pbar))/k on a
/// log scale, k = (1+pmax b0)(1+pmax v). Requires P1 <= cal <= P2.
double solve_p1_eq14(const geometry::RateContext& ctx);

/// Phase-A relay level for the FD + HD-RX band (v < beta0): solves
/// [(1+p2 b0)(1+p2 v)]^(pbar/p2) = 1 + b0 (cal + pbar) on a log scale.
double solve_p2_eq16(const geometry::RateContext& ctx);

/// Point of the q1 = 0 curve maximizing r1_min between the curve's two edge
/// intersections (B above, A or D below); the returned rate is
/// r1_min = r2t_max there.
std::pair<geometry::OmegaPoint, double>
solve_omega_star(const geometry::OmegaRegion& reg, const geometry::RateContext& ctx);

/// Water-filling source power in watts for a relay level p:
/// (beta/|h1|^2) * max(omega - p, 0), clamped to source_peak when given.
double source_power_profile(double omega, double relay_power,
                            const ChannelModel& model,
                            std::optional<double> source_peak = std::nullopt);

/// Recomputes the two hop rates from the phases (first of pair: source-relay
/// hop, second: relay-destination hop); min of the two must equal plan.rate.
std::pair<double, double> phase_rates(const AllocationPlan& plan,
                                      const ChannelModel& model);

/// Throws internal_error if the plan violates any invariant: durations sum
/// to 1, frame averages hit the budget, relay peak respected, modes match
/// the powers, rate = min of the recomputed hop rates.
void check_invariants(const AllocationPlan& plan, const ChannelModel& model,
                      const PowerBudget& budget);

} // namespace fdrelay::allocator
