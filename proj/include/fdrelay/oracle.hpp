#pragma once

#include "fdrelay/allocator.hpp"
#include "fdrelay/model.hpp"

#include <vector>

namespace fdrelay::oracle {

struct OracleConfig {
    int grid_points = 400;  // relay-power grid on [0, pmax]
    int omega_points = 200; // log-spaced water levels
    bool refine_omega = true;
};

/// Uniform relay-power grid on [0, pmax] with p_bar and pmax snapped onto
/// grid points exactly.
std::vector<double> relay_grid(const PowerBudget& budget, int points);

struct LpOracleResult {
    double rate;                 // nats
    std::vector<double> weights; // relay-power distribution over `grid`
    std::vector<double> grid;
    double omega;
};

/// Structure-free validator: for each water level omega, solves the epigraph
/// LP  max rho  s.t. R1(f) >= rho, R2(f) >= rho, source and relay averages
/// met, f a distribution on the grid; returns the best level found. Source
/// power follows the water-filling profile, which is optimal for any f.
LpOracleResult lp_oracle(const ChannelModel& model, const PowerBudget& budget,
                         const OracleConfig& cfg = {});

struct TwoAtomScanResult {
    double rate;
    allocator::AllocationPlan plan;
};

/// Exhaustive scan over grid atom pairs with the weight fixed by the relay
/// mean; the water level follows from the source average in closed form.
TwoAtomScanResult two_atom_scan(const ChannelModel& model,
                                const PowerBudget& budget,
                                const OracleConfig& cfg = {});

} // namespace fdrelay::oracle
