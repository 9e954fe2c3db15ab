#pragma once

#include "fdrelay/model.hpp"

// Shared scenario builders: the symmetric 500 m, 2.4 GHz pathloss channel
// with N0 = -151 dBW, at two self-interference levels.
//   scenario A: beta = -135 dB (v > beta0)
//   scenario B: beta = -110 dB (v < beta0)
// Relay budget defaults to p_bar = -10 dBW, p_max = -7 dBW; dropping p_bar
// to -20 dBW ("scenario C") opens the interior band of the omega < pmax
// branch for v > beta0.
namespace testsup {

inline fdrelay::ChannelModel channel_a() {
    return fdrelay::channel_from_pathloss(500.0, 2.4e9, 3.0,
                                          fdrelay::db_to_watts(-151.0), -135.0);
}

inline fdrelay::ChannelModel channel_b() {
    return fdrelay::channel_from_pathloss(500.0, 2.4e9, 3.0,
                                          fdrelay::db_to_watts(-151.0), -110.0);
}

inline fdrelay::PowerBudget budget_dbw(double Pbar_dbw, double pbar_dbw = -10.0,
                                       double pmax_dbw = -7.0) {
    return fdrelay::make_budget(fdrelay::db_to_watts(pbar_dbw),
                                fdrelay::db_to_watts(pmax_dbw),
                                fdrelay::db_to_watts(Pbar_dbw));
}

} // namespace testsup
