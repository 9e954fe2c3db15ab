#pragma once

#include <optional>

namespace fdrelay {

inline constexpr double speed_of_light = 2.998e8; // m/s

/// Physical channel parameters of the two-hop link, all in linear units.
///
/// h1_gain and h2_gain are the power gains |h1|^2 and |h2|^2 of the
/// source->relay and relay->destination links, noise_power is N0 in watts,
/// and si_factor is the residual self-interference attenuation beta.
struct ChannelModel {
    double h1_gain;
    double h2_gain;
    double noise_power;
    double si_factor;

    // Second-hop gain-to-noise ratio v = |h2|^2 / N0.
    double v() const { return h2_gain / noise_power; }
    // Self-interference-to-noise ratio beta0 = beta / N0.
    double beta0() const { return si_factor / noise_power; }
    // |h1|^2 / beta, maps source watts onto the normalized power scale.
    double src_scale() const { return h1_gain / si_factor; }
};

/// Validates parameters (all must be strictly positive).
ChannelModel make_channel(double h1_gain, double h2_gain, double noise_power,
                          double si_factor);

/// Builds a symmetric channel from the path-loss law
/// |h|^2 = (c / (4 pi fc))^2 * d^-alpha with both hops at distance d.
ChannelModel channel_from_pathloss(double distance_m, double carrier_hz,
                                   double pathloss_exp, double noise_power,
                                   double si_factor_db);

/// Frame-average and peak power targets, all in watts.
struct PowerBudget {
    double p_bar;                 // relay average
    double p_max;                 // relay peak
    double P_bar;                 // source average
    std::optional<double> P_max;  // source peak (absent = unbounded)
};

PowerBudget make_budget(double p_bar, double p_max, double P_bar,
                        std::optional<double> P_max = std::nullopt);

/// Source budget mapped onto the relay-power scale: cal = P * |h1|^2 / beta.
struct NormalizedBudget {
    double pbar_cal;
    std::optional<double> pcmax_cal;
};

NormalizedBudget normalize_budget(const ChannelModel& model,
                                  const PowerBudget& budget);

double db_to_watts(double dbw);
double watts_to_db(double watts); // throws std::domain_error for watts <= 0

} // namespace fdrelay
