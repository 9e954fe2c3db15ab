#include "fdrelay/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fdrelay {

namespace {
void require_positive(double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
}
} // namespace

ChannelModel make_channel(double h1_gain, double h2_gain, double noise_power,
                          double si_factor) {
    require_positive(h1_gain, "h1_gain");
    require_positive(h2_gain, "h2_gain");
    require_positive(noise_power, "noise_power");
    require_positive(si_factor, "si_factor");
    return ChannelModel{h1_gain, h2_gain, noise_power, si_factor};
}

ChannelModel channel_from_pathloss(double distance_m, double carrier_hz,
                                   double pathloss_exp, double noise_power,
                                   double si_factor_db) {
    require_positive(distance_m, "distance_m");
    require_positive(carrier_hz, "carrier_hz");
    require_positive(noise_power, "noise_power");
    if (!(pathloss_exp >= 1.0))
        throw std::invalid_argument("pathloss_exp must be >= 1");
    const double amp = speed_of_light / (4.0 * std::numbers::pi * carrier_hz);
    const double gain = amp * amp * std::pow(distance_m, -pathloss_exp);
    return make_channel(gain, gain, noise_power, db_to_watts(si_factor_db));
}

PowerBudget make_budget(double p_bar, double p_max, double P_bar,
                        std::optional<double> P_max) {
    if (!(p_bar >= 0.0) || !(p_max > 0.0) || p_bar > p_max)
        throw std::invalid_argument("relay budget must satisfy 0 <= p_bar <= p_max");
    if (!(P_bar >= 0.0))
        throw std::invalid_argument("P_bar must be >= 0");
    if (P_max && !(*P_max >= P_bar))
        throw std::invalid_argument("P_max must be >= P_bar");
    return PowerBudget{p_bar, p_max, P_bar, P_max};
}

NormalizedBudget normalize_budget(const ChannelModel& model,
                                  const PowerBudget& budget) {
    NormalizedBudget out;
    out.pbar_cal = budget.P_bar * model.src_scale();
    if (budget.P_max) out.pcmax_cal = *budget.P_max * model.src_scale();
    return out;
}

double db_to_watts(double dbw) { return std::pow(10.0, dbw / 10.0); }

double watts_to_db(double watts) {
    if (!(watts > 0.0))
        throw std::domain_error("watts_to_db: argument must be > 0");
    return 10.0 * std::log10(watts);
}

} // namespace fdrelay
