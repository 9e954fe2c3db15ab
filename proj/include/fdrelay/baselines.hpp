#pragma once

#include "fdrelay/model.hpp"

#include <variant>

namespace fdrelay::baselines {

enum class Scheme { FdIdeal, FdIp, Hd, FdHd };

const char* scheme_name(Scheme s);

struct HdDetail {
    double t; // relay transmit fraction at the optimum
};

// Three-phase hybrid split: A source-only, B relay-only, C full duplex.
struct FdHdDetail {
    double t_a, t_b, t_c;
    double P_a, P_c; // source watts
    double p_b, p_c; // relay watts
};

struct BaselineResult {
    Scheme scheme;
    double rate; // nats per channel use
    std::variant<std::monostate, HdDetail, FdHdDetail> detail;
};

/// Source-aware expectation E_x[log(1 + P |h1|^2 / (N0 + beta x^2))] with x
/// zero-mean Gaussian of variance `relay_variance` (truncated at 8 sigma).
double gaussian_interference_rate(const ChannelModel& model, double source_watts,
                                  double relay_variance, double rel_tol = 1e-10);

/// min of the two hop rates with self-interference removed.
BaselineResult fd_ideal(const ChannelModel& model, const PowerBudget& budget);

/// Full-duplex with the source tracking the instantaneous relay power.
BaselineResult fd_ip(const ChannelModel& model, const PowerBudget& budget);

/// Conventional half duplex: relay transmits p_bar/t for a fraction
/// t >= p_bar/p_max of the frame, the source fills the rest.
BaselineResult hd(const ChannelModel& model, const PowerBudget& budget);

/// Hybrid of fd_ip and hd over three phases; solved by a seeded log-spaced
/// grid search refined with coordinate descent. Both corner schemes are
/// explicit candidates, so fd_hd never falls below max(fd_ip, hd).
BaselineResult fd_hd(const ChannelModel& model, const PowerBudget& budget);

} // namespace fdrelay::baselines
