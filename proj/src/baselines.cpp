#include "fdrelay/baselines.hpp"

#include "fdrelay/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <vector>

namespace fdrelay::baselines {

namespace {

constexpr double reject = -1e100; // infeasible marker for the maximizers

// {0} followed by `count` log-spaced values ending at ub.
std::vector<double> log_grid(double ub, int count, double lo_frac = 1e-4) {
    std::vector<double> g{0.0};
    if (!(ub > 0.0)) return g;
    const double lo = ub * lo_frac;
    for (int i = 0; i < count; ++i)
        g.push_back(lo * std::pow(ub / lo, double(i) / (count - 1)));
    return g;
}

} // namespace

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::FdIdeal: return "FD_IDEAL";
        case Scheme::FdIp: return "FD_IP";
        case Scheme::Hd: return "HD";
        case Scheme::FdHd: return "FD_HD";
    }
    return "?";
}

double gaussian_interference_rate(const ChannelModel& model, double source_watts,
                                  double relay_variance, double rel_tol) {
    if (source_watts <= 0.0) return 0.0;
    const double n0 = model.noise_power;
    const double h1 = model.h1_gain;
    if (relay_variance <= 0.0) return std::log1p(source_watts * h1 / n0);
    const double sigma = std::sqrt(relay_variance);
    const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * relay_variance);
    auto f = [&](double x) {
        return std::log1p(source_watts * h1 / (n0 + model.si_factor * x * x)) *
               norm * std::exp(-x * x / (2.0 * relay_variance));
    };
    // Even integrand; the mass beyond 8 sigma is below 1e-15 of the total.
    return 2.0 * numerics::integrate(f, 0.0, 8.0 * sigma, rel_tol);
}

BaselineResult fd_ideal(const ChannelModel& model, const PowerBudget& budget) {
    const double r1 = std::log1p(budget.P_bar * model.h1_gain / model.noise_power);
    const double r2 = std::log1p(budget.p_bar * model.h2_gain / model.noise_power);
    return {Scheme::FdIdeal, std::min(r1, r2), {}};
}

BaselineResult fd_ip(const ChannelModel& model, const PowerBudget& budget) {
    const double r1 = gaussian_interference_rate(model, budget.P_bar, budget.p_bar);
    const double r2 = std::log1p(budget.p_bar * model.h2_gain / model.noise_power);
    return {Scheme::FdIp, std::min(r1, r2), {}};
}

BaselineResult hd(const ChannelModel& model, const PowerBudget& budget) {
    const double n0 = model.noise_power;
    auto rate = [&](double t) {
        const double first =
            t < 1.0 ? (1.0 - t) * std::log1p(model.h1_gain * budget.P_bar /
                                             ((1.0 - t) * n0))
                    : 0.0;
        const double second =
            t > 0.0 ? t * std::log1p(budget.p_bar * model.h2_gain / (t * n0))
                    : 0.0;
        return std::min(first, second);
    };
    const double lo = budget.p_max > 0.0 ? budget.p_bar / budget.p_max : 0.0;
    if (lo >= 1.0) return {Scheme::Hd, rate(1.0), HdDetail{1.0}};
    const auto best = numerics::maximize_scalar(rate, lo, 1.0, 1e-10);
    return {Scheme::Hd, best.value, HdDetail{best.arg}};
}

namespace {

// Search coordinates: (t_a, t_c, s_P, s_p) with the FD-phase powers scaled
// against their feasibility caps, P_c = s_P P_bar / t_c and
// p_c = s_p min(pmax, p_bar / t_c). Under this map every coordinate move
// from a boundary face (t_a = 0 needs s_P = 1, t_b = 0 needs s_p = 1 and a
// relay peak that allows it) stays feasible, so coordinate descent is not
// pinned at the corner schemes.
struct FdHdSearch {
    const ChannelModel& model;
    const PowerBudget& budget;
    double v_w; // |h2|^2 / N0
    std::map<std::pair<double, double>, double> integral_cache;

    // Search-time integrals run at a relaxed tolerance; the returned rate is
    // re-evaluated precisely afterwards.
    double quad_tol = 1e-8;

    double hop1_fd(double P_c, double p_c) {
        const auto key = std::make_pair(P_c, p_c);
        auto it = integral_cache.find(key);
        if (it != integral_cache.end()) return it->second;
        const double val = gaussian_interference_rate(model, P_c, p_c, quad_tol);
        integral_cache.emplace(key, val);
        return val;
    }

    struct Powers {
        double t_b, P_a, P_c, p_b, p_c;
        bool feasible;
    };

    Powers expand(double t_a, double t_c, double s_P, double s_p) const {
        Powers w{1.0 - t_a - t_c, 0.0, 0.0, 0.0, 0.0, true};
        if (t_a < 0.0 || t_c < 0.0 || w.t_b < -1e-12 || s_P < 0.0 ||
            s_P > 1.0 || s_p < 0.0 || s_p > 1.0) {
            w.feasible = false;
            return w;
        }
        w.t_b = std::max(w.t_b, 0.0);
        if (t_c > 0.0) {
            w.P_c = s_P * budget.P_bar / t_c;
            w.p_c = s_p * std::min(budget.p_max, budget.p_bar / t_c);
        }
        const double P_rem = budget.P_bar - t_c * w.P_c;
        const double p_rem = budget.p_bar - t_c * w.p_c;
        if (t_a > 1e-15) {
            w.P_a = std::max(P_rem, 0.0) / t_a;
        } else if (P_rem > 1e-9 * std::max(1.0, budget.P_bar)) {
            w.feasible = false; // no phase left to carry the source budget
        }
        if (w.t_b > 1e-15) {
            w.p_b = std::max(p_rem, 0.0) / w.t_b;
            if (w.p_b > budget.p_max * (1.0 + 1e-12)) w.feasible = false;
        } else if (p_rem > 1e-9 * std::max(1.0, budget.p_bar)) {
            w.feasible = false; // relay average cannot be met
        }
        return w;
    }

    double eval(double t_a, double t_c, double s_P, double s_p) {
        const Powers w = expand(t_a, t_c, s_P, s_p);
        if (!w.feasible) return reject;
        double hop1 = 0.0, hop2 = 0.0;
        if (t_c > 0.0) {
            hop1 += t_c * hop1_fd(w.P_c, w.p_c);
            hop2 += t_c * std::log1p(v_w * w.p_c);
        }
        if (t_a > 1e-15)
            hop1 += t_a * std::log1p(model.h1_gain * w.P_a / model.noise_power);
        if (w.t_b > 1e-15) hop2 += w.t_b * std::log1p(v_w * w.p_b);
        return std::min(hop1, hop2);
    }
};

} // namespace

BaselineResult fd_hd(const ChannelModel& model, const PowerBudget& budget) {
    FdHdSearch search{model, budget,
                      model.h2_gain / model.noise_power, {}};

    using Tuple = std::array<double, 4>;
    struct Candidate {
        double rate = reject;
        Tuple x{0, 0, 0, 0};
        void offer(double r, const Tuple& t) {
            if (r > rate || (r == rate && t < x)) {
                rate = r;
                x = t;
            }
        }
    };

    // Best grid cell overall plus the best cell of each boundary face; the
    // faces carry the corner schemes and coordinate descent cannot cross
    // onto them from the interior.
    Candidate best_all, best_no_a, best_no_b, best_tdd;
    auto consider = [&](double t_a, double t_c, double s_P, double s_p) {
        const double r = search.eval(t_a, t_c, s_P, s_p);
        const Tuple x{t_a, t_c, s_P, s_p};
        best_all.offer(r, x);
        if (t_a == 0.0) best_no_a.offer(r, x);
        if (t_a + t_c >= 1.0) best_no_b.offer(r, x);
        if (t_c == 0.0) best_tdd.offer(r, x);
    };

    // Corner schemes as explicit candidates.
    consider(0.0, 1.0, 1.0, 1.0); // FD-IP
    const auto hd_res = hd(model, budget);
    const double t_hd = std::get<HdDetail>(hd_res.detail).t;
    if (t_hd < 1.0) consider(1.0 - t_hd, 0.0, 0.0, 0.0); // pure TDD

    const auto t_grid = log_grid(1.0, 16, 5e-3);
    const auto s_grid = log_grid(1.0, 16);
    for (const double t_a : t_grid) {
        for (double t_c : t_grid) {
            if (t_a + t_c > 1.0) t_c = 1.0 - t_a; // fold onto the t_b = 0 face
            if (t_c == 0.0) {
                consider(t_a, 0.0, 0.0, 0.0);
            } else {
                for (const double s_P : s_grid)
                    for (const double s_p : s_grid) consider(t_a, t_c, s_P, s_p);
            }
            if (t_a + t_c >= 1.0) break;
        }
    }

    auto descend = [&](Candidate cand) {
        if (!(cand.rate > reject)) return cand;
        auto line_max = [&](int coord, double lo, double hi) {
            if (hi <= lo) return;
            auto f = [&](double val) {
                Tuple x = cand.x;
                x[coord] = val;
                return search.eval(x[0], x[1], x[2], x[3]);
            };
            const auto r = numerics::maximize_scalar(f, lo, hi, 1e-9, 33);
            if (r.value > cand.rate) {
                cand.rate = r.value;
                cand.x[coord] = r.arg;
            }
        };
        for (int pass = 0; pass < 40; ++pass) {
            const double before = cand.rate;
            line_max(0, 0.0, 1.0 - cand.x[1]);
            line_max(1, 0.0, 1.0 - cand.x[0]);
            line_max(2, 0.0, 1.0);
            line_max(3, 0.0, 1.0);
            if (cand.rate - before <= 1e-7 * std::max(1.0, std::abs(cand.rate)))
                break;
        }
        return cand;
    };

    // Re-evaluate the descent winners and the corner schemes at the precise
    // quadrature tolerance; all are feasible, so the max is a valid rate.
    search.quad_tol = 1e-10;
    search.integral_cache.clear();
    Candidate winner;
    for (const auto& c : {descend(best_all), descend(best_no_a),
                          descend(best_no_b), descend(best_tdd)})
        winner.offer(search.eval(c.x[0], c.x[1], c.x[2], c.x[3]), c.x);
    winner.offer(search.eval(0.0, 1.0, 1.0, 1.0), {0.0, 1.0, 1.0, 1.0});
    if (t_hd < 1.0)
        winner.offer(search.eval(1.0 - t_hd, 0.0, 0.0, 0.0),
                     {1.0 - t_hd, 0.0, 0.0, 0.0});

    const auto w = search.expand(winner.x[0], winner.x[1], winner.x[2], winner.x[3]);
    FdHdDetail det{};
    det.t_a = winner.x[0];
    det.t_c = winner.x[1];
    det.t_b = w.t_b;
    det.P_a = w.P_a;
    det.P_c = w.P_c;
    det.p_b = w.p_b;
    det.p_c = w.p_c;
    return {Scheme::FdHd, winner.rate, det};
}

} // namespace fdrelay::baselines
