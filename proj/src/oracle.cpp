#include "fdrelay/oracle.hpp"

#include "fdrelay/errors.hpp"
#include "fdrelay/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace fdrelay::oracle {

namespace {

struct LpAtOmega {
    double rate;
    std::vector<double> weights;
};

// Epigraph LP at a fixed water level. Variables: f (one per grid point),
// rho, and two surplus variables for the hop-rate inequalities.
std::optional<LpAtOmega> solve_at_omega(double omega,
                                        const std::vector<double>& grid,
                                        double pbar_cal, double p_bar,
                                        double v, double beta0) {
    const int n = static_cast<int>(grid.size());
    numerics::LpProblem lp;
    lp.objective.assign(n + 3, 0.0);
    lp.objective[n] = 1.0; // rho
    lp.eq_matrix.assign(5, std::vector<double>(n + 3, 0.0));
    lp.eq_rhs = {0.0, 0.0, pbar_cal, p_bar, 1.0};
    for (int i = 0; i < n; ++i) {
        const double p = grid[i];
        const double resid = std::max(omega - p, 0.0);
        lp.eq_matrix[0][i] = std::log1p(beta0 * resid / (1.0 + beta0 * p));
        lp.eq_matrix[1][i] = std::log1p(v * p);
        lp.eq_matrix[2][i] = resid;
        lp.eq_matrix[3][i] = p;
        lp.eq_matrix[4][i] = 1.0;
    }
    lp.eq_matrix[0][n] = -1.0;
    lp.eq_matrix[0][n + 1] = -1.0; // R1 - rho - s1 = 0
    lp.eq_matrix[1][n] = -1.0;
    lp.eq_matrix[1][n + 2] = -1.0; // R2 - rho - s2 = 0
    try {
        auto sol = numerics::solve_lp(lp);
        sol.x.resize(n);
        return LpAtOmega{sol.value, std::move(sol.x)};
    } catch (const infeasible_error&) {
        return std::nullopt;
    }
}

} // namespace

std::vector<double> relay_grid(const PowerBudget& budget, int points) {
    points = std::max(points, 2);
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = budget.p_max * i / (points - 1);
    // Snap the nearest interior point onto p_bar so the mean constraint can
    // be met without smearing mass.
    const double step = budget.p_max / (points - 1);
    const int idx = std::clamp(static_cast<int>(std::lround(budget.p_bar / step)),
                               0, points - 1);
    grid[idx] = budget.p_bar;
    std::sort(grid.begin(), grid.end());
    return grid;
}

LpOracleResult lp_oracle(const ChannelModel& model, const PowerBudget& budget,
                         const OracleConfig& cfg) {
    const double cal = normalize_budget(model, budget).pbar_cal;
    const double v = model.v();
    const double beta0 = model.beta0();
    const auto grid = relay_grid(budget, cfg.grid_points);

    // Any feasible water level lies in [cal, cal + pbar]; log-spaced scan.
    const double hi = cal + budget.p_bar;
    const double lo = std::min(std::max(cal, 1e-6), hi);
    const int m = std::max(cfg.omega_points, 2);
    std::vector<double> omegas(m);
    for (int i = 0; i < m; ++i)
        omegas[i] = lo * std::pow(hi / lo, double(i) / (m - 1));
    omegas.back() = hi;

    LpOracleResult best;
    best.rate = -1.0;
    best.omega = 0.0;
    best.grid = grid;
    int best_idx = -1;
    for (int i = 0; i < m; ++i) {
        const auto res = solve_at_omega(omegas[i], grid, cal, budget.p_bar, v, beta0);
        if (!res) continue;
        if (res->rate > best.rate ||
            (res->rate == best.rate && omegas[i] > best.omega)) {
            best.rate = res->rate;
            best.weights = res->weights;
            best.omega = omegas[i];
            best_idx = i;
        }
    }
    if (best_idx < 0)
        throw infeasible_error("lp_oracle: no feasible water level (inconsistent budget)");

    if (cfg.refine_omega) {
        // Golden refinement inside the bracket around the best grid level;
        // every LP value is a valid lower bound, so this only improves.
        const double wlo = omegas[std::max(best_idx - 1, 0)];
        const double whi = omegas[std::min(best_idx + 1, m - 1)];
        if (whi > wlo) {
            auto f = [&](double w) {
                const auto res = solve_at_omega(w, grid, cal, budget.p_bar, v, beta0);
                return res ? res->rate : -1.0;
            };
            const auto r = numerics::maximize_scalar(f, wlo, whi, 1e-8, 17);
            if (r.value > best.rate) {
                const auto res =
                    solve_at_omega(r.arg, grid, cal, budget.p_bar, v, beta0);
                if (res) {
                    best.rate = res->rate;
                    best.weights = res->weights;
                    best.omega = r.arg;
                }
            }
        }
    }
    return best;
}

TwoAtomScanResult two_atom_scan(const ChannelModel& model,
                                const PowerBudget& budget,
                                const OracleConfig& cfg) {
    const double cal = normalize_budget(model, budget).pbar_cal;
    const double v = model.v();
    const double beta0 = model.beta0();
    const double pb = budget.p_bar;
    const auto grid = relay_grid(budget, cfg.grid_points);
    const int n = static_cast<int>(grid.size());

    double best_rate = -1.0;
    double best_pi = 0.0, best_pj = 0.0, best_w = 1.0, best_omega = 0.0;

    auto rate_of = [&](double pi, double pj, double w, double omega) {
        const double ri = std::max(omega - pi, 0.0);
        const double rj = std::max(omega - pj, 0.0);
        const double r1 = w * std::log1p(beta0 * ri / (1.0 + beta0 * pi)) +
                          (1.0 - w) * std::log1p(beta0 * rj / (1.0 + beta0 * pj));
        const double r2 = w * std::log1p(v * pi) + (1.0 - w) * std::log1p(v * pj);
        return std::min(r1, r2);
    };

    for (int i = 0; i < n; ++i) {
        if (grid[i] > pb) break;
        for (int j = n - 1; j >= i; --j) {
            if (grid[j] < pb) break;
            const double pi = grid[i], pj = grid[j];
            double w;
            if (pj == pi) {
                if (pj != pb) continue;
                w = 1.0;
            } else {
                w = (pj - pb) / (pj - pi);
            }
            // Water level from the source average: the profile is piecewise
            // linear in omega, rising with slope w on (pi, pj] and slope 1
            // beyond pj.
            double omega;
            if (cal <= 0.0)
                omega = 0.0;
            else if (w > 0.0 && pi + cal / w <= pj)
                omega = pi + cal / w;
            else
                omega = cal + pb;
            const double r = rate_of(pi, pj, w, omega);
            if (r > best_rate) {
                best_rate = r;
                best_pi = pi;
                best_pj = pj;
                best_w = w;
                best_omega = omega;
            }
        }
    }

    TwoAtomScanResult out;
    out.rate = best_rate;
    out.plan.rate = best_rate;
    out.plan.region = allocator::RegionLabel::OracleScan;
    out.plan.omega = best_omega;
    auto add = [&](double weight, double p) {
        if (weight <= 1e-15) return;
        const double src = std::max(best_omega - p, 0.0) / model.src_scale();
        const bool s = src > 0.0, r = p > 0.0;
        out.plan.phases.push_back(
            {weight, src, p,
             s && r ? allocator::DuplexMode::FD
                    : r ? allocator::DuplexMode::HD_TX
                        : s ? allocator::DuplexMode::HD_RX
                            : allocator::DuplexMode::Idle});
    };
    add(best_w, best_pi);
    if (best_pj != best_pi) add(1.0 - best_w, best_pj);
    return out;
}

} // namespace fdrelay::oracle
