#include "fdrelay/numerics.hpp"

#include "fdrelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace fdrelay::numerics {

namespace {

double checked_eval(const std::function<double(double)>& f, double x) {
    const double y = f(x);
    if (!std::isfinite(y)) throw numeric_error("non-finite function value");
    return y;
}

} // namespace

RootResult find_root(const std::function<double(double)>& f, double lo,
                     double hi, double tol) {
    if (lo > hi) std::swap(lo, hi);
    double a = lo, b = hi;
    double fa = checked_eval(f, a);
    double fb = checked_eval(f, b);
    if (fa == 0.0) return {a, 0.0, 0};
    if (fb == 0.0) return {b, 0.0, 0};
    if (fa * fb > 0.0) throw bracket_error("find_root: no sign change on bracket");

    // Brent: inverse quadratic / secant steps, falling back to bisection
    // whenever the candidate leaves [a, b] or converges too slowly.
    double c = a, fc = fa;
    double d = b - a, e = d;
    int iter = 0;
    for (; iter < 200; ++iter) {
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 =
            0.5 * tol * std::max(1.0, std::abs(b)) +
            2.0 * std::numeric_limits<double>::epsilon() * std::abs(b);
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) break;
        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            double p, q;
            const double s = fb / fa;
            if (a == c) {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                const double qq = fa / fc;
                const double r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0.0) q = -q;
            p = std::abs(p);
            if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q),
                                   std::abs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
        fb = checked_eval(f, b);
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
    }
    return {b, fb, iter};
}

MaxResult maximize_scalar(const std::function<double(double)>& f, double lo,
                          double hi, double tol, int prescan) {
    if (lo > hi) std::swap(lo, hi);
    prescan = std::max(prescan, 3);
    int best = 0;
    double best_val = -std::numeric_limits<double>::infinity();
    std::vector<double> xs(prescan);
    for (int i = 0; i < prescan; ++i) {
        xs[i] = lo + (hi - lo) * i / (prescan - 1);
        const double y = checked_eval(f, xs[i]);
        if (y > best_val) {
            best_val = y;
            best = i;
        }
    }
    double a = xs[std::max(best - 1, 0)];
    double b = xs[std::min(best + 1, prescan - 1)];

    constexpr double gr = 0.6180339887498949; // (sqrt(5)-1)/2
    double x1 = b - gr * (b - a);
    double x2 = a + gr * (b - a);
    double f1 = checked_eval(f, x1);
    double f2 = checked_eval(f, x2);
    while (b - a > tol * std::max(1.0, (hi - lo))) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = checked_eval(f, x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = checked_eval(f, x1);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = checked_eval(f, xm);
    MaxResult out{xm, fm};
    if (f1 > out.value) out = {x1, f1};
    if (f2 > out.value) out = {x2, f2};
    if (best_val > out.value) out = {xs[best], best_val};
    return out;
}

namespace {

// QUADPACK 15-point Kronrod rule with embedded 7-point Gauss rule.
constexpr double kron_x[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kron_w[8] = {
    0.0229353220105292, 0.0630920926299786, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr double gauss_w[4] = {0.1294849661688697, 0.2797053914892767,
                               0.3818300505051189, 0.4179591836734694};

struct Panel {
    double lo, hi, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel eval_panel(const std::function<double(double)>& f, double lo, double hi) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(mid);
    double kron = kron_w[7] * fc;
    double gauss = gauss_w[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kron_x[i];
        const double fsum = f(mid - dx) + f(mid + dx);
        kron += kron_w[i] * fsum;
        if (i % 2 == 1) gauss += gauss_w[i / 2] * fsum;
    }
    kron *= half;
    gauss *= half;
    if (!std::isfinite(kron)) throw numeric_error("integrate: non-finite integrand");
    return {lo, hi, kron, std::abs(kron - gauss)};
}

} // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double rel_tol) {
    if (lo == hi) return 0.0;
    double sign = 1.0;
    if (lo > hi) {
        std::swap(lo, hi);
        sign = -1.0;
    }
    std::priority_queue<Panel> panels;
    Panel p0 = eval_panel(f, lo, hi);
    double total = p0.value;
    double total_err = p0.err;
    panels.push(p0);
    const double abs_floor = 1e-300;
    constexpr int max_panels = 4000;
    int n = 1;
    while (total_err > rel_tol * std::max(std::abs(total), abs_floor)) {
        if (n >= max_panels || panels.top().err == 0.0)
            throw accuracy_error("integrate: refinement budget exhausted",
                                 sign * total, total_err);
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.lo + worst.hi);
        const Panel left = eval_panel(f, worst.lo, mid);
        const Panel right = eval_panel(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        panels.push(left);
        panels.push(right);
        ++n;
    }
    return sign * total;
}

namespace {

constexpr double lp_eps = 1e-10;

// Tableau simplex over rows x cols with basis bookkeeping. Column `cols-1`
// holds the rhs; the objective row is stored last.
struct Tableau {
    int m, n; // constraints, structural+slack variables
    std::vector<std::vector<double>> t;
    std::vector<int> basis;

    void pivot(int row, int col) {
        const double piv = t[row][col];
        for (double& v : t[row]) v /= piv;
        for (int r = 0; r <= m; ++r) {
            if (r == row) continue;
            const double factor = t[r][col];
            if (factor == 0.0) continue;
            for (int c = 0; c <= n; ++c) t[r][c] -= factor * t[row][c];
            t[r][col] = 0.0;
        }
        basis[row] = col;
    }

    // Maximizes the objective stored in row m (reduced costs negated so that
    // a positive entry means an improving column). Dantzig pricing with a
    // switch to Bland's rule once the objective stalls.
    void run(const char* phase) {
        int stall = 0;
        double last = t[m][n];
        for (int iter = 0;; ++iter) {
            if (iter > 50000) throw numeric_error("solve_lp: iteration limit");
            const bool bland = stall > 40;
            int col = -1;
            double best = lp_eps;
            for (int c = 0; c < n; ++c) {
                if (t[m][c] > best) {
                    col = c;
                    if (bland) break;
                    best = t[m][c];
                }
            }
            if (col < 0) return; // optimal
            int row = -1;
            double best_ratio = 0.0;
            for (int r = 0; r < m; ++r) {
                if (t[r][col] <= lp_eps) continue;
                const double ratio = t[r][n] / t[r][col];
                if (row < 0 || ratio < best_ratio - 1e-15 ||
                    (ratio < best_ratio + 1e-15 && basis[r] < basis[row])) {
                    row = r;
                    best_ratio = ratio;
                }
            }
            if (row < 0)
                throw unbounded_error(std::string("solve_lp: unbounded in ") + phase);
            pivot(row, col);
            if (t[m][n] > last + 1e-13)
                stall = 0;
            else
                ++stall;
            last = t[m][n];
        }
    }
};

} // namespace

LpSolution solve_lp(const LpProblem& problem) {
    const int nvars = static_cast<int>(problem.objective.size());
    const int m = static_cast<int>(problem.eq_matrix.size());
    if (problem.eq_rhs.size() != static_cast<size_t>(m))
        throw std::invalid_argument("solve_lp: rhs size mismatch");
    for (const auto& row : problem.eq_matrix)
        if (row.size() != static_cast<size_t>(nvars))
            throw std::invalid_argument("solve_lp: matrix width mismatch");

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> lb(problem.lower_bounds);
    if (lb.empty()) lb.assign(nvars, 0.0);

    // Shift finite lower bounds to zero and split free variables into a
    // positive/negative pair, so the tableau only sees y >= 0.
    std::vector<int> pos_col(nvars), neg_col(nvars, -1);
    int n = 0;
    for (int j = 0; j < nvars; ++j) {
        pos_col[j] = n++;
        if (lb[j] == -inf) neg_col[j] = n++;
    }

    std::vector<double> rhs = problem.eq_rhs;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < nvars; ++j)
            if (lb[j] != -inf && lb[j] != 0.0)
                rhs[i] -= problem.eq_matrix[i][j] * lb[j];

    Tableau tab;
    tab.m = m;
    tab.n = n + m; // artificials appended
    tab.t.assign(m + 1, std::vector<double>(tab.n + 1, 0.0));
    tab.basis.assign(m, 0);
    for (int i = 0; i < m; ++i) {
        const double s = rhs[i] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < nvars; ++j) {
            const double a = s * problem.eq_matrix[i][j];
            tab.t[i][pos_col[j]] = a;
            if (neg_col[j] >= 0) tab.t[i][neg_col[j]] = -a;
        }
        tab.t[i][n + i] = 1.0;
        tab.t[i][tab.n] = s * rhs[i];
        tab.basis[i] = n + i;
    }

    // Phase 1: maximize -(sum of artificials).
    for (int i = 0; i < m; ++i)
        for (int c = 0; c <= tab.n; ++c)
            if (c < n || c == tab.n) tab.t[m][c] += tab.t[i][c];
    tab.run("phase 1");
    if (tab.t[m][tab.n] > 1e-7)
        throw infeasible_error("solve_lp: infeasible (phase 1 residual)");
    // Pivot any artificial still basic out of the basis (degenerate rows).
    for (int r = 0; r < m; ++r) {
        if (tab.basis[r] < n) continue;
        int col = -1;
        for (int c = 0; c < n; ++c)
            if (std::abs(tab.t[r][c]) > 1e-8) { col = c; break; }
        if (col >= 0) tab.pivot(r, col);
    }

    // Phase 2: replace the objective row, price out the basis.
    tab.n = n; // drop artificial columns; rhs moves up
    for (int r = 0; r <= m; ++r) {
        tab.t[r][n] = tab.t[r][n + m];
        tab.t[r].resize(n + 1);
    }
    std::fill(tab.t[m].begin(), tab.t[m].end(), 0.0);
    for (int j = 0; j < nvars; ++j) {
        tab.t[m][pos_col[j]] = problem.objective[j];
        if (neg_col[j] >= 0) tab.t[m][neg_col[j]] = -problem.objective[j];
    }
    for (int r = 0; r < m; ++r) {
        if (tab.basis[r] >= n) continue; // leftover artificial on a null row
        const double factor = tab.t[m][tab.basis[r]];
        if (factor == 0.0) continue;
        for (int c = 0; c <= n; ++c) tab.t[m][c] -= factor * tab.t[r][c];
    }
    tab.run("phase 2");

    std::vector<double> y(n, 0.0);
    for (int r = 0; r < m; ++r)
        if (tab.basis[r] < n) y[tab.basis[r]] = tab.t[r][n];
    LpSolution sol;
    sol.x.assign(nvars, 0.0);
    sol.value = 0.0;
    for (int j = 0; j < nvars; ++j) {
        double xj = y[pos_col[j]];
        if (neg_col[j] >= 0) xj -= y[neg_col[j]];
        if (lb[j] != -inf) xj += lb[j];
        sol.x[j] = xj;
        sol.value += problem.objective[j] * xj;
    }
    return sol;
}

} // namespace fdrelay::numerics
