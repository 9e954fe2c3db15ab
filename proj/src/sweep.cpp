#include "fdrelay/sweep.hpp"

#include "fdrelay/allocator.hpp"
#include "fdrelay/baselines.hpp"
#include "fdrelay/errors.hpp"
#include "fdrelay/oracle.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace fdrelay::cli {

namespace {

constexpr double nats_per_bit = 0.6931471805599453; // ln 2

double in_units(double nats, RateUnits units) {
    return units == RateUnits::Bits ? nats / nats_per_bit : nats;
}

const char* mode_name(allocator::DuplexMode m) {
    switch (m) {
        case allocator::DuplexMode::FD: return "FD";
        case allocator::DuplexMode::HD_TX: return "HD-TX";
        case allocator::DuplexMode::HD_RX: return "HD-RX";
        case allocator::DuplexMode::Idle: return "idle";
    }
    return "?";
}

SweepRow::PhaseCols phase_cols(const allocator::Phase& ph) {
    return {ph.duration, ph.source_power, ph.relay_power, mode_name(ph.mode)};
}

std::string fdhd_detail(const baselines::FdHdDetail& d) {
    std::ostringstream os;
    os << "tA=" << format_double(d.t_a) << ";tB=" << format_double(d.t_b)
       << ";tC=" << format_double(d.t_c) << ";PA=" << format_double(d.P_a)
       << ";PC=" << format_double(d.P_c) << ";pB=" << format_double(d.p_b)
       << ";pC=" << format_double(d.p_c);
    return os.str();
}

} // namespace

std::string format_double(double x) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string csv_schema_comment() { return "# schema=1"; }

std::string csv_header() {
    return "P_bar_dbw,p_bar_dbw,scheme,rate,region_label,"
           "t_A,P_A_w,p_A_w,mode_A,t_B,P_B_w,p_B_w,mode_B,detail,error";
}

std::string csv_row(const SweepRow& row) {
    std::ostringstream os;
    os << format_double(row.P_bar_dbw) << ',' << format_double(row.p_bar_dbw)
       << ',' << row.scheme << ',';
    if (row.rate) os << format_double(*row.rate);
    os << ',' << row.region_label << ',';
    auto put_phase = [&](const std::optional<SweepRow::PhaseCols>& ph) {
        if (ph)
            os << format_double(ph->t) << ',' << format_double(ph->P_w) << ','
               << format_double(ph->p_w) << ',' << ph->mode;
        else
            os << ",,,";
    };
    put_phase(row.phase_a);
    os << ',';
    put_phase(row.phase_b);
    os << ',' << row.detail << ',' << row.error;
    return os.str();
}

std::vector<SweepPoint> sweep_points(const ScenarioConfig& cfg) {
    if (!cfg.sweep) throw config_error("no sweep block configured");
    const auto& s = *cfg.sweep;
    std::vector<SweepPoint> pts;
    pts.reserve(s.points);
    for (int i = 0; i < s.points; ++i) {
        const double x =
            *s.start_dbw + (*s.stop_dbw - *s.start_dbw) * i / (s.points - 1);
        SweepPoint pt;
        pt.Pbar_dbw = x;
        if (s.mode == SweepMode::Joint) {
            pt.pbar_dbw = x;
            pt.pmax_dbw =
                s.pmax_offset_db ? x + *s.pmax_offset_db : *cfg.budget.pmax_dbw;
        } else {
            pt.pbar_dbw = *cfg.budget.pbar_dbw;
            pt.pmax_dbw = *cfg.budget.pmax_dbw;
        }
        pts.push_back(pt);
    }
    return pts;
}

SweepRow evaluate_row(const ScenarioConfig& cfg, const SweepPoint& point,
                      SchemeId scheme) {
    SweepRow row;
    row.P_bar_dbw = point.Pbar_dbw;
    row.p_bar_dbw = point.pbar_dbw;
    row.scheme = scheme_id_name(scheme);
    try {
        const auto model = to_channel(cfg);
        std::optional<double> P_max;
        if (cfg.budget.Pmax_dbw) P_max = db_to_watts(*cfg.budget.Pmax_dbw);
        const auto budget =
            make_budget(db_to_watts(point.pbar_dbw), db_to_watts(point.pmax_dbw),
                        db_to_watts(point.Pbar_dbw), P_max);
        switch (scheme) {
            case SchemeId::Op: {
                const auto plan = allocator::solve(model, budget);
                allocator::check_invariants(plan, model, budget);
                row.rate = in_units(plan.rate, cfg.rate_units);
                row.region_label = allocator::region_label_name(plan.region);
                row.phase_a = phase_cols(plan.phases[0]);
                if (plan.phases.size() > 1) row.phase_b = phase_cols(plan.phases[1]);
                if (plan.warning) row.detail = "warning: " + *plan.warning;
                break;
            }
            case SchemeId::FdIdeal:
                row.rate = in_units(baselines::fd_ideal(model, budget).rate,
                                    cfg.rate_units);
                break;
            case SchemeId::FdIp:
                row.rate =
                    in_units(baselines::fd_ip(model, budget).rate, cfg.rate_units);
                break;
            case SchemeId::Hd: {
                const auto res = baselines::hd(model, budget);
                row.rate = in_units(res.rate, cfg.rate_units);
                row.detail =
                    "t=" + format_double(std::get<baselines::HdDetail>(res.detail).t);
                break;
            }
            case SchemeId::FdHd: {
                const auto res = baselines::fd_hd(model, budget);
                row.rate = in_units(res.rate, cfg.rate_units);
                row.detail = fdhd_detail(std::get<baselines::FdHdDetail>(res.detail));
                break;
            }
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, int workers) {
    const auto points = sweep_points(cfg);
    const auto schemes = cfg.effective_schemes();
    std::vector<SweepRow> rows(points.size() * schemes.size());

    if (workers < 1)
        workers = static_cast<int>(std::thread::hardware_concurrency());
    workers = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));

    std::atomic<size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= points.size()) return;
            for (size_t s = 0; s < schemes.size(); ++s)
                rows[i * schemes.size() + s] =
                    evaluate_row(cfg, points[i], schemes[s]);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return rows;
}

int cmd_thresholds(const ScenarioConfig& cfg, std::ostream& out) {
    const auto model = to_channel(cfg);
    const auto budget = make_budget(db_to_watts(*cfg.budget.pbar_dbw),
                                    db_to_watts(*cfg.budget.pmax_dbw), 0.0);
    const auto th = allocator::thresholds(model, budget);
    out << "channel: v = " << format_double(watts_to_db(model.v()))
        << " dB, beta0 = " << format_double(watts_to_db(model.beta0()))
        << " dB\n";
    out << "relay budget: p_bar = " << format_double(budget.p_bar)
        << " W, p_max = " << format_double(budget.p_max) << " W\n";
    if (budget.p_bar == budget.p_max)
        out << "note: p_bar = p_max, the omega < p_max branch is empty\n";
    out << "thresholds (source scale | normalized):\n";
    const char* names[5] = {"P0", "P1", "P2", "P3", "P4"};
    const auto dbw = th.dbw();
    const auto cal = th.cal();
    for (int i = 0; i < 5; ++i) {
        out << "  " << names[i] << ": ";
        if (std::isnan(dbw[i]))
            out << "n/a (negative / not applicable)";
        else
            out << format_double(dbw[i]) << " dBW";
        out << " | " << format_double(cal[i]) << " W\n";
    }
    return 0;
}

int cmd_solve(const ScenarioConfig& cfg, std::optional<double> Pbar_dbw,
              bool emit_csv, std::ostream& out) {
    if (!Pbar_dbw) Pbar_dbw = cfg.budget.Pbar_dbw;
    if (!Pbar_dbw)
        throw config_error("solve needs Pbar_dbw (flag or config key)");
    const auto model = to_channel(cfg);
    const auto budget = to_budget(cfg, *Pbar_dbw);
    const auto plan = allocator::solve(model, budget);
    allocator::check_invariants(plan, model, budget);

    const char* unit = cfg.rate_units == RateUnits::Bits ? "bits" : "nats";
    out << "P_bar: " << format_double(*Pbar_dbw) << " dBW ("
        << format_double(budget.P_bar) << " W)\n";
    out << "region: " << allocator::region_label_name(plan.region) << "\n";
    out << "water level (normalized): " << format_double(plan.omega) << " W\n";
    out << "rate: " << format_double(in_units(plan.rate, cfg.rate_units)) << " "
        << unit << "/channel use (" << format_double(plan.rate) << " nats)\n";
    const char* tags[2] = {"phase A", "phase B"};
    for (size_t i = 0; i < plan.phases.size(); ++i) {
        const auto& ph = plan.phases[i];
        out << tags[i] << ": duration " << format_double(ph.duration)
            << ", source " << format_double(ph.source_power) << " W, relay "
            << format_double(ph.relay_power) << " W, mode " << mode_name(ph.mode)
            << "\n";
    }
    if (plan.warning) out << "warning: " << *plan.warning << "\n";

    if (emit_csv) {
        SweepRow row;
        row.P_bar_dbw = *Pbar_dbw;
        row.p_bar_dbw = *cfg.budget.pbar_dbw;
        row.scheme = "OP";
        row.rate = in_units(plan.rate, cfg.rate_units);
        row.region_label = allocator::region_label_name(plan.region);
        row.phase_a = phase_cols(plan.phases[0]);
        if (plan.phases.size() > 1) row.phase_b = phase_cols(plan.phases[1]);
        out << csv_schema_comment() << "\n" << csv_header() << "\n"
            << csv_row(row) << "\n";
    }
    return 0;
}

int cmd_sweep(const ScenarioConfig& cfg, const std::string& output_path,
              int workers, std::ostream& log) {
    if (!cfg.sweep) throw config_error("sweep needs a sweep block");
    std::string path = output_path.empty() ? cfg.output_path : output_path;
    if (path.empty()) throw config_error("sweep needs an output path");

    const auto rows = run_sweep(cfg, workers);
    std::ofstream out(path, std::ios::binary); // fixed '\n', no locale
    if (!out) throw config_error("cannot open output file '" + path + "'");
    out << csv_schema_comment() << "\n" << csv_header() << "\n";
    size_t failures = 0;
    for (const auto& row : rows) {
        out << csv_row(row) << "\n";
        if (!row.error.empty()) ++failures;
    }
    log << "wrote " << rows.size() << " rows to " << path;
    if (failures) log << " (" << failures << " rows carry errors)";
    log << "\n";
    return failures ? 1 : 0;
}

int cmd_verify(const ScenarioConfig& cfg, int points, std::ostream& out) {
    if (points < 1) throw config_error("verify needs points >= 1");
    double start = -40.0, stop = 10.0;
    if (cfg.sweep && cfg.sweep->start_dbw && cfg.sweep->stop_dbw) {
        start = *cfg.sweep->start_dbw;
        stop = *cfg.sweep->stop_dbw;
    }
    const auto model = to_channel(cfg);
    constexpr double lp_tol = 5e-4;   // nats, grid-resolution bound
    constexpr double scan_tol = 1e-3; // nats, two-atom scan on the same grid

    double max_lp = 0.0, max_scan = 0.0;
    bool ok = true;
    out << "verify: allocator vs 400-point LP oracle and two-atom scan\n";
    for (int i = 0; i < points; ++i) {
        const double Pdbw =
            points == 1 ? start : start + (stop - start) * i / (points - 1);
        const auto budget = to_budget(cfg, Pdbw);
        out << "  P_bar " << format_double(Pdbw) << " dBW: ";
        try {
            const auto plan = allocator::solve(model, budget);
            allocator::check_invariants(plan, model, budget);
            const auto lp = oracle::lp_oracle(model, budget);
            const auto scan = oracle::two_atom_scan(model, budget);
            const double d_lp = std::abs(plan.rate - lp.rate);
            const double d_scan = std::abs(plan.rate - scan.rate);
            max_lp = std::max(max_lp, d_lp);
            max_scan = std::max(max_scan, d_scan);
            out << "rate " << format_double(plan.rate) << " nats, |d(lp)| "
                << format_double(d_lp) << ", |d(scan)| " << format_double(d_scan)
                << "\n";
            if (d_lp > lp_tol || d_scan > scan_tol) ok = false;
        } catch (const std::exception& e) {
            out << "error: " << e.what() << "\n";
            ok = false;
        }
    }
    out << "max |allocator - lp_oracle| = " << format_double(max_lp)
        << " nats (tolerance " << format_double(lp_tol) << ")\n";
    out << "max |allocator - two_atom_scan| = " << format_double(max_scan)
        << " nats (tolerance " << format_double(scan_tol) << ")\n";
    out << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

} // namespace fdrelay::cli
