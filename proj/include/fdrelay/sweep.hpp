#pragma once

#include "fdrelay/config.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fdrelay::cli {

/// One CSV data row: a (sweep point, scheme) pair. Phase columns are only
/// populated for OP plans; HD and FD-HD serialize their tuples into the
/// detail column.
struct SweepRow {
    double P_bar_dbw = 0.0;
    double p_bar_dbw = 0.0;
    std::string scheme;
    std::optional<double> rate; // configured units
    std::string region_label;

    struct PhaseCols {
        double t;
        double P_w;
        double p_w;
        std::string mode;
    };
    std::optional<PhaseCols> phase_a, phase_b;
    std::string detail;
    std::string error;
};

/// Shortest round-trip decimal rendering, locale independent.
std::string format_double(double x);

std::string csv_schema_comment(); // "# schema=1"
std::string csv_header();
std::string csv_row(const SweepRow& row);

struct SweepPoint {
    double Pbar_dbw;
    double pbar_dbw;
    double pmax_dbw;
};

/// Expands the config's sweep block into concrete points (source_only keeps
/// the relay budget fixed; joint moves pbar with the sweep and derives pmax
/// from the offset when configured).
std::vector<SweepPoint> sweep_points(const ScenarioConfig& cfg);

SweepRow evaluate_row(const ScenarioConfig& cfg, const SweepPoint& point,
                      SchemeId scheme);

/// Point-major, scheme order as configured; points evaluated concurrently,
/// output order deterministic.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, int workers);

// Subcommand bodies. Each returns the process exit code: 0 ok, 1 runtime or
// verification failure, 2 usage/config error (thrown as config_error).
int cmd_thresholds(const ScenarioConfig& cfg, std::ostream& out);
int cmd_solve(const ScenarioConfig& cfg, std::optional<double> Pbar_dbw,
              bool emit_csv, std::ostream& out);
int cmd_sweep(const ScenarioConfig& cfg, const std::string& output_path,
              int workers, std::ostream& log);
int cmd_verify(const ScenarioConfig& cfg, int points, std::ostream& out);

} // namespace fdrelay::cli
