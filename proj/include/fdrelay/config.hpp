#pragma once

#include "fdrelay/model.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdrelay::cli {

/// Configuration error with enough context to point at the offending line
/// or key; maps to exit code 2.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepMode { SourceOnly, Joint };
enum class RateUnits { Bits, Nats };

// "OP" plus the four baseline schemes, in configured order.
enum class SchemeId { Op, FdIdeal, FdIp, Hd, FdHd };
const char* scheme_id_name(SchemeId s);

struct PathlossBlock {
    std::optional<double> distance_m;
    std::optional<double> carrier_hz;
    std::optional<double> alpha;
};

struct DirectBlock {
    std::optional<double> h1_db;
    std::optional<double> h2_db;
};

struct BudgetBlock {
    std::optional<double> pbar_dbw;
    std::optional<double> pmax_dbw;
    std::optional<double> Pbar_dbw;
    std::optional<double> Pmax_dbw;
};

struct SweepBlock {
    std::optional<double> start_dbw;
    std::optional<double> stop_dbw;
    int points = 2;
    SweepMode mode = SweepMode::SourceOnly;
    std::optional<double> pmax_offset_db; // joint mode: pmax = pbar + offset
};

struct ScenarioConfig {
    std::optional<PathlossBlock> pathloss;
    std::optional<DirectBlock> direct;
    std::optional<double> noise_dbw; // shared by both channel variants
    std::optional<double> beta_db;
    BudgetBlock budget;
    std::optional<SweepBlock> sweep;
    std::vector<SchemeId> schemes; // empty = all five, OP first
    std::string output_path;
    RateUnits rate_units = RateUnits::Bits;

    std::vector<SchemeId> effective_schemes() const;
};

/// Parses the key = value scenario format (see README for the grammar).
/// Section headers are organizational; key names are globally unique.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig parse_config_file(const std::string& path);

/// Applies a "key" / "value" override on top of a parsed config (the CLI
/// routes --<key> <value> flags through here).
void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value);

/// Names of all recognized scalar keys (used to register CLI override flags).
const std::vector<std::string>& known_keys();

/// Completeness and consistency checks; throws config_error.
void validate(const ScenarioConfig& cfg);

ChannelModel to_channel(const ScenarioConfig& cfg);
/// Budget for a given source power; p_bar/p_max straight from the config.
PowerBudget to_budget(const ScenarioConfig& cfg, double Pbar_dbw);

} // namespace fdrelay::cli
