#include "fdrelay/config.hpp"
#include "fdrelay/sweep.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>

namespace {

using fdrelay::cli::ScenarioConfig;

ScenarioConfig load_config(const std::string& config_path,
                           const std::map<std::string, std::string>& overrides) {
    ScenarioConfig cfg;
    if (!config_path.empty())
        cfg = fdrelay::cli::parse_config_file(config_path);
    for (const auto& [key, value] : overrides)
        fdrelay::cli::apply_override(cfg, key, value);
    fdrelay::cli::validate(cfg);
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rate-optimal power allocation planner for dual-hop"
                 " full-duplex relays"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_path;
    std::string units;
    int workers = 0;
    app.add_option("--config", config_path, "scenario config file");
    app.add_option("--output", output_path, "output path (sweep CSV)");
    app.add_option("--units", units, "rate units: bits or nats")
        ->check(CLI::IsMember({"bits", "nats"}));
    app.add_option("--workers", workers, "sweep worker threads (0 = auto)");

    // Every config key doubles as a command-line override flag.
    std::map<std::string, std::string> overrides;
    for (const auto& key : fdrelay::cli::known_keys()) {
        app.add_option_function<std::string>(
               "--" + key,
               [&overrides, key](const std::string& v) { overrides[key] = v; },
               "override config key '" + key + "'")
            ->expected(1);
    }

    auto* sub_thresholds =
        app.add_subcommand("thresholds", "print the region thresholds P0..P4");
    auto* sub_solve =
        app.add_subcommand("solve", "optimal plan for one source power");
    std::optional<double> solve_pbar;
    sub_solve->add_option("--P", solve_pbar, "source average power in dBW");
    bool solve_csv = false;
    sub_solve->add_flag("--csv", solve_csv, "also print the plan as a CSV row");
    auto* sub_sweep =
        app.add_subcommand("sweep", "rate-vs-power sweep over all schemes");
    auto* sub_verify = app.add_subcommand(
        "verify", "check the solver against the brute-force oracles");
    int verify_points = 20;
    sub_verify->add_option("--points", verify_points, "sweep positions to test");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        auto cfg = load_config(config_path, overrides);
        if (!units.empty())
            cfg.rate_units = units == "nats" ? fdrelay::cli::RateUnits::Nats
                                             : fdrelay::cli::RateUnits::Bits;
        if (sub_thresholds->parsed())
            return fdrelay::cli::cmd_thresholds(cfg, std::cout);
        if (sub_solve->parsed())
            return fdrelay::cli::cmd_solve(cfg, solve_pbar, solve_csv, std::cout);
        if (sub_sweep->parsed())
            return fdrelay::cli::cmd_sweep(cfg, output_path, workers, std::cout);
        if (sub_verify->parsed())
            return fdrelay::cli::cmd_verify(cfg, verify_points, std::cout);
    } catch (const fdrelay::cli::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
