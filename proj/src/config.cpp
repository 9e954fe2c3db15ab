#include "fdrelay/config.hpp"

#include <fstream>
#include <sstream>

namespace fdrelay::cli {

namespace {

std::string trim(const std::string& s) {
    const size_t b = s.find_first_not_of(" \t\r");
    const size_t e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        size_t pos = 0;
        const double x = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw config_error("key '" + key + "': cannot parse number from '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    const double x = parse_number(key, value);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw config_error("key '" + key + "': expected an integer, got '" + value + "'");
    return i;
}

SchemeId parse_scheme(const std::string& key, const std::string& name) {
    if (name == "OP") return SchemeId::Op;
    if (name == "FD_IDEAL") return SchemeId::FdIdeal;
    if (name == "FD_IP") return SchemeId::FdIp;
    if (name == "HD") return SchemeId::Hd;
    if (name == "FD_HD") return SchemeId::FdHd;
    throw config_error("key '" + key + "': unknown scheme '" + name + "'");
}

void set_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    auto pathloss = [&]() -> PathlossBlock& {
        if (!cfg.pathloss) cfg.pathloss.emplace();
        return *cfg.pathloss;
    };
    auto direct = [&]() -> DirectBlock& {
        if (!cfg.direct) cfg.direct.emplace();
        return *cfg.direct;
    };
    auto sweep = [&]() -> SweepBlock& {
        if (!cfg.sweep) cfg.sweep.emplace();
        return *cfg.sweep;
    };

    if (key == "distance_m") pathloss().distance_m = parse_number(key, value);
    else if (key == "carrier_hz") pathloss().carrier_hz = parse_number(key, value);
    else if (key == "alpha") pathloss().alpha = parse_number(key, value);
    else if (key == "h1_db") direct().h1_db = parse_number(key, value);
    else if (key == "h2_db") direct().h2_db = parse_number(key, value);
    else if (key == "noise_dbw") cfg.noise_dbw = parse_number(key, value);
    else if (key == "beta_db") cfg.beta_db = parse_number(key, value);
    else if (key == "pbar_dbw") cfg.budget.pbar_dbw = parse_number(key, value);
    else if (key == "pmax_dbw") cfg.budget.pmax_dbw = parse_number(key, value);
    else if (key == "Pbar_dbw") cfg.budget.Pbar_dbw = parse_number(key, value);
    else if (key == "Pmax_dbw") cfg.budget.Pmax_dbw = parse_number(key, value);
    else if (key == "start_dbw") sweep().start_dbw = parse_number(key, value);
    else if (key == "stop_dbw") sweep().stop_dbw = parse_number(key, value);
    else if (key == "points") sweep().points = parse_int(key, value);
    else if (key == "mode") {
        if (value == "source_only") sweep().mode = SweepMode::SourceOnly;
        else if (value == "joint") sweep().mode = SweepMode::Joint;
        else throw config_error("key 'mode': expected source_only or joint, got '" + value + "'");
    } else if (key == "pmax_offset_db") sweep().pmax_offset_db = parse_number(key, value);
    else if (key == "schemes") {
        cfg.schemes.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            cfg.schemes.push_back(parse_scheme(key, trim(item)));
        if (cfg.schemes.empty()) throw config_error("key 'schemes': empty list");
    } else if (key == "path") cfg.output_path = value;
    else if (key == "rate_units") {
        if (value == "bits") cfg.rate_units = RateUnits::Bits;
        else if (value == "nats") cfg.rate_units = RateUnits::Nats;
        else throw config_error("key 'rate_units': expected bits or nats, got '" + value + "'");
    } else {
        throw config_error("unknown key '" + key + "'");
    }
}

} // namespace

const char* scheme_id_name(SchemeId s) {
    switch (s) {
        case SchemeId::Op: return "OP";
        case SchemeId::FdIdeal: return "FD_IDEAL";
        case SchemeId::FdIp: return "FD_IP";
        case SchemeId::Hd: return "HD";
        case SchemeId::FdHd: return "FD_HD";
    }
    return "?";
}

std::vector<SchemeId> ScenarioConfig::effective_schemes() const {
    if (!schemes.empty()) return schemes;
    return {SchemeId::Op, SchemeId::FdIdeal, SchemeId::FdIp, SchemeId::Hd,
            SchemeId::FdHd};
}

ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("line " + std::to_string(lineno) +
                                   ": unterminated section header");
            const std::string section = trim(line.substr(1, line.size() - 2));
            if (section == "direct" && !cfg.direct) cfg.direct.emplace();
            else if (section == "pathloss" && !cfg.pathloss) cfg.pathloss.emplace();
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) +
                               ": expected key = value");
        try {
            set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const config_error& e) {
            throw config_error("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file '" + path + "'");
    return parse_config(in);
}

void apply_override(ScenarioConfig& cfg, const std::string& key,
                    const std::string& value) {
    set_key(cfg, key, value);
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = {
        "distance_m", "carrier_hz", "alpha", "h1_db", "h2_db", "noise_dbw",
        "beta_db", "pbar_dbw", "pmax_dbw", "Pbar_dbw", "Pmax_dbw", "start_dbw",
        "stop_dbw", "points", "mode", "pmax_offset_db", "schemes", "path",
        "rate_units"};
    return keys;
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.pathloss && cfg.direct)
        throw config_error("config sets both pathloss and direct channel blocks");
    if (!cfg.pathloss && !cfg.direct)
        throw config_error("config needs a pathloss or direct channel block");
    if (cfg.pathloss) {
        const auto& p = *cfg.pathloss;
        if (!p.distance_m || !p.carrier_hz || !p.alpha)
            throw config_error("pathloss block needs distance_m, carrier_hz and alpha");
    }
    if (cfg.direct) {
        const auto& d = *cfg.direct;
        if (!d.h1_db || !d.h2_db)
            throw config_error("direct block needs h1_db and h2_db");
    }
    if (!cfg.noise_dbw || !cfg.beta_db)
        throw config_error("config needs noise_dbw and beta_db");
    if (!cfg.budget.pbar_dbw || !cfg.budget.pmax_dbw)
        throw config_error("config needs pbar_dbw and pmax_dbw");
    if (*cfg.budget.pbar_dbw > *cfg.budget.pmax_dbw)
        throw config_error("pbar_dbw must not exceed pmax_dbw");
    if (cfg.sweep) {
        const auto& s = *cfg.sweep;
        if (!s.start_dbw || !s.stop_dbw)
            throw config_error("sweep block needs start_dbw and stop_dbw");
        if (s.points < 2) throw config_error("sweep points must be >= 2");
        if (!(*s.start_dbw < *s.stop_dbw))
            throw config_error("sweep start_dbw must be below stop_dbw");
    }
}

ChannelModel to_channel(const ScenarioConfig& cfg) {
    if (cfg.pathloss) {
        const auto& p = *cfg.pathloss;
        return channel_from_pathloss(*p.distance_m, *p.carrier_hz, *p.alpha,
                                     db_to_watts(*cfg.noise_dbw), *cfg.beta_db);
    }
    const auto& d = *cfg.direct;
    return make_channel(db_to_watts(*d.h1_db), db_to_watts(*d.h2_db),
                        db_to_watts(*cfg.noise_dbw), db_to_watts(*cfg.beta_db));
}

PowerBudget to_budget(const ScenarioConfig& cfg, double Pbar_dbw) {
    std::optional<double> P_max;
    if (cfg.budget.Pmax_dbw) P_max = db_to_watts(*cfg.budget.Pmax_dbw);
    return make_budget(db_to_watts(*cfg.budget.pbar_dbw),
                       db_to_watts(*cfg.budget.pmax_dbw),
                       db_to_watts(Pbar_dbw), P_max);
}

} // namespace fdrelay::cli
