#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "mmwlink/channel.hpp"
#include "mmwlink/link.hpp"

namespace mmwlink::config {

// Flat key-value config: one `key = value` per line, `#` comments, blank
// lines ignored. Unknown keys are errors. Omitted keys keep the defaults
// of LinkConfig. `sv.preset` applies before any individual sv.* key,
// regardless of file order.
inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

namespace detail {

inline double to_double(const std::string& key, const std::string& v)
{
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw link::ConfigError("config: bad number for " + key + ": '" + v + "'");
    }
}

inline int to_int(const std::string& key, const std::string& v)
{
    const double x = to_double(key, v);
    const int i = static_cast<int>(x);
    if (static_cast<double>(i) != x)
        throw link::ConfigError("config: expected integer for " + key + ": '" + v + "'");
    return i;
}

inline uint64_t to_u64(const std::string& key, const std::string& v)
{
    try {
        size_t pos = 0;
        const uint64_t x = std::stoull(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw link::ConfigError("config: bad unsigned integer for " + key + ": '" + v + "'");
    }
}

inline bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "yes" || v == "1")
        return true;
    if (v == "false" || v == "no" || v == "0")
        return false;
    throw link::ConfigError("config: bad boolean for " + key + ": '" + v + "'");
}

inline channel::SvParams& ensure_sv(link::LinkConfig& cfg)
{
    if (!cfg.sv)
        cfg.sv = channel::office_sv_params();
    return *cfg.sv;
}

inline void apply_key(link::LinkConfig& cfg, const std::string& key, const std::string& value)
{
    if (key == "modem.oversampling") {
        cfg.modem.oversampling = to_int(key, value);
    } else if (key == "modem.pulse") {
        if (value == "rect")
            cfg.modem.pulse = modem::Pulse::Rectangular;
        else if (value == "rrc")
            cfg.modem.pulse = modem::Pulse::RootRaisedCosine;
        else
            throw link::ConfigError("config: modem.pulse must be rect or rrc");
    } else if (key == "modem.rrc_rolloff") {
        cfg.modem.rrc_rolloff = to_double(key, value);
    } else if (key == "modem.lpf_cutoff_hz") {
        cfg.modem.lpf_cutoff_hz = to_double(key, value);
    } else if (key == "modem.lpf_taps") {
        cfg.modem.lpf_taps = to_int(key, value);
    } else if (key == "pathloss.d0_m") {
        cfg.pathloss.d0_m = to_double(key, value);
    } else if (key == "pathloss.exponent") {
        cfg.pathloss.exponent = to_double(key, value);
    } else if (key == "pathloss.sigma_db") {
        cfg.pathloss.sigma_db = to_double(key, value);
    } else if (key == "pathloss.freq_hz") {
        cfg.pathloss.freq_hz = to_double(key, value);
    } else if (key == "sv.enabled") {
        if (to_bool(key, value))
            ensure_sv(cfg);
        else
            cfg.sv.reset();
    } else if (key == "sv.cluster_decay_ns") {
        ensure_sv(cfg).cluster_decay_ns = to_double(key, value);
    } else if (key == "sv.ray_decay_ns") {
        ensure_sv(cfg).ray_decay_ns = to_double(key, value);
    } else if (key == "sv.cluster_gain_std_db") {
        ensure_sv(cfg).cluster_gain_std_db = to_double(key, value);
    } else if (key == "sv.ray_gain_std_db") {
        ensure_sv(cfg).ray_gain_std_db = to_double(key, value);
    } else if (key == "sv.avg_clusters") {
        ensure_sv(cfg).avg_clusters = to_int(key, value);
    } else if (key == "sv.cluster_rate_per_ns") {
        ensure_sv(cfg).cluster_rate_per_ns = to_double(key, value);
    } else if (key == "sv.ray_rate_per_ns") {
        ensure_sv(cfg).ray_rate_per_ns = to_double(key, value);
    } else if (key == "sv.rays_per_cluster_cap") {
        ensure_sv(cfg).rays_per_cluster_cap = to_int(key, value);
    } else if (key == "budget.tx_power_dbm") {
        cfg.budget.tx_power_dbm = to_double(key, value);
    } else if (key == "budget.tx_gain_dbi") {
        cfg.budget.tx_gain_dbi = to_double(key, value);
    } else if (key == "budget.rx_gain_dbi") {
        cfg.budget.rx_gain_dbi = to_double(key, value);
    } else if (key == "budget.noise_figure_db") {
        cfg.budget.noise_figure_db = to_double(key, value);
    } else if (key == "budget.bandwidth_hz") {
        cfg.budget.bandwidth_hz = to_double(key, value);
    } else if (key == "budget.bit_rate_bps") {
        cfg.budget.bit_rate_bps = to_double(key, value);
        cfg.modem.symbol_rate = cfg.budget.bit_rate_bps;
    } else if (key == "budget.temperature_k") {
        cfg.budget.temperature_k = to_double(key, value);
    } else if (key == "sync.threshold") {
        cfg.sync.threshold = to_int(key, value);
    } else if (key == "distance_m") {
        cfg.distance_m = to_double(key, value);
    } else if (key == "ebn0_db") {
        cfg.ebn0_db_override = to_double(key, value);
    } else if (key == "frames") {
        cfg.frames = to_int(key, value);
    } else if (key == "seed") {
        cfg.seed = to_u64(key, value);
    } else {
        throw link::ConfigError("config: unknown key '" + key + "'");
    }
}

} // namespace detail

inline link::LinkConfig parse_config(std::istream& in)
{
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw link::ConfigError("config: line " + std::to_string(line_no) +
                                    " is not 'key = value'");
        entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }

    link::LinkConfig cfg;
    for (const auto& [key, value] : entries) {
        if (key == "sv.preset") {
            if (value == "office")
                cfg.sv = channel::office_sv_params();
            else if (value == "desktop")
                cfg.sv = channel::desktop_sv_params();
            else if (value == "none")
                cfg.sv.reset();
            else
                throw link::ConfigError("config: sv.preset must be office, desktop or none");
        }
    }
    for (const auto& [key, value] : entries)
        if (key != "sv.preset")
            detail::apply_key(cfg, key, value);
    return cfg;
}

inline link::LinkConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw link::ConfigError("config: cannot open '" + path + "'");
    return parse_config(in);
}

} // namespace mmwlink::config
