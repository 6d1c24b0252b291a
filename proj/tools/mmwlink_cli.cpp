// mmwlink: 60 GHz single-carrier DBPSK link simulator CLI.
//
// Subcommands: run (single link report), sweep (BER curves), roc (sync
// threshold trade-off table), cir (multipath realizations), eye (soft
// decision traces). All tabular output is CSV with a header row.

#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmwlink/mmwlink.hpp"

using namespace mmwlink;

namespace {

struct CommonOpts {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<int> frames;
    std::optional<double> ebn0_db;
    std::optional<double> distance_m;
    std::optional<std::string> sv_preset;
    std::optional<int> oversampling;
};

void add_common(CLI::App* cmd, CommonOpts& opts)
{
    cmd->add_option("--config", opts.config_path, "Config file (key = value lines)");
    cmd->add_option("--seed", opts.seed, "Master RNG seed");
    cmd->add_option("--frames", opts.frames, "Frames per run");
    cmd->add_option("--ebn0", opts.ebn0_db, "Pin Eb/N0 in dB (overrides distance)");
    cmd->add_option("--distance", opts.distance_m, "Tx-Rx distance in m (uses link budget)");
    cmd->add_option("--sv", opts.sv_preset, "Multipath preset: office, desktop or none")
        ->check(CLI::IsMember({"office", "desktop", "none"}));
    cmd->add_option("--oversampling", opts.oversampling, "Samples per symbol");
}

link::LinkConfig build_config(const CommonOpts& opts)
{
    link::LinkConfig cfg;
    if (!opts.config_path.empty())
        cfg = config::load_config(opts.config_path);
    if (opts.seed)
        cfg.seed = *opts.seed;
    if (opts.frames)
        cfg.frames = *opts.frames;
    if (opts.ebn0_db) {
        cfg.ebn0_db_override = *opts.ebn0_db;
        cfg.distance_m.reset();
    }
    if (opts.distance_m) {
        cfg.distance_m = *opts.distance_m;
        cfg.ebn0_db_override.reset();
    }
    if (opts.sv_preset) {
        if (*opts.sv_preset == "office")
            cfg.sv = channel::office_sv_params();
        else if (*opts.sv_preset == "desktop")
            cfg.sv = channel::desktop_sv_params();
        else
            cfg.sv.reset();
    }
    if (opts.oversampling)
        cfg.modem.oversampling = *opts.oversampling;
    return cfg;
}

std::vector<double> parse_grid(const std::string& spec)
{
    // "a:b:step" inclusive, or a single value.
    std::vector<double> grid;
    const auto c1 = spec.find(':');
    if (c1 == std::string::npos) {
        grid.push_back(std::stod(spec));
        return grid;
    }
    const auto c2 = spec.find(':', c1 + 1);
    if (c2 == std::string::npos)
        throw link::ConfigError("grid must be 'a:b:step' or a single value");
    const double a = std::stod(spec.substr(0, c1));
    const double b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    const double step = std::stod(spec.substr(c2 + 1));
    if (step <= 0.0 || b < a)
        throw link::ConfigError("grid requires a <= b and step > 0");
    for (double v = a; v <= b + step * 1e-9; v += step)
        grid.push_back(v);
    return grid;
}

// Returns an owning stream for --out, or stdout when the path is empty.
std::pair<std::ostream*, std::unique_ptr<std::ofstream>> open_out(const std::string& path)
{
    if (path.empty())
        return {&std::cout, nullptr};
    auto file = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file)
        throw std::runtime_error("cannot open output file '" + path + "'");
    std::ostream* os = file.get();
    return {os, std::move(file)};
}

nlohmann::json report_json(const link::BerReport& r)
{
    nlohmann::json j;
    j["frames_sent"] = r.frames_sent;
    j["frames_lost_sync"] = r.frames_lost_sync;
    j["frames_fec_fail"] = r.frames_fec_fail;
    j["frames_in_error"] = r.frames_in_error;
    j["corrected_bytes_total"] = r.corrected_bytes_total;
    j["line_bits_sent"] = r.line_bits_sent;
    j["line_bit_errors"] = r.line_bit_errors;
    j["payload_bits_sent"] = r.payload_bits_sent;
    j["payload_bit_errors"] = r.payload_bit_errors;
    j["ebn0_db"] = r.ebn0_db;
    j["ber_pre_fec"] = r.ber_pre_fec();
    j["ber_post_fec"] = r.ber_post_fec();
    j["ber_post_fec_ci"] = {r.ber_post_fec_ci().low, r.ber_post_fec_ci().high};
    j["fer"] = r.fer();
    j["fer_ci"] = {r.fer_ci().low, r.fer_ci().high};
    j["effective_payload_rate_mbps"] = r.effective_payload_rate_mbps();
    return j;
}

int cmd_run(const CommonOpts& opts, const std::string& json_path)
{
    const link::LinkConfig cfg = build_config(opts);
    const link::BerReport report = link::run_link(cfg);
    std::cout << link::format_report(report);
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out)
            throw std::runtime_error("cannot open output file '" + json_path + "'");
        out << report_json(report).dump(2) << '\n';
    }
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const std::string& var, const std::string& grid_spec,
              const std::string& out_path, int threads)
{
    const link::LinkConfig cfg = build_config(opts);
    const auto grid = parse_grid(grid_spec);
    const auto sweep_var =
        var == "distance" ? link::SweepVar::Distance : link::SweepVar::Ebn0;

    // The base config only needs the noise anchor the sweep itself varies.
    link::LinkConfig base = cfg;
    if (sweep_var == link::SweepVar::Distance)
        base.distance_m = base.distance_m.value_or(grid.front());
    else
        base.ebn0_db_override = base.ebn0_db_override.value_or(grid.front());

    const auto points = link::sweep(base, sweep_var, grid, threads);
    for (const auto& p : points)
        if (!p.ok)
            std::cerr << "sweep point " << p.value << " failed: " << p.error << '\n';

    auto [os, file] = open_out(out_path);
    link::sweep_csv(points, *os);
    return 0;
}

int cmd_roc(double ber, const std::string& thresholds_spec, uint64_t trials, uint64_t seed,
            const std::string& out_path)
{
    std::vector<int> thresholds;
    for (double v : parse_grid(thresholds_spec))
        thresholds.push_back(static_cast<int>(v));
    Rng rng(seed);
    const auto rows = sync::sync_roc(ber, thresholds, trials, rng);

    auto [os, file] = open_out(out_path);
    csv::Writer w(*os);
    w.row({"T", "miss_mc", "miss_exact", "fa_mc", "fa_exact"});
    for (const auto& r : rows) {
        w.field(r.threshold)
            .field(r.miss_mc)
            .field(r.miss_exact)
            .field(r.fa_mc)
            .field(r.fa_exact);
        w.end_row();
    }
    return 0;
}

int cmd_cir(const std::string& preset, int count, uint64_t seed, const std::string& out_path)
{
    const channel::SvParams params =
        preset == "desktop" ? channel::desktop_sv_params() : channel::office_sv_params();
    Rng rng(seed);

    auto [os, file] = open_out(out_path);
    csv::Writer w(*os);
    if (count > 1)
        w.row({"realization", "delay_ns", "re", "im"});
    else
        w.row({"delay_ns", "re", "im"});
    for (int k = 0; k < count; ++k) {
        const auto cir = channel::gen_sv_cir(params, rng);
        for (const auto& tap : cir.taps) {
            if (count > 1)
                w.field(k);
            w.field(tap.delay_ns).field(tap.gain.real()).field(tap.gain.imag());
            w.end_row();
        }
    }
    return 0;
}

int cmd_eye(const CommonOpts& opts, int symbols, const std::string& out_path,
            const std::string& trace_path)
{
    const link::LinkConfig cfg = build_config(opts);
    const auto trace = link::emit_eye(cfg, symbols);

    auto [os, file] = open_out(out_path);
    csv::Writer w(*os);
    w.row({"symbol", "soft"});
    for (size_t k = 0; k < trace.soft.size(); ++k) {
        w.field(k).field(trace.soft[k]);
        w.end_row();
    }
    if (!trace_path.empty()) {
        std::ofstream tf(trace_path, std::ios::binary);
        if (!tf)
            throw std::runtime_error("cannot open output file '" + trace_path + "'");
        csv::Writer tw(tf);
        tw.row({"window", "sample", "re", "im"});
        for (size_t win = 0; win < trace.windows.size(); ++win)
            for (size_t s = 0; s < trace.windows[win].size(); ++s) {
                tw.field(win)
                    .field(s)
                    .field(trace.windows[win][s].real())
                    .field(trace.windows[win][s].imag());
                tw.end_row();
            }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"60 GHz 875 Mbps single-carrier DBPSK link simulator"};
    app.require_subcommand(1);

    CommonOpts run_opts;
    std::string run_json;
    auto* run = app.add_subcommand("run", "Simulate one link and print a BER/FER report");
    add_common(run, run_opts);
    run->add_option("--json", run_json, "Also write the report as JSON to this file");

    CommonOpts sweep_opts;
    std::string sweep_var = "distance", sweep_grid, sweep_out;
    int sweep_threads = 1;
    auto* sw = app.add_subcommand("sweep", "BER/FER across a distance or Eb/N0 grid (CSV)");
    add_common(sw, sweep_opts);
    sw->add_option("--var", sweep_var, "Sweep variable")
        ->check(CLI::IsMember({"distance", "ebn0"}))
        ->required();
    sw->add_option("--grid", sweep_grid, "Grid as a:b:step (inclusive) or single value")
        ->required();
    sw->add_option("--out", sweep_out, "Output CSV path (default stdout)");
    sw->add_option("--threads", sweep_threads, "Concurrent sweep points");

    double roc_ber = 0.01;
    std::string roc_thresholds = "16:32:1", roc_out;
    uint64_t roc_trials = 1000000, roc_seed = 1;
    auto* roc = app.add_subcommand("roc", "Sync miss / false-alarm table vs threshold (CSV)");
    roc->add_option("--ber", roc_ber, "Channel bit error probability for the miss column");
    roc->add_option("--thresholds", roc_thresholds, "Threshold grid a:b:step");
    roc->add_option("--trials", roc_trials, "Monte Carlo trials per column");
    roc->add_option("--seed", roc_seed, "RNG seed");
    roc->add_option("--out", roc_out, "Output CSV path (default stdout)");

    std::string cir_preset = "office", cir_out;
    int cir_count = 1;
    uint64_t cir_seed = 1;
    auto* cir = app.add_subcommand("cir", "Dump multipath channel realizations (CSV)");
    cir->add_option("--preset", cir_preset, "office or desktop")
        ->check(CLI::IsMember({"office", "desktop"}));
    cir->add_option("--count", cir_count, "Number of realizations");
    cir->add_option("--seed", cir_seed, "RNG seed");
    cir->add_option("--out", cir_out, "Output CSV path (default stdout)");

    CommonOpts eye_opts;
    int eye_symbols = 2000;
    std::string eye_out, eye_trace;
    auto* eye = app.add_subcommand("eye", "Soft decision trace for eye diagrams (CSV)");
    add_common(eye, eye_opts);
    eye->add_option("--symbols", eye_symbols, "Symbols to transmit (first is the reference)");
    eye->add_option("--out", eye_out, "Output CSV path (default stdout)");
    eye->add_option("--trace", eye_trace, "Also dump oversampled product windows here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (run->parsed())
            return cmd_run(run_opts, run_json);
        if (sw->parsed())
            return cmd_sweep(sweep_opts, sweep_var, sweep_grid, sweep_out, sweep_threads);
        if (roc->parsed())
            return cmd_roc(roc_ber, roc_thresholds, roc_trials, roc_seed, roc_out);
        if (cir->parsed())
            return cmd_cir(cir_preset, cir_count, cir_seed, cir_out);
        if (eye->parsed())
            return cmd_eye(eye_opts, eye_symbols, eye_out, eye_trace);
    } catch (const link::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
