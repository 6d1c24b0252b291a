#pragma once

#include <cmath>
#include <future>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmwlink/bits.hpp"
#include "mmwlink/channel.hpp"
#include "mmwlink/csv.hpp"
#include "mmwlink/framing.hpp"
#include "mmwlink/modem.hpp"
#include "mmwlink/rng.hpp"
#include "mmwlink/stats.hpp"
#include "mmwlink/sync.hpp"

namespace mmwlink::link {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinkConfig {
    modem::ModemConfig modem;
    channel::PathLossModel pathloss;
    std::optional<channel::SvParams> sv;    // absent = AWGN-only
    channel::LinkBudget budget;
    sync::SyncConfig sync;
    std::optional<double> distance_m;       // drives Eb/N0 via the budget
    std::optional<double> ebn0_db_override; // or pin Eb/N0 directly
    int frames = 100;
    uint64_t seed = 1;
};

inline void validate(const LinkConfig& cfg)
{
    if (cfg.frames < 1)
        throw ConfigError("frames must be >= 1");
    if (cfg.distance_m.has_value() == cfg.ebn0_db_override.has_value())
        throw ConfigError("exactly one of distance_m / ebn0_db must be set");
    if (cfg.distance_m && *cfg.distance_m < cfg.pathloss.d0_m)
        throw ConfigError("distance_m must be >= pathloss.d0_m");
    if (cfg.modem.oversampling < 1)
        throw ConfigError("modem.oversampling must be >= 1");
    if (cfg.modem.symbol_rate != cfg.budget.bit_rate_bps)
        throw ConfigError("modem.symbol_rate must equal budget.bit_rate_bps");
    try {
        cfg.sync.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

inline double resolve_ebn0_db(const LinkConfig& cfg)
{
    if (cfg.ebn0_db_override)
        return *cfg.ebn0_db_override;
    return channel::link_budget_ebn0_db(cfg.budget, cfg.pathloss, *cfg.distance_m);
}

struct BerReport {
    uint64_t frames_sent = 0;
    uint64_t frames_lost_sync = 0;
    uint64_t frames_fec_fail = 0;
    uint64_t frames_in_error = 0;          // not recovered exactly
    uint64_t corrected_bytes_total = 0;
    uint64_t line_bits_sent = 0;           // 2080 per frame
    uint64_t line_bit_errors = 0;          // sliced line bits vs transmitted
    uint64_t payload_bits_sent = 0;        // 239*8 per frame
    uint64_t payload_bit_errors = 0;       // recovered payload vs transmitted
    double ebn0_db = 0.0;
    double line_rate_bps = 0.0;

    double ber_pre_fec() const
    {
        return line_bits_sent ? static_cast<double>(line_bit_errors) / line_bits_sent : 0.0;
    }
    double ber_post_fec() const
    {
        return payload_bits_sent ? static_cast<double>(payload_bit_errors) / payload_bits_sent
                                 : 0.0;
    }
    double fer() const
    {
        return frames_sent ? static_cast<double>(frames_in_error) / frames_sent : 0.0;
    }
    ConfidenceInterval ber_pre_fec_ci() const
    {
        return binomial_ci(line_bit_errors, line_bits_sent);
    }
    ConfidenceInterval ber_post_fec_ci() const
    {
        return binomial_ci(payload_bit_errors, payload_bits_sent);
    }
    ConfidenceInterval fer_ci() const { return binomial_ci(frames_in_error, frames_sent); }
    double effective_payload_rate_mbps() const
    {
        return line_rate_bps * framing::kPayloadBytes / framing::kFrameBytes / 1e6;
    }
};

namespace detail {

struct FrameOutcome {
    uint64_t line_bit_errors = 0;
    uint64_t payload_bit_errors = 0;
    int corrected = 0;
    bool sync_ok = false;
    bool fec_ok = false;
    bool exact = false;
};

inline uint64_t byte_hamming(const ByteVec& a, const ByteVec& b)
{
    uint64_t n = 0;
    for (size_t i = 0; i < a.size(); ++i)
        n += static_cast<uint64_t>(std::popcount(static_cast<unsigned>(a[i] ^ b[i])));
    return n;
}

// One frame end to end: random payload, frame build, serialization at a
// random bit offset followed by the next frame's preamble, DBPSK over the
// configured channel, then detection, validation, alignment and parsing.
inline FrameOutcome simulate_frame(const LinkConfig& cfg, double n0, uint64_t frame_index)
{
    Rng rng(derive_seed(cfg.seed, frame_index));

    ByteVec payload(framing::kPayloadBytes);
    for (uint8_t& b : payload)
        b = static_cast<uint8_t>(rng.next_u64() >> 56);
    const framing::Frame frame = framing::build_frame(payload);
    const BitVec frame_bits = frame.to_bits();

    const size_t pad = rng.uniform_int(64);
    BitVec line_bits;
    line_bits.reserve(pad + frame_bits.size() + 32 + 16);
    for (size_t i = 0; i < pad; ++i)
        line_bits.push_back(rng.coin_bit());
    line_bits.insert(line_bits.end(), frame_bits.begin(), frame_bits.end());
    const BitVec& preamble_bits = framing::make_preamble().bits;
    line_bits.insert(line_bits.end(), preamble_bits.begin(), preamble_bits.end());
    for (int i = 0; i < 16; ++i)
        line_bits.push_back(rng.coin_bit());

    modem::SampleStream wave = modem::transmit(line_bits, cfg.modem);
    if (cfg.sv) {
        const channel::ChannelRealization cir = channel::gen_sv_cir(*cfg.sv, rng);
        wave = channel::apply_channel(wave, cir);
    }
    wave = channel::add_awgn(wave, n0, rng);

    const BitVec sliced = modem::slice(modem::diff_demod(wave, cfg.modem));

    FrameOutcome out;
    for (size_t i = 0; i < frame_bits.size(); ++i)
        out.line_bit_errors += sliced[pad + i] != frame_bits[i];

    const auto hits = sync::detect_preamble(sliced, cfg.sync);
    const auto decision = sync::validate_period(hits, cfg.sync);
    const size_t body_bits = static_cast<size_t>(framing::kBodyBytes) * 8;
    if (!decision || decision->frame_start + 32 + body_bits > sliced.size()) {
        out.payload_bit_errors = static_cast<uint64_t>(framing::kPayloadBytes) * 8;
        return out;
    }
    out.sync_ok = true;

    const ByteVec aligned = sync::byte_align(*decision, sliced);
    const ByteVec body(aligned.begin(), aligned.begin() + framing::kBodyBytes);
    if (const auto parsed = framing::parse_frame(body)) {
        out.fec_ok = true;
        out.corrected = parsed->corrected;
        out.payload_bit_errors = byte_hamming(parsed->payload, payload);
    } else {
        // FEC failure: count errors in the uncorrected descrambled payload.
        out.payload_bit_errors = byte_hamming(framing::uncorrected_payload(body), payload);
    }
    out.exact = out.payload_bit_errors == 0 && out.sync_ok;
    return out;
}

} // namespace detail

inline BerReport run_link(const LinkConfig& cfg)
{
    validate(cfg);
    const double ebn0_db = resolve_ebn0_db(cfg);
    const double n0 = channel::noise_density_for_ebn0(ebn0_db, cfg.budget.bit_rate_bps);

    BerReport report;
    report.ebn0_db = ebn0_db;
    report.line_rate_bps = cfg.budget.bit_rate_bps;
    for (uint64_t f = 0; f < static_cast<uint64_t>(cfg.frames); ++f) {
        const auto o = detail::simulate_frame(cfg, n0, f);
        report.frames_sent += 1;
        report.frames_lost_sync += !o.sync_ok;
        report.frames_fec_fail += o.sync_ok && !o.fec_ok;
        report.frames_in_error += !o.exact;
        report.corrected_bytes_total += static_cast<uint64_t>(o.corrected);
        report.line_bits_sent += framing::kFrameBits;
        report.line_bit_errors += o.line_bit_errors;
        report.payload_bits_sent += static_cast<uint64_t>(framing::kPayloadBytes) * 8;
        report.payload_bit_errors += o.payload_bit_errors;
    }
    return report;
}

enum class SweepVar { Distance, Ebn0 };

struct SweepPoint {
    double value = 0.0;
    bool ok = false;
    std::string error;
    BerReport report;
};

// One run_link per grid point with a per-point derived seed. Failures are
// recorded and the sweep continues. Points may run concurrently; results
// are keyed by grid index so ordering never depends on scheduling.
inline std::vector<SweepPoint> sweep(const LinkConfig& base, SweepVar var,
                                     const std::vector<double>& grid, int threads = 1)
{
    if (grid.empty())
        throw ConfigError("sweep: empty grid");

    auto run_point = [&base, var](size_t index, double value) {
        SweepPoint point;
        point.value = value;
        LinkConfig cfg = base;
        cfg.seed = derive_seed(base.seed, index);
        if (var == SweepVar::Distance) {
            cfg.distance_m = value;
            cfg.ebn0_db_override.reset();
        } else {
            cfg.ebn0_db_override = value;
            cfg.distance_m.reset();
        }
        try {
            point.report = run_link(cfg);
            point.ok = true;
        } catch (const std::exception& e) {
            point.error = e.what();
        }
        return point;
    };

    std::vector<SweepPoint> points(grid.size());
    if (threads <= 1) {
        for (size_t i = 0; i < grid.size(); ++i)
            points[i] = run_point(i, grid[i]);
        return points;
    }
    for (size_t start = 0; start < grid.size(); start += static_cast<size_t>(threads)) {
        const size_t stop = std::min(grid.size(), start + static_cast<size_t>(threads));
        std::vector<std::future<SweepPoint>> batch;
        for (size_t i = start; i < stop; ++i)
            batch.push_back(std::async(std::launch::async, run_point, i, grid[i]));
        for (size_t i = start; i < stop; ++i)
            points[i] = batch[i - start].get();
    }
    return points;
}

inline void sweep_csv(const std::vector<SweepPoint>& points, std::ostream& os)
{
    csv::Writer w(os);
    w.row({"variable", "ebn0_db", "ber_pre_fec", "ber_post_fec", "fer", "ci_low", "ci_high"});
    for (const auto& p : points) {
        w.field(p.value);
        if (!p.ok) {
            for (int i = 0; i < 6; ++i)
                w.field("nan");
        } else {
            const auto ci = p.report.ber_post_fec_ci();
            w.field(p.report.ebn0_db)
                .field(p.report.ber_pre_fec())
                .field(p.report.ber_post_fec())
                .field(p.report.fer())
                .field(ci.low)
                .field(ci.high);
        }
        w.end_row();
    }
}

struct EyeTrace {
    std::vector<double> soft;                          // one per decided symbol
    std::vector<std::vector<modem::Complex>> windows;  // 2-symbol product segments (L > 1)
};

// Demodulator soft outputs for `symbols` transmitted symbols (the first is
// the differential reference), optionally with the oversampled product
// waveform chopped into 2-symbol windows for eye plotting.
inline EyeTrace emit_eye(const LinkConfig& cfg, int symbols)
{
    validate(cfg);
    if (symbols < 100)
        throw ConfigError("emit_eye: need at least 100 symbols");

    Rng rng(cfg.seed);
    BitVec line_bits(static_cast<size_t>(symbols - 1));
    for (auto& b : line_bits)
        b = rng.coin_bit();

    const double ebn0_db = resolve_ebn0_db(cfg);
    const double n0 = channel::noise_density_for_ebn0(ebn0_db, cfg.budget.bit_rate_bps);
    modem::SampleStream wave = modem::transmit(line_bits, cfg.modem);
    const size_t window = wave.samples.size();
    if (cfg.sv) {
        wave = channel::apply_channel(wave, channel::gen_sv_cir(*cfg.sv, rng));
        wave.samples.resize(window);  // keep the observation window fixed
    }
    wave = channel::add_awgn(wave, n0, rng);

    EyeTrace trace;
    trace.soft = modem::diff_demod(wave, cfg.modem);

    const int L = cfg.modem.oversampling;
    if (L > 1) {
        std::vector<modem::Complex> product(wave.samples.size() - static_cast<size_t>(L));
        for (size_t n = 0; n < product.size(); ++n)
            product[n] = wave.samples[n + static_cast<size_t>(L)] * std::conj(wave.samples[n]);
        for (size_t k = 1; k + 1 < trace.soft.size(); ++k) {
            const size_t begin = (k - 1) * static_cast<size_t>(L);
            trace.windows.emplace_back(product.begin() + static_cast<long>(begin),
                                       product.begin() + static_cast<long>(begin + 2 * L));
        }
    }
    return trace;
}

inline std::string format_report(const BerReport& r)
{
    std::ostringstream os;
    const auto pre = r.ber_pre_fec_ci();
    const auto post = r.ber_post_fec_ci();
    const auto fer = r.fer_ci();
    os << "frames_sent                  " << r.frames_sent << '\n'
       << "frames_lost_sync             " << r.frames_lost_sync << '\n'
       << "frames_fec_fail              " << r.frames_fec_fail << '\n'
       << "frames_in_error              " << r.frames_in_error << '\n'
       << "corrected_bytes_total        " << r.corrected_bytes_total << '\n'
       << "line_bits_sent               " << r.line_bits_sent << '\n'
       << "line_bit_errors              " << r.line_bit_errors << '\n'
       << "payload_bits_sent            " << r.payload_bits_sent << '\n'
       << "payload_bit_errors           " << r.payload_bit_errors << '\n'
       << "ebn0_db                      " << r.ebn0_db << '\n'
       << "ber_pre_fec                  " << r.ber_pre_fec() << " [" << pre.low << ", "
       << pre.high << "]\n"
       << "ber_post_fec                 " << r.ber_post_fec() << " [" << post.low << ", "
       << post.high << "]\n"
       << "fer                          " << r.fer() << " [" << fer.low << ", " << fer.high
       << "]\n"
       << "effective_payload_rate_mbps  " << r.effective_payload_rate_mbps() << '\n';
    return os.str();
}

} // namespace mmwlink::link
