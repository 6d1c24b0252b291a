#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mmwlink/bits.hpp"
#include "mmwlink/lfsr.hpp"
#include "mmwlink/rs.hpp"

namespace mmwlink::framing {

// On-air frame: preamble | header | RS codeword, 260 bytes = 2080 bits.
// Header + codeword (256 bytes) travel scrambled; the preamble does not.
inline constexpr int kPreambleBytes = 4;
inline constexpr int kHeaderBytes = 1;
inline constexpr int kPayloadBytes = 239;
inline constexpr int kCodewordBytes = 255;
inline constexpr int kBodyBytes = 256;
inline constexpr int kFrameBytes = 260;
inline constexpr int kFrameBits = kFrameBytes * 8;
inline constexpr int kPausePeriods = kFrameBytes - kPayloadBytes;  // 21

// Preamble LFSR: x^5 + x^2 + 1, seed 00001, PN-31 plus one 0 pad bit.
inline constexpr uint8_t kPreambleTaps = 0b00101;
inline constexpr uint8_t kPreambleSeed = 0b00001;
inline constexpr uint8_t kPreamblePadBit = 0;

struct Preamble {
    std::array<uint8_t, kPreambleBytes> bytes{};
    BitVec bits;      // 32 bits, MSB-first packing of bytes
    uint32_t word = 0;
};

inline const Preamble& make_preamble()
{
    static const Preamble preamble = [] {
        if (!lfsr_is_maximal(kPreambleTaps))
            throw std::logic_error("preamble taps are not maximal-length");
        Preamble p;
        p.bits = pn_sequence(kPreambleTaps, kPreambleSeed, 31);
        p.bits.push_back(kPreamblePadBit);
        const ByteVec packed = bits_to_bytes(p.bits);
        for (int i = 0; i < kPreambleBytes; ++i)
            p.bytes[static_cast<size_t>(i)] = packed[static_cast<size_t>(i)];
        p.word = pack_u32(p.bits, 0);
        return p;
    }();
    return preamble;
}

struct ScramblerSeq {
    std::array<uint8_t, 4> bytes{};
    BitVec bits;          // 32 bits
    int shift = 0;        // cyclic shift of the PN-31 that was selected
    int max_score = 32;   // worst correlator score achieved by the selection
};

namespace detail {
inline int agreement32(const BitVec& stream, size_t off, uint32_t pattern)
{
    uint32_t w = 0;
    for (size_t i = 0; i < 32; ++i)
        w = (w << 1) | stream[off + i];
    return 32 - std::popcount(w ^ pattern);
}
} // namespace detail

// Scrambler sequence selection: among the 31 cyclic shifts of the PN-31
// (each padded like the preamble), pick the one whose scrambled all-zero
// stream has the lowest worst-case correlator score against the preamble
// over the 39 bit alignments a correlator bank can see. Ties go to the
// smallest shift.
inline ScramblerSeq select_scrambler(const Preamble& preamble)
{
    const BitVec pn = pn_sequence(kPreambleTaps, kPreambleSeed, 31);
    ScramblerSeq best;
    best.max_score = 33;
    for (int shift = 0; shift < 31; ++shift) {
        BitVec cand;
        cand.reserve(32);
        for (int i = 0; i < 31; ++i)
            cand.push_back(pn[static_cast<size_t>((i + shift) % 31)]);
        cand.push_back(kPreamblePadBit);

        // All-zero payload scrambled by cand is cand repeated every 32 bits.
        BitVec stream;
        stream.reserve(32 * 3);
        for (int r = 0; r < 3; ++r)
            stream.insert(stream.end(), cand.begin(), cand.end());

        int worst = 0;
        for (size_t off = 0; off < 39; ++off)
            worst = std::max(worst, detail::agreement32(stream, off, preamble.word));

        if (worst < best.max_score) {
            best.max_score = worst;
            best.shift = shift;
            best.bits = cand;
        }
    }
    const ByteVec packed = bits_to_bytes(best.bits);
    for (int i = 0; i < 4; ++i)
        best.bytes[static_cast<size_t>(i)] = packed[static_cast<size_t>(i)];
    return best;
}

inline const ScramblerSeq& default_scrambler()
{
    static const ScramblerSeq seq = select_scrambler(make_preamble());
    return seq;
}

// XOR with the 4-byte sequence repeated; involutive.
inline ByteVec scramble(const ByteVec& data, const ScramblerSeq& seq)
{
    if (data.size() % 4 != 0)
        throw std::invalid_argument("scramble: length must be a multiple of 4");
    ByteVec out(data.size());
    for (size_t i = 0; i < data.size(); ++i)
        out[i] = static_cast<uint8_t>(data[i] ^ seq.bytes[i % 4]);
    return out;
}

struct Frame {
    std::array<uint8_t, kFrameBytes> bytes{};

    ByteVec to_bytes() const { return ByteVec(bytes.begin(), bytes.end()); }
    BitVec to_bits() const { return bytes_to_bits(to_bytes()); }
};

inline Frame build_frame(const ByteVec& payload, uint8_t header = 0x00)
{
    if (payload.size() != static_cast<size_t>(kPayloadBytes))
        throw std::invalid_argument("build_frame: payload must be 239 bytes");

    ByteVec body;
    body.reserve(kBodyBytes);
    body.push_back(header);
    const ByteVec codeword = rs::encode(payload);
    body.insert(body.end(), codeword.begin(), codeword.end());
    body = scramble(body, default_scrambler());

    Frame f;
    const Preamble& p = make_preamble();
    for (int i = 0; i < kPreambleBytes; ++i)
        f.bytes[static_cast<size_t>(i)] = p.bytes[static_cast<size_t>(i)];
    for (int i = 0; i < kBodyBytes; ++i)
        f.bytes[static_cast<size_t>(kPreambleBytes + i)] = body[static_cast<size_t>(i)];
    return f;
}

struct ParsedBody {
    ByteVec payload;  // 239 bytes
    uint8_t header = 0;
    int corrected = 0;
};

// body = the 256 scrambled bytes that follow a validated preamble.
inline std::optional<ParsedBody> parse_frame(const ByteVec& body)
{
    if (body.size() != static_cast<size_t>(kBodyBytes))
        throw std::invalid_argument("parse_frame: body must be 256 bytes");
    const ByteVec clear = scramble(body, default_scrambler());
    const ByteVec codeword(clear.begin() + kHeaderBytes, clear.end());
    auto decoded = rs::decode(codeword);
    if (!decoded)
        return std::nullopt;
    return ParsedBody{std::move(decoded->message), clear[0], decoded->corrected};
}

// Best-effort payload of a body whose FEC failed: descramble and strip.
inline ByteVec uncorrected_payload(const ByteVec& body)
{
    if (body.size() != static_cast<size_t>(kBodyBytes))
        throw std::invalid_argument("uncorrected_payload: body must be 256 bytes");
    const ByteVec clear = scramble(body, default_scrambler());
    return ByteVec(clear.begin() + kHeaderBytes, clear.begin() + kHeaderBytes + kPayloadBytes);
}

struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    static Rational make(int64_t n, int64_t d)
    {
        const int64_t g = std::gcd(n, d);
        return Rational{n / g, d / g};
    }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// Byte clocks on the two sides of the rate-adaptation FIFO: the payload
// side runs at f1, the line side at f2, with f1/f2 = 239/260 held exactly.
struct ClockPlan {
    int64_t line_rate_bps = 0;
    Rational f2_hz;       // line byte clock
    Rational f1_hz;       // payload byte clock
    int pause_periods = kPausePeriods;

    double f1_mhz() const { return f1_hz.value() / 1e6; }
    double f2_mhz() const { return f2_hz.value() / 1e6; }
};

inline ClockPlan make_clock_plan(int64_t line_rate_bps)
{
    if (line_rate_bps <= 0)
        throw std::invalid_argument("make_clock_plan: line rate must be positive");
    ClockPlan plan;
    plan.line_rate_bps = line_rate_bps;
    plan.f2_hz = Rational::make(line_rate_bps, 8);
    plan.f1_hz = Rational::make(line_rate_bps * kPayloadBytes, 8 * kFrameBytes);
    return plan;
}

struct FifoTrace {
    std::vector<double> occupancy_bytes;       // one entry per f2 tick
    std::optional<size_t> underflow_tick;
    std::optional<size_t> overflow_tick;
};

// Writes arrive continuously at 239/260 byte per f2 tick; reads drain one
// byte per tick for 239 ticks then pause for 21, per frame. Occupancy is
// tracked in exact 1/260-byte units. Reading starts half-full.
inline FifoTrace fifo_occupancy_trace(int n_frames, int capacity_bytes = 512)
{
    if (n_frames < 1)
        throw std::invalid_argument("fifo_occupancy_trace: need at least one frame");
    if (capacity_bytes < 1)
        throw std::invalid_argument("fifo_occupancy_trace: capacity must be positive");

    const int64_t unit = kFrameBytes;                       // 260 units = 1 byte
    const int64_t cap_units = int64_t{capacity_bytes} * unit;
    int64_t occ = cap_units / 2;

    FifoTrace trace;
    trace.occupancy_bytes.reserve(static_cast<size_t>(n_frames) * kFrameBytes);
    for (int f = 0; f < n_frames; ++f) {
        for (int t = 0; t < kFrameBytes; ++t) {
            occ += kPayloadBytes;                            // write 239/260 byte
            if (t < kPayloadBytes)
                occ -= unit;                                 // read 1 byte
            const size_t tick = trace.occupancy_bytes.size();
            if (occ < 0 && !trace.underflow_tick)
                trace.underflow_tick = tick;
            if (occ > cap_units && !trace.overflow_tick)
                trace.overflow_tick = tick;
            trace.occupancy_bytes.push_back(static_cast<double>(occ) /
                                            static_cast<double>(unit));
        }
    }
    return trace;
}

} // namespace mmwlink::framing
