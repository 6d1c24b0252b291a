#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mmwlink/bits.hpp"
#include "mmwlink/framing.hpp"
#include "mmwlink/rng.hpp"
#include "mmwlink/stats.hpp"

namespace mmwlink::sync {

inline constexpr int kCorrelators = 8;   // one per bit shift within a byte

struct SyncConfig {
    int threshold = 28;                            // matches out of 32
    int frame_period_bits = framing::kFrameBits;   // 2080
    int window_bytes = 264;                        // preamble + body + preamble

    void validate() const
    {
        if (threshold < 1 || threshold > 32)
            throw std::invalid_argument("SyncConfig: threshold must be in 1..32");
    }
};

// Agreement count between two 32-bit windows: 32 - Hamming distance.
inline int correlate32(uint32_t window, uint32_t pattern)
{
    return 32 - popcount32(window ^ pattern);
}

struct PreambleHit {
    size_t bit_offset = 0;  // absolute position of the window start
    int shift = 0;          // correlator index C_k = bit_offset mod 8
    int score = 0;
};

// Correlator bank: at every byte boundary, eight 32-bit correlators look at
// bit shifts 0..7 of the next 39 bits. Every window scoring >= threshold is
// reported, ordered by offset then shift.
inline std::vector<PreambleHit> detect_preamble(const BitVec& stream, const SyncConfig& cfg,
                                                uint32_t pattern)
{
    cfg.validate();
    std::vector<PreambleHit> hits;
    if (stream.size() < 39)
        return hits;
    for (size_t byte_pos = 0; byte_pos * 8 + 39 <= stream.size(); ++byte_pos) {
        const size_t base = byte_pos * 8;
        uint32_t w = pack_u32(stream, base);
        for (int k = 0; k < kCorrelators; ++k) {
            if (k > 0)
                w = (w << 1) | stream[base + 31 + static_cast<size_t>(k)];
            const int score = correlate32(w, pattern);
            if (score >= cfg.threshold)
                hits.push_back(PreambleHit{base + static_cast<size_t>(k), k, score});
        }
    }
    return hits;
}

inline std::vector<PreambleHit> detect_preamble(const BitVec& stream, const SyncConfig& cfg)
{
    return detect_preamble(stream, cfg, framing::make_preamble().word);
}

struct SyncDecision {
    size_t frame_start = 0;  // bit offset of the first preamble
    int shift = 0;           // common correlator index of both hits
    int score1 = 0;
    int score2 = 0;
};

// Validation over the 264-byte window: the earliest pair of hits exactly one
// frame period apart and flagged by the same correlator C_k.
inline std::optional<SyncDecision> validate_period(const std::vector<PreambleHit>& hits,
                                                   const SyncConfig& cfg)
{
    const size_t period = static_cast<size_t>(cfg.frame_period_bits);
    for (size_t i = 0; i < hits.size(); ++i) {
        for (size_t j = i + 1; j < hits.size(); ++j) {
            const size_t gap = hits[j].bit_offset - hits[i].bit_offset;
            if (gap > period)
                break;
            if (gap == period && hits[j].shift == hits[i].shift)
                return SyncDecision{hits[i].bit_offset, hits[i].shift,
                                    hits[i].score, hits[j].score};
        }
    }
    return std::nullopt;
}

// Re-packs the stream into bytes with the detected bit shift removed; the
// first byte returned is the first post-preamble byte of the frame.
inline ByteVec byte_align(const SyncDecision& decision, const BitVec& stream)
{
    const size_t body_start = decision.frame_start + 32;
    if (body_start + static_cast<size_t>(framing::kBodyBytes) * 8 > stream.size())
        throw std::invalid_argument("byte_align: stream too short for a frame body");
    const size_t n_bytes = (stream.size() - body_start) / 8;
    return bits_to_bytes(stream, body_start, n_bytes);
}

// Continuous-stream receiver: correlator-bank acquisition, then tracking by
// frame period. Each expected preamble is re-validated at score >= T; a
// single miss coasts on the flywheel, two consecutive misses drop sync and
// restart acquisition after the last accepted frame.
class StreamReceiver {
public:
    explicit StreamReceiver(SyncConfig cfg) : cfg_(cfg) { cfg_.validate(); }

    struct FrameEvent {
        size_t frame_start = 0;   // bit offset of the frame's preamble
        int shift = 0;
        int score = 0;
        bool reacquired = false;  // first frame after (re)acquisition
    };

    std::vector<FrameEvent> process(const BitVec& stream) const
    {
        const uint32_t pattern = framing::make_preamble().word;
        const size_t period = static_cast<size_t>(cfg_.frame_period_bits);
        std::vector<FrameEvent> frames;
        size_t search_from = 0;
        while (search_from + period + 39 <= stream.size()) {
            const BitVec tail(stream.begin() + static_cast<long>(search_from), stream.end());
            const auto decision = validate_period(detect_preamble(tail, cfg_), cfg_);
            if (!decision)
                break;
            size_t start = search_from + decision->frame_start;
            frames.push_back(FrameEvent{start, decision->shift, decision->score1, true});

            // track by period until two consecutive preambles fall below T
            int misses = 0;
            while (true) {
                const size_t next = start + period;
                if (next + 32 > stream.size())
                    return frames;
                const int score = correlate32(pack_u32(stream, next), pattern);
                if (score >= cfg_.threshold) {
                    misses = 0;
                    frames.push_back(FrameEvent{next, decision->shift, score, false});
                } else if (++misses >= 2) {
                    search_from = next;  // drop sync, re-acquire from here
                    break;
                } else {
                    frames.push_back(FrameEvent{next, decision->shift, score, false});
                }
                start = next;
            }
        }
        return frames;
    }

private:
    SyncConfig cfg_;
};

struct RocRow {
    int threshold = 0;
    double miss_mc = 0.0;
    double miss_exact = 0.0;
    double fa_mc = 0.0;
    double fa_exact = 0.0;
};

// Monte Carlo miss / false-alarm estimates per correlator window, next to
// their exact binomial references. Miss: a genuine preamble under i.i.d.
// bit flips of probability p scores below T. False alarm: a random window
// scores at or above T.
inline std::vector<RocRow> sync_roc(double p_bit_error, const std::vector<int>& thresholds,
                                    uint64_t trials, Rng& rng)
{
    if (p_bit_error < 0.0 || p_bit_error > 0.5)
        throw std::invalid_argument("sync_roc: p must be in [0, 0.5]");

    const uint32_t pattern = framing::make_preamble().word;
    std::vector<uint64_t> flip_counts(trials);
    std::vector<int> random_scores(trials);
    for (uint64_t t = 0; t < trials; ++t) {
        uint32_t flips = 0;
        for (int b = 0; b < 32; ++b)
            if (rng.uniform() < p_bit_error)
                flips |= 1u << b;
        flip_counts[t] = static_cast<uint64_t>(popcount32(flips));
        random_scores[t] = correlate32(rng.next_u32(), pattern);
    }

    std::vector<RocRow> rows;
    rows.reserve(thresholds.size());
    for (int threshold : thresholds) {
        RocRow row;
        row.threshold = threshold;
        uint64_t misses = 0, alarms = 0;
        for (uint64_t t = 0; t < trials; ++t) {
            if (32 - static_cast<int>(flip_counts[t]) < threshold)
                ++misses;
            if (random_scores[t] >= threshold)
                ++alarms;
        }
        row.miss_mc = static_cast<double>(misses) / static_cast<double>(trials);
        row.fa_mc = static_cast<double>(alarms) / static_cast<double>(trials);
        // score < T <=> flips >= 33 - T
        row.miss_exact = binomial_tail_ge(32, 33 - threshold, p_bit_error);
        row.fa_exact = binomial_tail_ge(32, threshold, 0.5);
        rows.push_back(row);
    }
    return rows;
}

} // namespace mmwlink::sync
