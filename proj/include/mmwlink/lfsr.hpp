#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "mmwlink/bits.hpp"

namespace mmwlink {

// Degree-5 Fibonacci LFSR. The 5-bit state holds s_n..s_n+4 with s_n in
// bit 0; the output is s_n and the feedback s_n+5 = parity(state & taps).
// taps 0b00101 realizes x^5 + x^2 + 1.
inline constexpr unsigned kLfsrDegree = 5;
inline constexpr unsigned kLfsrStateMask = 0x1f;

inline uint8_t lfsr_step(uint8_t& state, uint8_t taps)
{
    const uint8_t out = state & 1u;
    const uint8_t fb = static_cast<uint8_t>(std::popcount(static_cast<unsigned>(state & taps)) & 1);
    state = static_cast<uint8_t>((state >> 1) | (fb << (kLfsrDegree - 1)));
    return out;
}

inline BitVec pn_sequence(uint8_t taps, uint8_t seed, size_t length)
{
    if ((seed & kLfsrStateMask) == 0)
        throw std::invalid_argument("pn_sequence: zero seed");
    if ((taps & kLfsrStateMask) == 0 || taps > kLfsrStateMask)
        throw std::invalid_argument("pn_sequence: taps must select degree-5 state bits");
    uint8_t state = seed & kLfsrStateMask;
    BitVec out;
    out.reserve(length);
    for (size_t i = 0; i < length; ++i)
        out.push_back(lfsr_step(state, taps));
    return out;
}

// State-orbit length from the given seed; 31 for a primitive polynomial.
inline int lfsr_period(uint8_t taps, uint8_t seed)
{
    uint8_t state = seed & kLfsrStateMask;
    const uint8_t start = state;
    int n = 0;
    do {
        lfsr_step(state, taps);
        ++n;
    } while (state != start && n <= 32);
    return n;
}

inline bool lfsr_is_maximal(uint8_t taps)
{
    return lfsr_period(taps, 0b00001) == 31;
}

} // namespace mmwlink
