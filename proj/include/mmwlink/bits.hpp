#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace mmwlink {

// One element per bit, values 0/1. Wasteful but simple; streams here are a
// few thousand bits at a time.
using BitVec = std::vector<uint8_t>;
using ByteVec = std::vector<uint8_t>;

// Global bit transmission order: most-significant bit of each byte first.
inline BitVec bytes_to_bits(const ByteVec& bytes)
{
    BitVec bits;
    bits.reserve(bytes.size() * 8);
    for (uint8_t b : bytes)
        for (int j = 7; j >= 0; --j)
            bits.push_back(static_cast<uint8_t>((b >> j) & 1u));
    return bits;
}

inline ByteVec bits_to_bytes(const BitVec& bits, size_t first_bit, size_t n_bytes)
{
    if (first_bit + n_bytes * 8 > bits.size())
        throw std::invalid_argument("bits_to_bytes: stream too short");
    ByteVec out(n_bytes);
    for (size_t i = 0; i < n_bytes; ++i) {
        uint8_t b = 0;
        for (int j = 0; j < 8; ++j)
            b = static_cast<uint8_t>((b << 1) | bits[first_bit + i * 8 + j]);
        out[i] = b;
    }
    return out;
}

inline ByteVec bits_to_bytes(const BitVec& bits)
{
    if (bits.size() % 8 != 0)
        throw std::invalid_argument("bits_to_bytes: bit count not a multiple of 8");
    return bits_to_bytes(bits, 0, bits.size() / 8);
}

// 32 bits starting at bit_off, packed MSB-first into a word.
inline uint32_t pack_u32(const BitVec& bits, size_t bit_off)
{
    if (bit_off + 32 > bits.size())
        throw std::invalid_argument("pack_u32: window past end of stream");
    uint32_t w = 0;
    for (size_t i = 0; i < 32; ++i)
        w = (w << 1) | bits[bit_off + i];
    return w;
}

inline int popcount32(uint32_t x) { return std::popcount(x); }

} // namespace mmwlink
