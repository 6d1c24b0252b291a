#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

namespace mmwlink::gf {

// GF(256) with primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d),
// generator alpha = x. A deliberate convention: the field is not dictated
// by the code rate, and 0x11d interoperates with the common RS references.
inline constexpr unsigned kPrimitivePoly = 0x11d;

struct Tables {
    std::array<uint8_t, 512> exp{};
    std::array<int16_t, 256> log{};
};

consteval Tables build_tables()
{
    Tables t;
    unsigned x = 1;
    for (int i = 0; i < 255; ++i) {
        t.exp[static_cast<size_t>(i)] = static_cast<uint8_t>(x);
        t.log[x] = static_cast<int16_t>(i);
        x <<= 1;
        if (x & 0x100u)
            x ^= kPrimitivePoly;
    }
    for (int i = 255; i < 512; ++i)
        t.exp[static_cast<size_t>(i)] = t.exp[static_cast<size_t>(i - 255)];
    t.log[0] = -1;
    return t;
}

inline constexpr Tables kTables = build_tables();

inline constexpr uint8_t add(uint8_t a, uint8_t b) { return a ^ b; }

inline constexpr uint8_t mul(uint8_t a, uint8_t b)
{
    if (a == 0 || b == 0)
        return 0;
    return kTables.exp[static_cast<size_t>(kTables.log[a] + kTables.log[b])];
}

inline constexpr uint8_t inv(uint8_t a)
{
    if (a == 0)
        throw std::domain_error("gf::inv(0)");
    return kTables.exp[static_cast<size_t>(255 - kTables.log[a])];
}

inline constexpr uint8_t div(uint8_t a, uint8_t b)
{
    if (b == 0)
        throw std::domain_error("gf::div by zero");
    if (a == 0)
        return 0;
    int d = kTables.log[a] - kTables.log[b];
    if (d < 0)
        d += 255;
    return kTables.exp[static_cast<size_t>(d)];
}

// alpha^i for any integer i (reduced mod 255).
inline constexpr uint8_t alpha_pow(int i)
{
    int e = i % 255;
    if (e < 0)
        e += 255;
    return kTables.exp[static_cast<size_t>(e)];
}

inline constexpr int log_of(uint8_t a)
{
    if (a == 0)
        throw std::domain_error("gf::log_of(0)");
    return kTables.log[a];
}

} // namespace mmwlink::gf
