#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "mmwlink/bits.hpp"
#include "mmwlink/gf256.hpp"

namespace mmwlink::rs {

inline constexpr int kN = 255;      // codeword bytes
inline constexpr int kK = 239;      // message bytes
inline constexpr int kParity = 16;  // 2t check bytes
inline constexpr int kT = 8;        // correctable byte errors

// First consecutive generator root: g(x) = prod_{j=0..15} (x - alpha^(b+j)).
// b = 0 here; change to 1 for codes built on the other common convention.
inline constexpr int kFirstRoot = 0;

namespace detail {

// Generator coefficients, ascending powers, g[16] = 1 (monic).
consteval std::array<uint8_t, kParity + 1> build_generator()
{
    std::array<uint8_t, kParity + 1> g{};
    g[0] = 1;
    for (int j = 0; j < kParity; ++j) {
        const uint8_t root = gf::alpha_pow(kFirstRoot + j);
        // multiply g by (x - root); subtraction is addition in GF(2^8)
        for (int i = j + 1; i > 0; --i)
            g[static_cast<size_t>(i)] =
                gf::add(g[static_cast<size_t>(i - 1)],
                        gf::mul(g[static_cast<size_t>(i)], root));
        g[0] = gf::mul(g[0], root);
    }
    return g;
}

inline constexpr std::array<uint8_t, kParity + 1> kGenerator = build_generator();

// Byte i of the codeword is the coefficient of x^(254-i): message first,
// parity last. Syndrome S_j = c(alpha^(b+j)), evaluated by Horner over the
// transmit order.
inline std::array<uint8_t, kParity> syndromes(const ByteVec& word)
{
    std::array<uint8_t, kParity> s{};
    for (int j = 0; j < kParity; ++j) {
        const uint8_t point = gf::alpha_pow(kFirstRoot + j);
        uint8_t acc = 0;
        for (uint8_t byte : word)
            acc = gf::add(gf::mul(acc, point), byte);
        s[static_cast<size_t>(j)] = acc;
    }
    return s;
}

} // namespace detail

inline ByteVec encode(const ByteVec& message)
{
    if (message.size() != static_cast<size_t>(kK))
        throw std::invalid_argument("rs::encode: message must be 239 bytes");

    // Remainder of m(x) * x^16 divided by g(x); rem[0] holds the x^15
    // coefficient so the array is already in transmit order.
    std::array<uint8_t, kParity> rem{};
    for (uint8_t m : message) {
        const uint8_t fb = static_cast<uint8_t>(m ^ rem[0]);
        for (int k = 0; k < kParity - 1; ++k)
            rem[static_cast<size_t>(k)] =
                gf::add(rem[static_cast<size_t>(k + 1)],
                        gf::mul(fb, detail::kGenerator[static_cast<size_t>(kParity - 1 - k)]));
        rem[kParity - 1] = gf::mul(fb, detail::kGenerator[0]);
    }

    ByteVec code(message);
    code.insert(code.end(), rem.begin(), rem.end());
    return code;
}

struct DecodeResult {
    ByteVec message;  // 239 bytes
    int corrected = 0;
};

// Bounded-distance decode: syndromes, Berlekamp-Massey, Chien search,
// Forney. nullopt when no consistent error pattern of weight <= 8 exists.
inline std::optional<DecodeResult> decode(const ByteVec& received)
{
    if (received.size() != static_cast<size_t>(kN))
        throw std::invalid_argument("rs::decode: received word must be 255 bytes");

    const auto synd = detail::syndromes(received);
    bool clean = true;
    for (uint8_t s : synd)
        if (s != 0)
            clean = false;
    if (clean)
        return DecodeResult{ByteVec(received.begin(), received.begin() + kK), 0};

    // Berlekamp-Massey for the error locator Lambda.
    std::array<uint8_t, kParity + 1> lambda{};
    std::array<uint8_t, kParity + 1> prev{};
    lambda[0] = 1;
    prev[0] = 1;
    int errs = 0;
    int shift = 1;
    uint8_t prev_delta = 1;
    for (int n = 0; n < kParity; ++n) {
        uint8_t delta = synd[static_cast<size_t>(n)];
        for (int i = 1; i <= errs; ++i)
            delta = gf::add(delta, gf::mul(lambda[static_cast<size_t>(i)],
                                           synd[static_cast<size_t>(n - i)]));
        if (delta == 0) {
            ++shift;
            continue;
        }
        const uint8_t scale = gf::div(delta, prev_delta);
        if (2 * errs <= n) {
            const auto saved = lambda;
            for (int i = 0; i + shift <= kParity; ++i)
                lambda[static_cast<size_t>(i + shift)] =
                    gf::add(lambda[static_cast<size_t>(i + shift)],
                            gf::mul(scale, prev[static_cast<size_t>(i)]));
            errs = n + 1 - errs;
            prev = saved;
            prev_delta = delta;
            shift = 1;
        } else {
            for (int i = 0; i + shift <= kParity; ++i)
                lambda[static_cast<size_t>(i + shift)] =
                    gf::add(lambda[static_cast<size_t>(i + shift)],
                            gf::mul(scale, prev[static_cast<size_t>(i)]));
            ++shift;
        }
    }

    if (errs > kT)
        return std::nullopt;

    // Chien search: error at byte index i <=> Lambda(alpha^-(254-i)) = 0.
    std::array<int, kT> positions{};
    int n_roots = 0;
    for (int p = 0; p < kN; ++p) {
        const uint8_t xinv = gf::alpha_pow(-p);
        uint8_t acc = 0;
        for (int i = errs; i >= 0; --i)
            acc = gf::add(gf::mul(acc, xinv), lambda[static_cast<size_t>(i)]);
        if (acc == 0) {
            if (n_roots >= errs)
                return std::nullopt;
            positions[static_cast<size_t>(n_roots++)] = p;
        }
    }
    if (n_roots != errs)
        return std::nullopt;

    // Omega = S(x) * Lambda(x) mod x^16
    std::array<uint8_t, kParity> omega{};
    for (int k = 0; k < kParity; ++k) {
        uint8_t acc = 0;
        for (int i = 0; i <= k && i <= errs; ++i)
            acc = gf::add(acc, gf::mul(lambda[static_cast<size_t>(i)],
                                       synd[static_cast<size_t>(k - i)]));
        omega[static_cast<size_t>(k)] = acc;
    }

    ByteVec corrected(received);
    for (int r = 0; r < n_roots; ++r) {
        const int p = positions[static_cast<size_t>(r)];
        const uint8_t xinv = gf::alpha_pow(-p);
        uint8_t num = 0;
        for (int k = kParity - 1; k >= 0; --k)
            num = gf::add(gf::mul(num, xinv), omega[static_cast<size_t>(k)]);
        uint8_t den = 0;  // Lambda'(xinv): odd-power terms only
        for (int i = 1; i <= errs; i += 2)
            den = gf::add(den, gf::mul(lambda[static_cast<size_t>(i)],
                                       gf::alpha_pow(-p * (i - 1))));
        if (den == 0)
            return std::nullopt;
        const uint8_t magnitude =
            gf::mul(gf::alpha_pow(p * (1 - kFirstRoot)), gf::div(num, den));
        const size_t byte_index = static_cast<size_t>(kN - 1 - p);
        corrected[byte_index] = gf::add(corrected[byte_index], magnitude);
    }

    // Bounded-distance sanity: the corrected word must be a codeword.
    for (uint8_t s : detail::syndromes(corrected))
        if (s != 0)
            return std::nullopt;

    return DecodeResult{ByteVec(corrected.begin(), corrected.begin() + kK), n_roots};
}

} // namespace mmwlink::rs
