#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mmwlink {

// mt19937_64 is bit-exact across standard libraries; the std distributions
// are not, so the draw functions below are hand-rolled. Every stochastic
// routine takes an Rng by reference and never touches global state.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    uint32_t next_u32() { return static_cast<uint32_t>(engine_() >> 32); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n).
    uint64_t uniform_int(uint64_t n)
    {
        return static_cast<uint64_t>(uniform() * static_cast<double>(n)) % n;
    }

    uint8_t coin_bit() { return static_cast<uint8_t>(engine_() >> 63); }

    // Standard normal via Box-Muller; caches the second deviate.
    double normal()
    {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0)
            u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double t = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(t);
        have_spare_ = true;
        return r * std::cos(t);
    }

    double exponential(double rate) { return -std::log(1.0 - uniform()) / rate; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// splitmix64 finalizer; used to derive independent per-unit seeds so that
// parallel and serial execution draw identical streams.
inline uint64_t mix_u64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t index)
{
    return mix_u64(master ^ mix_u64(index + 1));
}

} // namespace mmwlink
