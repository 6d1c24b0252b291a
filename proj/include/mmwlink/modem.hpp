#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mmwlink/bits.hpp"

namespace mmwlink::modem {

using Complex = std::complex<double>;

struct SampleStream {
    std::vector<Complex> samples;
    double sample_rate = 0.0;
};

enum class Pulse { Rectangular, RootRaisedCosine };

struct ModemConfig {
    double symbol_rate = 875e6;
    int oversampling = 4;            // L samples per symbol
    double lpf_cutoff_hz = 1e9;      // post-detector low-pass
    int lpf_taps = 63;
    Pulse pulse = Pulse::Rectangular;
    double rrc_rolloff = 0.25;
    int rrc_span_symbols = 8;

    double sample_rate() const { return symbol_rate * oversampling; }
    // At L = 1 the cutoff sits above Nyquist and the filter stage is a no-op.
    bool lpf_active() const
    {
        return oversampling > 1 && lpf_cutoff_hz < sample_rate() / 2.0;
    }
};

// Differential encoder reference state: a_(-1) = 0. The transmit pipeline
// puts this state on air as one leading reference symbol so the receiver's
// first conjugate product already carries data.
inline constexpr uint8_t kDiffReferenceBit = 0;

// a_k = a_(k-1) xor d_k, a_(-1) = 0.
inline BitVec diff_encode(const BitVec& bits)
{
    BitVec out;
    out.reserve(bits.size());
    uint8_t state = kDiffReferenceBit;
    for (uint8_t d : bits) {
        state = static_cast<uint8_t>(state ^ (d & 1u));
        out.push_back(state);
    }
    return out;
}

// Linear-phase windowed-sinc low-pass, DC gain 1, odd length.
inline std::vector<double> design_lowpass(double cutoff_hz, double sample_rate, int taps)
{
    if (taps < 3 || taps % 2 == 0)
        throw std::invalid_argument("design_lowpass: taps must be odd and >= 3");
    const int mid = (taps - 1) / 2;
    const double fc = cutoff_hz / sample_rate;  // cycles per sample
    std::vector<double> h(static_cast<size_t>(taps));
    double sum = 0.0;
    for (int n = 0; n < taps; ++n) {
        const int m = n - mid;
        const double x = 2.0 * std::numbers::pi * fc * m;
        const double sinc = (m == 0) ? 2.0 * fc : std::sin(x) / (std::numbers::pi * m);
        const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (taps - 1));
        h[static_cast<size_t>(n)] = sinc * w;
        sum += h[static_cast<size_t>(n)];
    }
    for (double& v : h)
        v /= sum;
    return h;
}

namespace detail {

inline std::vector<double> rrc_taps(const ModemConfig& cfg)
{
    const int L = cfg.oversampling;
    const int span = cfg.rrc_span_symbols;
    const int n_taps = span * L + 1;
    const double beta = cfg.rrc_rolloff;
    std::vector<double> h(static_cast<size_t>(n_taps));
    for (int n = 0; n < n_taps; ++n) {
        const double t = (n - span * L / 2) / static_cast<double>(L);  // in symbols
        double v;
        if (std::abs(t) < 1e-12) {
            v = 1.0 + beta * (4.0 / std::numbers::pi - 1.0);
        } else if (beta > 0.0 &&
                   std::abs(std::abs(t) - 1.0 / (4.0 * beta)) < 1e-9) {
            const double a = std::numbers::pi / (4.0 * beta);
            v = (beta / std::numbers::sqrt2) *
                ((1.0 + 2.0 / std::numbers::pi) * std::sin(a) +
                 (1.0 - 2.0 / std::numbers::pi) * std::cos(a));
        } else {
            const double pit = std::numbers::pi * t;
            const double four_bt = 4.0 * beta * t;
            v = (std::sin(pit * (1.0 - beta)) +
                 four_bt * std::cos(pit * (1.0 + beta))) /
                (pit * (1.0 - four_bt * four_bt));
        }
        h[static_cast<size_t>(n)] = v;
    }
    // Unit average transmit power for random symbols at spacing L.
    double energy = 0.0;
    for (double v : h)
        energy += v * v;
    const double scale = std::sqrt(static_cast<double>(L) / energy);
    for (double& v : h)
        v *= scale;
    return h;
}

} // namespace detail

// BPSK mapping bit -> (1 - 2 bit), pulse shaped to L samples per symbol,
// unit average power.
inline SampleStream modulate(const BitVec& symbol_bits, const ModemConfig& cfg)
{
    if (cfg.oversampling < 1)
        throw std::invalid_argument("modulate: oversampling must be >= 1");
    const int L = cfg.oversampling;
    SampleStream out;
    out.sample_rate = cfg.sample_rate();
    out.samples.assign(symbol_bits.size() * static_cast<size_t>(L), Complex{0.0, 0.0});

    if (cfg.pulse == Pulse::Rectangular) {
        size_t n = 0;
        for (uint8_t b : symbol_bits) {
            const double amp = b ? -1.0 : 1.0;
            for (int i = 0; i < L; ++i)
                out.samples[n++] = Complex{amp, 0.0};
        }
        return out;
    }

    const std::vector<double> h = detail::rrc_taps(cfg);
    const int mid = (static_cast<int>(h.size()) - 1) / 2;
    for (size_t k = 0; k < symbol_bits.size(); ++k) {
        const double amp = symbol_bits[k] ? -1.0 : 1.0;
        const int center = static_cast<int>(k) * L + L / 2;
        for (int m = 0; m < static_cast<int>(h.size()); ++m) {
            const int n = center + m - mid;
            if (n >= 0 && n < static_cast<int>(out.samples.size()))
                out.samples[static_cast<size_t>(n)] += amp * h[static_cast<size_t>(m)];
        }
    }
    return out;
}

// Delay-line detector: y_k = Re{ r_k Ts . conj(r_(k-1) Ts) }. The product
// stream is low-pass filtered at the configured cutoff (L > 1) and sampled
// at pulse centers. One fewer output than input symbols; the first symbol
// only seeds the delay line.
inline std::vector<double> diff_demod(const SampleStream& rx, const ModemConfig& cfg)
{
    const int L = cfg.oversampling;
    const size_t n_symbols = rx.samples.size() / static_cast<size_t>(L);
    if (n_symbols < 2)
        throw std::invalid_argument("diff_demod: need at least two symbols");

    std::vector<Complex> product(rx.samples.size() - static_cast<size_t>(L));
    for (size_t n = 0; n < product.size(); ++n)
        product[n] = rx.samples[n + static_cast<size_t>(L)] * std::conj(rx.samples[n]);

    std::vector<double> soft(n_symbols - 1);
    if (!cfg.lpf_active()) {
        for (size_t k = 0; k < soft.size(); ++k)
            soft[k] = product[k * static_cast<size_t>(L) + static_cast<size_t>(L / 2)].real();
        return soft;
    }

    const std::vector<double> h = design_lowpass(cfg.lpf_cutoff_hz, cfg.sample_rate(), cfg.lpf_taps);
    const int mid = (cfg.lpf_taps - 1) / 2;
    for (size_t k = 0; k < soft.size(); ++k) {
        // Filter output at the segment center, group delay compensated.
        const int center = static_cast<int>(k) * L + L / 2;
        Complex acc{0.0, 0.0};
        for (int m = 0; m < cfg.lpf_taps; ++m) {
            const int n = center + mid - m;
            if (n >= 0 && n < static_cast<int>(product.size()))
                acc += h[static_cast<size_t>(m)] * product[static_cast<size_t>(n)];
        }
        soft[k] = acc.real();
    }
    return soft;
}

// Threshold device: y > 0 -> 0, y < 0 -> 1, y = 0 -> 0.
inline BitVec slice(const std::vector<double>& soft)
{
    BitVec bits;
    bits.reserve(soft.size());
    for (double y : soft)
        bits.push_back(y < 0.0 ? 1 : 0);
    return bits;
}

// Full transmit chain for a line-bit stream: differential encoding with the
// a_(-1) reference symbol emitted, then pulse shaping. The demodulated and
// sliced output of a clean loopback equals line_bits exactly.
inline SampleStream transmit(const BitVec& line_bits, const ModemConfig& cfg)
{
    BitVec symbol_bits;
    symbol_bits.reserve(line_bits.size() + 1);
    symbol_bits.push_back(kDiffReferenceBit);
    const BitVec encoded = diff_encode(line_bits);
    symbol_bits.insert(symbol_bits.end(), encoded.begin(), encoded.end());
    return modulate(symbol_bits, cfg);
}

} // namespace mmwlink::modem
