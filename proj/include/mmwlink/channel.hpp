#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mmwlink/modem.hpp"
#include "mmwlink/rng.hpp"

namespace mmwlink::channel {

using modem::Complex;
using modem::SampleStream;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kBoltzmann = 1.380649e-23;

// ---------------------------------------------------------------------------
// Path loss
// ---------------------------------------------------------------------------

struct PathLossModel {
    double d0_m = 1.0;        // reference distance
    double exponent = 2.0;    // n
    double sigma_db = 0.0;    // shadowing standard deviation
    double freq_hz = 60e9;
};

inline double free_space_pl_db(double d_m, double freq_hz)
{
    if (d_m <= 0.0 || freq_hz <= 0.0)
        throw std::invalid_argument("free_space_pl_db: inputs must be positive");
    return 20.0 * std::log10(4.0 * std::numbers::pi * d_m * freq_hz / kSpeedOfLight);
}

// Modified Friis: PL_FS(d0) + 10 n log10(d/d0), no shadowing term.
inline double path_loss_mean_db(const PathLossModel& model, double d_m)
{
    if (d_m < model.d0_m)
        throw std::invalid_argument("path_loss: d must be >= d0");
    return free_space_pl_db(model.d0_m, model.freq_hz) +
           10.0 * model.exponent * std::log10(d_m / model.d0_m);
}

// Adds a zero-mean Gaussian shadowing draw with std sigma_db.
inline double path_loss_db(const PathLossModel& model, double d_m, Rng& rng)
{
    double pl = path_loss_mean_db(model, d_m);
    if (model.sigma_db > 0.0)
        pl += model.sigma_db * rng.normal();
    return pl;
}

// ---------------------------------------------------------------------------
// Modified Saleh-Valenzuela multipath
// ---------------------------------------------------------------------------

struct SvParams {
    double cluster_decay_ns = 19.44;    // Gamma
    double ray_decay_ns = 0.42;         // gamma
    double cluster_gain_std_db = 1.82;
    double ray_gain_std_db = 1.88;
    int avg_clusters = 6;
    // Arrival rates are not part of the published office/desktop parameter
    // sets; these defaults are configuration, not measurement.
    double cluster_rate_per_ns = 0.05;  // Lambda
    double ray_rate_per_ns = 1.0;       // lambda
    int rays_per_cluster_cap = 64;
};

inline SvParams office_sv_params() { return SvParams{}; }

inline SvParams desktop_sv_params()
{
    SvParams p;
    p.cluster_decay_ns = 4.01;
    p.ray_decay_ns = 0.58;
    p.cluster_gain_std_db = 2.70;
    p.ray_gain_std_db = 1.90;
    p.avg_clusters = 3;
    return p;
}

struct Tap {
    double delay_ns = 0.0;
    Complex gain{0.0, 0.0};
};

struct ChannelRealization {
    std::vector<Tap> taps;       // sorted by delay, ascending
    bool normalized = false;     // true when total power is 1
};

// Cluster count uniform in [1, 2*avg-1]; Poisson cluster and ray arrivals;
// doubly exponential mean power; lognormal per-cluster and per-ray gain
// fluctuation; uniform phase; unit total power.
inline ChannelRealization gen_sv_cir(const SvParams& params, Rng& rng)
{
    if (params.cluster_decay_ns <= 0.0 || params.ray_decay_ns <= 0.0 ||
        params.cluster_rate_per_ns <= 0.0 || params.ray_rate_per_ns <= 0.0 ||
        params.avg_clusters < 1 || params.rays_per_cluster_cap < 1)
        throw std::invalid_argument("gen_sv_cir: invalid parameters");

    const int n_clusters =
        1 + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(2 * params.avg_clusters - 1)));

    ChannelRealization cir;
    double cluster_delay = 0.0;
    for (int c = 0; c < n_clusters; ++c) {
        if (c > 0)
            cluster_delay += rng.exponential(params.cluster_rate_per_ns);
        const double cluster_fluct_db = params.cluster_gain_std_db * rng.normal();

        double ray_delay = 0.0;
        for (int r = 0; r < params.rays_per_cluster_cap; ++r) {
            if (r > 0) {
                ray_delay += rng.exponential(params.ray_rate_per_ns);
                // Rays beyond ~10 ray time constants carry negligible power.
                if (ray_delay > 10.0 * params.ray_decay_ns)
                    break;
            }
            const double mean_power = std::exp(-cluster_delay / params.cluster_decay_ns) *
                                      std::exp(-ray_delay / params.ray_decay_ns);
            const double fluct_db = cluster_fluct_db + params.ray_gain_std_db * rng.normal();
            const double power = mean_power * std::pow(10.0, fluct_db / 10.0);
            const double phase = 2.0 * std::numbers::pi * rng.uniform();
            cir.taps.push_back(Tap{cluster_delay + ray_delay,
                                   std::sqrt(power) * Complex{std::cos(phase), std::sin(phase)}});
        }
    }

    std::sort(cir.taps.begin(), cir.taps.end(),
              [](const Tap& a, const Tap& b) { return a.delay_ns < b.delay_ns; });

    double total = 0.0;
    for (const Tap& t : cir.taps)
        total += std::norm(t.gain);
    const double scale = 1.0 / std::sqrt(total);
    for (Tap& t : cir.taps)
        t.gain *= scale;
    cir.normalized = true;
    return cir;
}

// Power-weighted standard deviation of the tap delays.
inline double rms_delay_spread_ns(const ChannelRealization& cir)
{
    if (cir.taps.empty())
        throw std::invalid_argument("rms_delay_spread_ns: empty CIR");
    double p_sum = 0.0, t_sum = 0.0, t2_sum = 0.0;
    for (const Tap& t : cir.taps) {
        const double p = std::norm(t.gain);
        p_sum += p;
        t_sum += p * t.delay_ns;
        t2_sum += p * t.delay_ns * t.delay_ns;
    }
    const double mean = t_sum / p_sum;
    const double var = t2_sum / p_sum - mean * mean;
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

// Smallest frequency offset where the normalized frequency correlation
// |sum p_i exp(-j 2 pi f tau_i)| / sum p_i falls below `level`. Returns
// grid_max_mhz for channels that never decorrelate on the grid.
inline double coherence_bandwidth_mhz(const ChannelRealization& cir, double level = 0.5,
                                      double grid_step_mhz = 1.0, double grid_max_mhz = 2000.0)
{
    if (cir.taps.empty())
        throw std::invalid_argument("coherence_bandwidth_mhz: empty CIR");
    double p_sum = 0.0;
    for (const Tap& t : cir.taps)
        p_sum += std::norm(t.gain);
    for (double f_mhz = grid_step_mhz; f_mhz <= grid_max_mhz; f_mhz += grid_step_mhz) {
        Complex acc{0.0, 0.0};
        for (const Tap& t : cir.taps) {
            const double phi = -2.0 * std::numbers::pi * f_mhz * 1e6 * t.delay_ns * 1e-9;
            acc += std::norm(t.gain) * Complex{std::cos(phi), std::sin(phi)};
        }
        if (std::abs(acc) / p_sum < level)
            return f_mhz;
    }
    return grid_max_mhz;
}

// Tap delays quantize to the nearest sample of the stream's rate; taps
// landing on the same sample add coherently.
inline SampleStream apply_channel(const SampleStream& tx, const ChannelRealization& cir)
{
    if (cir.taps.empty())
        throw std::invalid_argument("apply_channel: empty CIR");
    if (tx.sample_rate <= 0.0)
        throw std::invalid_argument("apply_channel: stream sample rate unset");

    std::vector<Complex> fir;
    for (const Tap& t : cir.taps) {
        const auto idx = static_cast<size_t>(std::llround(t.delay_ns * 1e-9 * tx.sample_rate));
        if (idx >= fir.size())
            fir.resize(idx + 1, Complex{0.0, 0.0});
        fir[idx] += t.gain;
    }

    SampleStream out;
    out.sample_rate = tx.sample_rate;
    out.samples.assign(tx.samples.size() + fir.size() - 1, Complex{0.0, 0.0});
    for (size_t i = 0; i < fir.size(); ++i) {
        if (fir[i] == Complex{0.0, 0.0})
            continue;
        for (size_t n = 0; n < tx.samples.size(); ++n)
            out.samples[n + i] += fir[i] * tx.samples[n];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Noise and link budget
// ---------------------------------------------------------------------------

// Noise density for a target Eb/N0, in units where the signal has unit
// power: with Eb = 1/bit_rate, n0 = Eb / (Eb/N0).
inline double noise_density_for_ebn0(double ebn0_db, double bit_rate)
{
    if (bit_rate <= 0.0)
        throw std::invalid_argument("noise_density_for_ebn0: bit rate must be positive");
    return 1.0 / (bit_rate * std::pow(10.0, ebn0_db / 10.0));
}

// Circularly-symmetric complex Gaussian noise; per-sample variance is
// n0 * sample_rate.
inline SampleStream add_awgn(const SampleStream& x, double n0, Rng& rng)
{
    if (n0 < 0.0)
        throw std::invalid_argument("add_awgn: negative noise density");
    SampleStream out = x;
    if (n0 == 0.0)
        return out;
    const double sigma = std::sqrt(n0 * x.sample_rate / 2.0);  // per real dimension
    for (Complex& s : out.samples)
        s += Complex{sigma * rng.normal(), sigma * rng.normal()};
    return out;
}

struct LinkBudget {
    double tx_power_dbm = 0.0;
    double tx_gain_dbi = 22.4;      // horn; patch is 8 dBi
    double rx_gain_dbi = 22.4;
    double noise_figure_db = 6.0;   // referenced at the antenna
    double bandwidth_hz = 2e9;
    double bit_rate_bps = 875e6;
    double temperature_k = 290.0;
};

// Horn and patch antennas used on the bench; HPBW is recorded metadata
// only, directivity enters as scalar gain.
inline constexpr double kHornGainDbi = 22.4;
inline constexpr double kHornHpbwDeg = 12.0;
inline constexpr double kPatchGainDbi = 8.0;
inline constexpr double kPatchHpbwDeg = 30.0;

inline double thermal_noise_density_dbm_hz(double temperature_k)
{
    return 10.0 * std::log10(kBoltzmann * temperature_k * 1000.0);
}

// Eb/N0 = Ptx + Gtx + Grx - PL(d) - (N0_thermal + NF) - 10 log10(Rb).
// Shadowing is excluded; the mean path loss drives the budget.
inline double link_budget_ebn0_db(const LinkBudget& budget, const PathLossModel& model, double d_m)
{
    const double pl = path_loss_mean_db(model, d_m);
    const double noise_density = thermal_noise_density_dbm_hz(budget.temperature_k) +
                                 budget.noise_figure_db;
    return budget.tx_power_dbm + budget.tx_gain_dbi + budget.rx_gain_dbi - pl -
           noise_density - 10.0 * std::log10(budget.bit_rate_bps);
}

} // namespace mmwlink::channel
