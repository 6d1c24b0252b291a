#include <catch2/catch.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmwlink/channel.hpp"
#include "mmwlink/modem.hpp"
#include "mmwlink/rng.hpp"
#include "mmwlink/stats.hpp"

using namespace mmwlink;
using namespace mmwlink::channel;

namespace {

// Kolmogorov-Smirnov distance against a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> xs, Cdf cdf)
{
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, std::abs((i + 1) / n - f));
        d = std::max(d, std::abs(i / n - f));
    }
    return d;
}

double spearman_rho(const std::vector<double>& a, const std::vector<double>& b)
{
    const size_t n = a.size();
    auto ranks = [n](const std::vector<double>& v) {
        std::vector<size_t> idx(n);
        std::iota(idx.begin(), idx.end(), size_t{0});
        std::sort(idx.begin(), idx.end(), [&v](size_t i, size_t j) { return v[i] < v[j]; });
        std::vector<double> r(n);
        for (size_t i = 0; i < n; ++i)
            r[idx[i]] = static_cast<double>(i);
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    const double mean = (static_cast<double>(n) - 1.0) / 2.0;
    double num = 0.0, da = 0.0, db = 0.0;
    for (size_t i = 0; i < n; ++i) {
        num += (ra[i] - mean) * (rb[i] - mean);
        da += (ra[i] - mean) * (ra[i] - mean);
        db += (rb[i] - mean) * (rb[i] - mean);
    }
    return num / std::sqrt(da * db);
}

} // namespace

TEST_CASE("free_space_pl: 68 dB at 1 m / 60 GHz and 6.02 dB per doubling")
{
    CHECK(free_space_pl_db(1.0, 60e9) == Approx(68.0).margin(0.05));

    // independent wavelength form: 20 log10(4 pi d / lambda)
    const double lambda = kSpeedOfLight / 60e9;
    const double indep = 20.0 * std::log10(4.0 * std::numbers::pi * 1.0 / lambda);
    CHECK(free_space_pl_db(1.0, 60e9) == Approx(indep).margin(1e-12));

    const double six = 20.0 * std::log10(2.0);
    CHECK(free_space_pl_db(2.0, 60e9) - free_space_pl_db(1.0, 60e9) == Approx(six).margin(1e-12));
    CHECK(free_space_pl_db(3.0, 120e9) - free_space_pl_db(3.0, 60e9) == Approx(six).margin(1e-12));
    CHECK_THROWS_AS(free_space_pl_db(0.0, 60e9), std::invalid_argument);
}

TEST_CASE("path_loss: exponent slope, reference anchoring and range check")
{
    PathLossModel m;
    m.exponent = 2.0;
    Rng rng(51);
    CHECK(path_loss_db(m, 10.0, rng) == Approx(88.0).margin(0.05));
    CHECK(path_loss_db(m, m.d0_m, rng) == free_space_pl_db(m.d0_m, m.freq_hz));
    CHECK_THROWS_AS(path_loss_db(m, 0.5, rng), std::invalid_argument);

    // deterministic and strictly increasing when sigma = 0
    double prev = 0.0;
    for (double d : {1.0, 2.0, 5.0, 10.0, 20.0}) {
        const double pl = path_loss_mean_db(m, d);
        CHECK(pl > prev);
        prev = pl;
    }
}

TEST_CASE("path_loss: shadowing draws have the configured spread")
{
    PathLossModel m;
    m.sigma_db = 3.0;
    Rng rng(52);
    const int n = 100000;
    std::vector<double> draws(n);
    for (auto& d : draws)
        d = path_loss_db(m, 10.0, rng);
    const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
    double ss = 0.0;
    for (double d : draws)
        ss += (d - mean) * (d - mean);
    const double sd = std::sqrt(ss / (n - 1));
    CHECK(sd == Approx(3.0).margin(0.1));
    CHECK(mean == Approx(path_loss_mean_db(m, 10.0)).margin(0.05));
}

TEST_CASE("gen_sv_cir: realizations are normalized and sorted")
{
    Rng rng(53);
    for (int i = 0; i < 200; ++i) {
        const auto cir = gen_sv_cir(office_sv_params(), rng);
        REQUIRE(!cir.taps.empty());
        CHECK(cir.normalized);
        double power = 0.0;
        for (const auto& t : cir.taps)
            power += std::norm(t.gain);
        CHECK(std::abs(power - 1.0) < 1e-9);
        for (size_t k = 1; k < cir.taps.size(); ++k)
            CHECK(cir.taps[k].delay_ns >= cir.taps[k - 1].delay_ns);
    }
}

TEST_CASE("gen_sv_cir: single-ray clusters arrive as a Poisson process")
{
    // gamma -> 0 with one ray per cluster: inter-tap delays ~ Exp(Lambda).
    SvParams p = office_sv_params();
    p.rays_per_cluster_cap = 1;
    p.ray_decay_ns = 1e-6;
    p.avg_clusters = 6;
    Rng rng(54);
    std::vector<double> gaps;
    while (gaps.size() < 10000) {
        const auto cir = gen_sv_cir(p, rng);
        for (size_t k = 1; k < cir.taps.size(); ++k)
            gaps.push_back(cir.taps[k].delay_ns - cir.taps[k - 1].delay_ns);
    }
    const double rate = p.cluster_rate_per_ns;
    const double d = ks_distance(gaps, [rate](double x) { return 1.0 - std::exp(-rate * x); });
    // 1% critical value for the KS statistic
    CHECK(d < 1.63 / std::sqrt(static_cast<double>(gaps.size())));
}

TEST_CASE("gen_sv_cir: office spreads exceed desktop spreads")
{
    Rng rng(55);
    std::vector<double> office, desktop;
    for (int i = 0; i < 1000; ++i)
        office.push_back(rms_delay_spread_ns(gen_sv_cir(office_sv_params(), rng)));
    for (int i = 0; i < 1000; ++i)
        desktop.push_back(rms_delay_spread_ns(gen_sv_cir(desktop_sv_params(), rng)));
    const auto o = mean_ci(office);
    const auto d = mean_ci(desktop);
    INFO("office mean sigma_DS " << o.mean << " ns, desktop " << d.mean << " ns");
    CHECK(o.low > d.high);
}

TEST_CASE("gen_sv_cir: mean delay spread grows with the cluster decay factor")
{
    Rng rng(56);
    double prev = -1.0;
    for (double gamma_cluster : {5.0, 10.0, 20.0}) {
        SvParams p = office_sv_params();
        p.cluster_decay_ns = gamma_cluster;
        double sum = 0.0;
        for (int i = 0; i < 1000; ++i)
            sum += rms_delay_spread_ns(gen_sv_cir(p, rng));
        const double mean = sum / 1000.0;
        CHECK(mean > prev);
        prev = mean;
    }
}

TEST_CASE("rms_delay_spread: closed-form cases")
{
    ChannelRealization one;
    one.taps.push_back({3.0, {1.0, 0.0}});
    CHECK(rms_delay_spread_ns(one) == 0.0);

    ChannelRealization two;
    two.taps.push_back({0.0, {std::numbers::sqrt2 / 2.0, 0.0}});
    two.taps.push_back({10.0, {std::numbers::sqrt2 / 2.0, 0.0}});
    CHECK(rms_delay_spread_ns(two) == Approx(5.0).margin(1e-9));

    ChannelRealization three;
    for (double d : {0.0, 10.0, 20.0})
        three.taps.push_back({d, {1.0, 0.0}});
    CHECK(rms_delay_spread_ns(three) == Approx(std::sqrt(200.0 / 3.0)).margin(1e-9));

    CHECK_THROWS_AS(rms_delay_spread_ns(ChannelRealization{}), std::invalid_argument);
}

TEST_CASE("coherence_bandwidth: flat channel saturates the grid, two-path is closed-form")
{
    ChannelRealization one;
    one.taps.push_back({0.0, {1.0, 0.0}});
    CHECK(coherence_bandwidth_mhz(one) == 2000.0);

    // |cos(pi f 10 ns)| = 0.5 at f = 100/3 MHz
    ChannelRealization two;
    two.taps.push_back({0.0, {0.7, 0.0}});
    two.taps.push_back({10.0, {0.7, 0.0}});
    CHECK(coherence_bandwidth_mhz(two) == Approx(100.0 / 3.0).margin(1.0));
}

TEST_CASE("coherence_bandwidth: anticorrelated with delay spread across realizations")
{
    Rng rng(57);
    std::vector<double> spreads, bands;
    for (int i = 0; i < 1000; ++i) {
        const auto cir = gen_sv_cir(office_sv_params(), rng);
        spreads.push_back(rms_delay_spread_ns(cir));
        bands.push_back(coherence_bandwidth_mhz(cir, 0.5, 5.0));
    }
    CHECK(spearman_rho(spreads, bands) < 0.0);
}

TEST_CASE("apply_channel: identity, scaling, and a brute-force convolution oracle")
{
    Rng rng(58);
    modem::SampleStream x;
    x.sample_rate = 3.5e9;
    for (int i = 0; i < 100; ++i)
        x.samples.push_back({rng.normal(), rng.normal()});

    ChannelRealization ident;
    ident.taps.push_back({0.0, {1.0, 0.0}});
    const auto y_ident = apply_channel(x, ident);
    REQUIRE(y_ident.samples.size() == x.samples.size());
    for (size_t i = 0; i < x.samples.size(); ++i)
        CHECK(std::abs(y_ident.samples[i] - x.samples[i]) < 1e-12);

    ChannelRealization half;
    half.taps.push_back({0.0, {0.5, 0.0}});
    const auto y_half = apply_channel(x, half);
    for (size_t i = 0; i < x.samples.size(); ++i)
        CHECK(std::abs(y_half.samples[i] - 0.5 * x.samples[i]) < 1e-12);

    // two taps, 2-sample split at this rate
    ChannelRealization two;
    two.taps.push_back({0.0, {0.8, 0.1}});
    const double dt_ns = 2.0 / 3.5e9 * 1e9;
    two.taps.push_back({dt_ns, {-0.3, 0.4}});
    const auto y = apply_channel(x, two);
    REQUIRE(y.samples.size() == x.samples.size() + 2);
    for (size_t n = 0; n < y.samples.size(); ++n) {
        modem::Complex ref{0.0, 0.0};
        if (n < x.samples.size())
            ref += modem::Complex{0.8, 0.1} * x.samples[n];
        if (n >= 2 && n - 2 < x.samples.size())
            ref += modem::Complex{-0.3, 0.4} * x.samples[n - 2];
        CHECK(std::abs(y.samples[n] - ref) < 1e-12);
    }
}

TEST_CASE("add_awgn: zero density is the identity, moments match the target")
{
    Rng rng(59);
    modem::SampleStream x;
    x.sample_rate = 875e6;
    x.samples.assign(1'000'000, {0.0, 0.0});

    const auto clean = add_awgn(x, 0.0, rng);
    for (size_t i = 0; i < 100; ++i)
        CHECK(clean.samples[i] == modem::Complex{0.0, 0.0});

    const double n0 = noise_density_for_ebn0(10.0, 875e6);
    const auto noisy = add_awgn(x, n0, rng);
    double mean_re = 0.0, var = 0.0;
    for (const auto& s : noisy.samples) {
        mean_re += s.real();
        var += std::norm(s);
    }
    mean_re /= static_cast<double>(noisy.samples.size());
    var /= static_cast<double>(noisy.samples.size());
    const double target = n0 * x.sample_rate;
    CHECK(var == Approx(target).epsilon(0.01));
    CHECK(std::abs(mean_re) < 3.0 * std::sqrt(target / 2.0 / 1e6));
    CHECK_THROWS_AS(add_awgn(x, -1.0, rng), std::invalid_argument);
}

TEST_CASE("link budget: distance doubling and antenna swaps move Eb/N0 as forced")
{
    LinkBudget budget;
    PathLossModel model;
    const double e1 = link_budget_ebn0_db(budget, model, 5.0);
    const double e2 = link_budget_ebn0_db(budget, model, 10.0);
    CHECK(e1 - e2 == Approx(20.0 * std::log10(2.0)).margin(1e-9));

    LinkBudget patch = budget;
    patch.tx_gain_dbi = kPatchGainDbi;
    patch.rx_gain_dbi = kPatchGainDbi;
    const double drop = link_budget_ebn0_db(budget, model, 10.0) -
                        link_budget_ebn0_db(patch, model, 10.0);
    CHECK(drop == Approx(2.0 * (22.4 - 8.0)).margin(1e-9));
}

TEST_CASE("link budget: worked point against an independent recomputation")
{
    // tx 0 dBm, horns both ends, d = 10 m, n = 2, NF = 6 dB, Rb = 875 Mbps
    LinkBudget budget;
    PathLossModel model;
    const double got = link_budget_ebn0_db(budget, model, 10.0);

    const double pl = 20.0 * std::log10(4.0 * std::numbers::pi * 10.0 * 60e9 / 299792458.0);
    const double kt_dbm = 10.0 * std::log10(1.380649e-23 * 290.0) + 30.0;
    const double expected = 0.0 + 22.4 + 22.4 - pl - (kt_dbm + 6.0) - 10.0 * std::log10(875e6);
    CHECK(got == Approx(expected).margin(0.01));
    CHECK_THROWS_AS(link_budget_ebn0_db(budget, model, 0.1), std::invalid_argument);
}

TEST_CASE("channel: BER through a fixed CIR is monotone in Eb/N0")
{
    modem::ModemConfig cfg;
    cfg.oversampling = 2;

    ChannelRealization cir;
    cir.taps.push_back({0.0, {1.0, 0.0}});
    const double two_ts_ns = 2e9 / cfg.symbol_rate;
    cir.taps.push_back({two_ts_ns, std::polar(0.35, 0.7)});

    double prev = 1.0;
    for (double ebn0_db : {6.0, 9.0, 12.0}) {
        Rng rng(61);
        BitVec bits(60000);
        for (auto& b : bits)
            b = rng.coin_bit();
        auto wave = modem::transmit(bits, cfg);
        wave = apply_channel(wave, cir);
        wave = add_awgn(wave, noise_density_for_ebn0(ebn0_db, cfg.symbol_rate), rng);
        const BitVec rx = modem::slice(modem::diff_demod(wave, cfg));
        uint64_t errors = 0;
        for (size_t i = 0; i < bits.size(); ++i)
            errors += rx[i] != bits[i];
        const double ber = static_cast<double>(errors) / static_cast<double>(bits.size());
        INFO("Eb/N0 " << ebn0_db << " dB -> BER " << ber);
        CHECK(ber <= prev);
        prev = ber;
    }
}
