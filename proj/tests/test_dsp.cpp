#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "repac/dsp.hpp"
#include "repac/fft.hpp"
#include "repac/rng.hpp"

using repac::Band;
using repac::cplx;
using repac::Rng;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<double> tone(double freq, double fs, std::size_t n, double phase0 = 0.0) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = std::cos(2.0 * kPi * freq * static_cast<double>(i) / fs + phase0);
    return x;
}

double rms(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s / static_cast<double>(x.size()));
}

// Magnitude response of an FIR filter at frequency f.
double fir_gain(const std::vector<double>& taps, double f, double fs) {
    cplx acc{0.0, 0.0};
    for (std::size_t k = 0; k < taps.size(); ++k) {
        const double a = -2.0 * kPi * f * static_cast<double>(k) / fs;
        acc += taps[k] * cplx{std::cos(a), std::sin(a)};
    }
    return std::abs(acc);
}

}  // namespace

TEST_CASE("analytic signal of a pure tone has unit envelope and verbatim real part") {
    const double fs = 1000.0;
    const std::size_t n = 4000;
    const std::vector<double> x = tone(17.0, fs, n);
    const std::vector<cplx> z = repac::analytic_signal(x);
    REQUIRE(z.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(z[i].real() == x[i]);  // copied, not recomputed
    // Mid-record envelope: |z| == 1 to high precision (edges see spectral leakage).
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i)
        CHECK(std::abs(std::abs(z[i]) - 1.0) < 1e-6);
}

TEST_CASE("analytic signal quadrature matches the shifted tone") {
    const double fs = 1000.0;
    const std::size_t n = 4096;  // integer number of cycles -> near-exact Hilbert
    const std::vector<double> x = tone(16.0 * fs / static_cast<double>(n), fs, n);
    const std::vector<cplx> z = repac::analytic_signal(x);
    for (std::size_t i = 0; i < n; ++i) {
        const double want =
            std::sin(2.0 * kPi * 16.0 * static_cast<double>(i) / static_cast<double>(n));
        CHECK(std::abs(z[i].imag() - want) < 1e-9);
    }
}

TEST_CASE("analytic signal rejects short or non-finite input") {
    CHECK_THROWS_AS(repac::analytic_signal(std::vector<double>(8, 0.0)), std::invalid_argument);
    std::vector<double> bad(64, 0.0);
    bad[10] = std::nan("");
    CHECK_THROWS_AS(repac::analytic_signal(bad), std::invalid_argument);
}

TEST_CASE("instantaneous phase maps the -pi branch to +pi") {
    const std::vector<cplx> z{cplx{-1.0, -0.0}, cplx{1.0, 0.0}, cplx{0.0, 1.0}};
    const std::vector<double> p = repac::instantaneous_phase(z);
    CHECK(p[0] == doctest::Approx(kPi));
    CHECK(p[0] > 0.0);
    CHECK(p[1] == doctest::Approx(0.0));
    CHECK(p[2] == doctest::Approx(kPi / 2));
}

TEST_CASE("unwrap removes 2*pi jumps") {
    // Linear ramp wrapped into (-pi, pi] must unwrap back to the ramp.
    const std::size_t n = 500;
    std::vector<double> wrapped(n);
    const double step = 0.31;
    for (std::size_t i = 0; i < n; ++i) {
        double p = std::fmod(step * static_cast<double>(i) + kPi, 2.0 * kPi);
        if (p < 0) p += 2.0 * kPi;
        wrapped[i] = p - kPi;
    }
    const std::vector<double> un = repac::unwrap_phase(wrapped);
    for (std::size_t i = 1; i < n; ++i)
        CHECK(un[i] - un[i - 1] == doctest::Approx(step).epsilon(1e-9));
}

TEST_CASE("phase slope recovers the ramp frequency exactly") {
    const double fs = 250.0;
    const double f0 = 7.25;
    std::vector<double> ph(1000);
    for (std::size_t i = 0; i < ph.size(); ++i)
        ph[i] = 2.0 * kPi * f0 * static_cast<double>(i) / fs + 0.4;
    CHECK(repac::phase_slope_hz(ph, fs) == doctest::Approx(f0).epsilon(1e-12));
    CHECK(repac::phase_slope_hz(ph, fs, 0.1) == doctest::Approx(f0).epsilon(1e-12));
}

TEST_CASE("phase slope rejects constant phase and short input") {
    CHECK_THROWS_AS(repac::phase_slope_hz(std::vector<double>(100, 1.0), 100.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(repac::phase_slope_hz(std::vector<double>(8, 0.0), 100.0),
                    std::invalid_argument);
}

TEST_CASE("bandpass design: odd symmetric taps, unity passband, 40 dB stopband") {
    const double fs = 1000.0;
    const Band band{8.0, 12.0};
    const double transition = 2.0;
    const std::vector<double> taps = repac::design_bandpass(band, fs, transition);
    CHECK(taps.size() % 2 == 1);
    for (std::size_t k = 0; k < taps.size(); ++k)
        CHECK(taps[k] == doctest::Approx(taps[taps.size() - 1 - k]));  // linear phase
    CHECK(fir_gain(taps, 10.0, fs) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(fir_gain(taps, band.lo - transition, fs) < 0.01);  // -40 dB
    CHECK(fir_gain(taps, band.hi + transition, fs) < 0.01);
}

TEST_CASE("zero-phase filtering introduces no lag") {
    const double fs = 1000.0;
    const std::size_t n = 30000;
    const std::vector<double> x = tone(6.0, fs, n);
    const std::vector<double> taps = repac::design_bandpass({4.0, 8.0}, fs, 2.0);
    const std::vector<double> y = repac::filter_zero_phase(taps, x);
    REQUIRE(y.size() == n);

    // Cross-correlation over the mid-record: lag 0 must dominate all lags
    // -5..5, and the in-band tone must pass at |H|^2 ~ 1.
    double best = -1e300;
    int best_lag = 99;
    for (int lag = -5; lag <= 5; ++lag) {
        double c = 0.0;
        for (std::size_t i = n / 4; i < 3 * n / 4; ++i)
            c += y[i] * x[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + lag)];
        if (c > best) {
            best = c;
            best_lag = lag;
        }
    }
    CHECK(best_lag == 0);
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) CHECK(std::abs(y[i] - x[i]) < 0.02);
}

TEST_CASE("zero-phase filtering attenuates out-of-band content by 80 dB") {
    const double fs = 1000.0;
    const std::size_t n = 20000;
    const std::vector<double> x = tone(40.0, fs, n);  // far outside (4,8)
    const std::vector<double> taps = repac::design_bandpass({4.0, 8.0}, fs, 2.0);
    const std::vector<double> y = repac::filter_zero_phase(taps, x);
    std::vector<double> mid(y.begin() + static_cast<std::ptrdiff_t>(n / 4),
                            y.begin() + static_cast<std::ptrdiff_t>(3 * n / 4));
    CHECK(rms(mid) < 1e-4);  // |H|^2 doubles the dB attenuation
}

TEST_CASE("fused filter+analytic agrees with the two-step path mid-record") {
    const double fs = 1000.0;
    const std::size_t n = 20000;
    Rng rng(42);
    std::vector<double> x = repac::pink_noise(n, fs, 7);
    for (double& v : x) v += 0.1 * rng.gauss();
    const std::vector<double> taps = repac::design_bandpass({4.0, 8.0}, fs, 2.0);

    const std::vector<cplx> fused = repac::filter_zero_phase_analytic(taps, x);
    const std::vector<cplx> two_step =
        repac::detail::analytic_signal_padded(repac::filter_zero_phase(taps, x));
    REQUIRE(fused.size() == n);
    // Real parts are the same filtering, so they agree tightly; envelopes agree
    // to the padding-grid difference.
    double env_scale = 0.0;
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i)
        env_scale = std::max(env_scale, std::abs(two_step[i]));
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) {
        CHECK(std::abs(fused[i].real() - two_step[i].real()) < 1e-8 * std::max(1.0, env_scale));
        CHECK(std::abs(std::abs(fused[i]) - std::abs(two_step[i])) < 2e-2 * env_scale);
    }
}

TEST_CASE("ideal lowpass is idempotent and surgical") {
    const double fs = 500.0;
    const std::size_t n = 5000;
    std::vector<double> x = tone(3.0, fs, n);
    const std::vector<double> high = tone(40.0, fs, n);
    for (std::size_t i = 0; i < n; ++i) x[i] += high[i];

    const std::vector<double> once = repac::ideal_lowpass(x, 10.0, fs);
    const std::vector<double> twice = repac::ideal_lowpass(once, 10.0, fs);
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = twice[i] - once[i];
    CHECK(rms(diff) < 1e-9);  // idempotence (exact-N projection)

    // The 40 Hz component is annihilated, the 3 Hz one untouched.
    const std::vector<double> low = tone(3.0, fs, n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = once[i] - low[i];
    CHECK(rms(diff) < 1e-9);
}

TEST_CASE("padded lowpass preserves an in-band tone mid-record") {
    const double fs = 1000.0;
    const std::size_t n = 30000;  // non power of two
    const std::vector<double> x = tone(0.9, fs, n);
    const std::vector<double> y = repac::detail::ideal_lowpass_padded(x, 2.0, fs);
    REQUIRE(y.size() == n);
    // The zero-padding makes the tone leak across the brick wall, so the
    // mid-record ripple sits near 1%, not at machine precision.
    for (std::size_t i = n / 4; i < 3 * n / 4; ++i) CHECK(std::abs(y[i] - x[i]) < 2e-2);
}

TEST_CASE("pink noise: zero mean, unit variance, -10 dB/decade") {
    const double fs = 1000.0;
    const std::size_t n = 60000;
    std::vector<double> slopes;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const std::vector<double> x = repac::pink_noise(n, fs, seed);
        const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
        CHECK(std::abs(mean) < 1e-12);
        CHECK(rms(x) == doctest::Approx(1.0).epsilon(1e-9));

        const repac::PsdEstimate psd = repac::welch_psd(x, fs, 4096, 0.5);
        // OLS fit of log-power vs log-frequency over 1..100 Hz.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int cnt = 0;
        for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
            if (psd.freqs[k] < 1.0 || psd.freqs[k] > 100.0) continue;
            const double lx = std::log10(psd.freqs[k]);
            const double ly = 10.0 * std::log10(psd.power[k]);
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
            ++cnt;
        }
        slopes.push_back((cnt * sxy - sx * sy) / (cnt * sxx - sx * sx));
    }
    for (double s : slopes) CHECK(std::abs(s - (-10.0)) < 1.5);
}

TEST_CASE("pink noise is deterministic in the seed") {
    const std::vector<double> a = repac::pink_noise(5000, 1000.0, 123);
    const std::vector<double> b = repac::pink_noise(5000, 1000.0, 123);
    const std::vector<double> c = repac::pink_noise(5000, 1000.0, 124);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("welch PSD: Parseval consistency and tone localization") {
    const double fs = 1000.0;
    const std::size_t n = 100000;
    Rng rng(5);
    std::vector<double> white(n);
    for (double& v : white) v = rng.gauss();
    const repac::PsdEstimate psd = repac::welch_psd(white, fs, 2048, 0.5);
    const double df = psd.freqs[1] - psd.freqs[0];
    double total = 0.0;
    for (double p : psd.power) total += p * df;
    CHECK(total == doctest::Approx(1.0).epsilon(0.05));  // variance of white noise

    const std::vector<double> x = tone(50.0, fs, 20000);
    const repac::PsdEstimate tpsd = repac::welch_psd(x, fs, 4096, 0.5);
    std::size_t peak = 0;
    for (std::size_t k = 1; k < tpsd.power.size(); ++k)
        if (tpsd.power[k] > tpsd.power[peak]) peak = k;
    CHECK(std::abs(tpsd.freqs[peak] - 50.0) < 0.3);
}

TEST_CASE("hann window uses the periodic convention") {
    const std::vector<double> w = repac::detail::hann_window(8);
    REQUIRE(w.size() == 8);
    for (std::size_t k = 0; k < 8; ++k)
        CHECK(w[k] == doctest::Approx(0.5 * (1.0 - std::cos(2.0 * kPi * k / 8.0))));
}
