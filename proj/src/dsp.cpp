#include "repac/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "repac/fft.hpp"
#include "repac/rng.hpp"

namespace repac {

namespace {

constexpr double kPi = 3.14159265358979323846264338328;
constexpr double kTwoPi = 2.0 * kPi;

void require_finite(const std::vector<double>& x, const char* op) {
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(op) + ": non-finite input");
}

double sinc(double t) {
    if (std::abs(t) < 1e-12) return 1.0;
    return std::sin(kPi * t) / (kPi * t);
}

}  // namespace

namespace detail {

std::vector<double> hann_window(std::size_t len) {
    std::vector<double> w(len);
    for (std::size_t k = 0; k < len; ++k)
        w[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(len)));
    return w;
}

std::vector<cplx> analytic_core(const std::vector<double>& x, std::size_t n_fft) {
    std::vector<cplx> v = fft::forward_real(x, n_fft);
    // Double positive bins, zero negative bins, keep DC (and Nyquist when even).
    if (n_fft % 2 == 0) {
        const std::size_t ny = n_fft / 2;
        for (std::size_t k = 1; k < ny; ++k) v[k] *= 2.0;
        for (std::size_t k = ny + 1; k < n_fft; ++k) v[k] = cplx(0.0, 0.0);
    } else {
        const std::size_t top = (n_fft + 1) / 2;  // positive bins are 1..top-1
        for (std::size_t k = 1; k < top; ++k) v[k] *= 2.0;
        for (std::size_t k = top; k < n_fft; ++k) v[k] = cplx(0.0, 0.0);
    }
    fft::inverse(v);
    v.resize(x.size());
    return v;
}

std::vector<cplx> analytic_signal_padded(const std::vector<double>& x) {
    return analytic_core(x, fft::next_pow2(std::max<std::size_t>(x.size(), 2)));
}

std::vector<double> ideal_lowpass_padded(const std::vector<double>& x, double fc, double fs) {
    if (x.empty()) throw std::invalid_argument("ideal_lowpass: empty input");
    if (!(fc > 0.0 && fc < fs / 2.0))
        throw std::invalid_argument("ideal_lowpass: cutoff out of range");
    const std::size_t n = x.size();
    const std::size_t m = fft::next_pow2(n);
    std::vector<cplx> X = fft::forward_real(x, m);
    for (std::size_t k = 1; k < m; ++k) {
        const std::size_t kk = (k <= m / 2) ? k : m - k;
        const double f = static_cast<double>(kk) * fs / static_cast<double>(m);
        if (f > fc) X[k] = cplx(0.0, 0.0);
    }
    fft::inverse(X);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = X[i].real();
    return y;
}

}  // namespace detail

std::vector<cplx> analytic_signal(const std::vector<double>& x) {
    if (x.size() < 16) throw std::invalid_argument("analytic_signal: signal too short");
    require_finite(x, "analytic_signal");
    std::vector<cplx> v = detail::analytic_core(x, x.size());
    for (std::size_t i = 0; i < x.size(); ++i) v[i] = cplx(x[i], v[i].imag());
    return v;
}

std::vector<double> instantaneous_amplitude(const std::vector<cplx>& a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::abs(a[i]);
    return out;
}

std::vector<double> instantaneous_phase(const std::vector<cplx>& a) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double p = std::atan2(a[i].imag(), a[i].real());
        if (p <= -kPi) p = kPi;  // map -pi to +pi so the range is (-pi, pi]
        out[i] = p;
    }
    return out;
}

std::vector<double> unwrap_phase(const std::vector<double>& wrapped) {
    std::vector<double> out(wrapped.size());
    if (wrapped.empty()) return out;
    out[0] = wrapped[0];
    double offset = 0.0;
    for (std::size_t i = 1; i < wrapped.size(); ++i) {
        double d = wrapped[i] - wrapped[i - 1];
        while (d > kPi) {
            d -= kTwoPi;
            offset -= kTwoPi;
        }
        while (d <= -kPi) {
            d += kTwoPi;
            offset += kTwoPi;
        }
        out[i] = wrapped[i] + offset;
    }
    return out;
}

double phase_slope_hz(const std::vector<double>& unwrapped, double fs, double edge_margin) {
    if (unwrapped.size() < 32) throw std::invalid_argument("phase_slope_hz: record too short");
    if (!(edge_margin >= 0.0 && edge_margin < 0.5))
        throw std::invalid_argument("phase_slope_hz: bad edge margin");
    const std::size_t n = unwrapped.size();
    const std::size_t skip = static_cast<std::size_t>(edge_margin * static_cast<double>(n));
    const std::size_t a = skip, b = n - skip;
    const std::size_t m = b - a;
    double xbar = (static_cast<double>(m) - 1.0) / 2.0;
    double ybar = 0.0;
    for (std::size_t i = a; i < b; ++i) ybar += unwrapped[i];
    ybar /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = a; i < b; ++i) {
        const double dx = static_cast<double>(i - a) - xbar;
        sxy += dx * (unwrapped[i] - ybar);
        sxx += dx * dx;
    }
    double ymin = unwrapped[a], ymax = unwrapped[a];
    for (std::size_t i = a; i < b; ++i) {
        ymin = std::min(ymin, unwrapped[i]);
        ymax = std::max(ymax, unwrapped[i]);
    }
    if (ymax - ymin == 0.0)
        throw std::invalid_argument("phase_slope_hz: constant phase (non-oscillatory input)");
    return (sxy / sxx) * fs / kTwoPi;
}

std::vector<double> design_bandpass(Band band, double fs, double transition_hz) {
    if (!(band.lo >= 0.0 && band.lo < band.hi && band.hi < fs / 2.0))
        throw std::invalid_argument("design_bandpass: band invalid for sampling rate");
    if (!(transition_hz > 0.0)) throw std::invalid_argument("design_bandpass: bad transition width");
    std::size_t taps = static_cast<std::size_t>(std::ceil(3.3 * fs / transition_hz));
    if (taps % 2 == 0) ++taps;
    if (taps < 5) taps = 5;
    const std::size_t mid = taps / 2;
    const double f1 = band.lo / fs, f2 = band.hi / fs;
    std::vector<double> h(taps);
    for (std::size_t k = 0; k < taps; ++k) {
        const double t = static_cast<double>(k) - static_cast<double>(mid);
        const double ideal = 2.0 * f2 * sinc(2.0 * f2 * t) - 2.0 * f1 * sinc(2.0 * f1 * t);
        const double w =
            0.54 - 0.46 * std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(taps - 1));
        h[k] = ideal * w;
    }
    return h;
}

std::vector<double> filter_zero_phase(const std::vector<double>& coeffs,
                                      const std::vector<double>& x) {
    if (coeffs.empty() || x.empty())
        throw std::invalid_argument("filter_zero_phase: empty input");
    if (coeffs.size() > x.size() / 3)
        throw std::invalid_argument("filter_zero_phase: filter longer than len(x)/3");
    const std::size_t n = x.size();
    const std::size_t t = coeffs.size();
    const std::size_t m = fft::next_pow2(n + 2 * t - 2);
    std::vector<cplx> X = fft::forward_real(x, m);
    std::vector<cplx> H = fft::forward_real(coeffs, m);
    // |H|^2 is real and nonnegative, i.e. an exactly zero-phase response; the
    // forward-backward kernel is centered at lag 0, so no trim offset applies.
    for (std::size_t k = 0; k < m; ++k) X[k] *= std::norm(H[k]);
    fft::inverse(X);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = X[i].real();
    return y;
}

std::vector<cplx> filter_zero_phase_analytic(const std::vector<double>& coeffs,
                                             const std::vector<double>& x) {
    if (coeffs.empty() || x.empty())
        throw std::invalid_argument("filter_zero_phase: empty input");
    if (coeffs.size() > x.size() / 3)
        throw std::invalid_argument("filter_zero_phase: filter longer than len(x)/3");
    const std::size_t n = x.size();
    const std::size_t t = coeffs.size();
    const std::size_t m = fft::next_pow2(n + 2 * t - 2);
    std::vector<cplx> X = fft::forward_real(x, m);
    std::vector<cplx> H = fft::forward_real(coeffs, m);
    for (std::size_t k = 0; k < m; ++k) X[k] *= std::norm(H[k]);
    // Analytic mask on the same padded grid: keep DC and Nyquist, double the
    // positive-frequency bins, zero the negative ones (m is a power of two).
    for (std::size_t k = 1; k < m / 2; ++k) X[k] *= 2.0;
    for (std::size_t k = m / 2 + 1; k < m; ++k) X[k] = cplx(0.0, 0.0);
    fft::inverse(X);
    X.resize(n);
    return X;
}

std::vector<double> ideal_lowpass(const std::vector<double>& x, double fc, double fs) {
    if (x.empty()) throw std::invalid_argument("ideal_lowpass: empty input");
    if (!(fc > 0.0 && fc < fs / 2.0)) throw std::invalid_argument("ideal_lowpass: cutoff out of range");
    const std::size_t n = x.size();
    std::vector<cplx> X = fft::forward_real(x, n);
    for (std::size_t k = 1; k < n; ++k) {
        const double f = (k <= n / 2)
                             ? static_cast<double>(k) * fs / static_cast<double>(n)
                             : (static_cast<double>(n - k)) * fs / static_cast<double>(n);
        if (f > fc) X[k] = cplx(0.0, 0.0);
    }
    fft::inverse(X);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = X[i].real();
    return y;
}

PsdEstimate welch_psd(const std::vector<double>& x, double fs, std::size_t segment_len,
                      double overlap) {
    if (segment_len == 0 || segment_len > x.size())
        throw std::invalid_argument("welch_psd: segment longer than record");
    if (!(overlap >= 0.0 && overlap < 1.0)) throw std::invalid_argument("welch_psd: bad overlap");
    const std::size_t hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::round(static_cast<double>(segment_len) * (1.0 - overlap))));
    const std::vector<double> w = detail::hann_window(segment_len);
    double u = 0.0;
    for (double v : w) u += v * v;
    const std::size_t nbins = segment_len / 2 + 1;
    PsdEstimate psd;
    psd.freqs.resize(nbins);
    psd.power.assign(nbins, 0.0);
    for (std::size_t k = 0; k < nbins; ++k)
        psd.freqs[k] = static_cast<double>(k) * fs / static_cast<double>(segment_len);
    std::size_t count = 0;
    std::vector<double> seg(segment_len);
    for (std::size_t start = 0; start + segment_len <= x.size(); start += hop) {
        for (std::size_t i = 0; i < segment_len; ++i) seg[i] = x[start + i] * w[i];
        std::vector<cplx> S = fft::forward_real(seg, segment_len);
        for (std::size_t k = 0; k < nbins; ++k) {
            double p = std::norm(S[k]) / (fs * u);
            if (k != 0 && !(segment_len % 2 == 0 && k == nbins - 1)) p *= 2.0;
            psd.power[k] += p;
        }
        ++count;
    }
    for (double& p : psd.power) p /= static_cast<double>(count);
    return psd;
}

std::vector<double> pink_noise(std::size_t n, double fs, std::uint64_t seed) {
    if (n < 256) throw std::invalid_argument("pink_noise: record too short");
    const std::size_t p = fft::next_pow2(n);
    std::vector<cplx> spec(p, cplx(0.0, 0.0));
    Rng rng(seed);
    const std::size_t half = p / 2;
    for (std::size_t k = 1; k <= half; ++k) {
        const double f = static_cast<double>(k) * fs / static_cast<double>(p);
        const double amp = 1.0 / std::sqrt(f);
        if (k == half) {
            spec[k] = cplx(rng.gauss() * amp, 0.0);
        } else {
            const cplx v(rng.gauss() * amp, rng.gauss() * amp);
            spec[k] = v;
            spec[p - k] = std::conj(v);
        }
    }
    fft::inverse(spec);
    std::vector<double> y(n);
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = spec[i].real();
        mean += y[i];
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : y) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    const double s = 1.0 / std::sqrt(var);
    for (double& v : y) v = (v - mean) * s;
    return y;
}

}  // namespace repac
