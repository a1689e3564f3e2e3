#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace repac {

using cplx = std::complex<double>;

struct Band {
    double lo = 0.0;
    double hi = 0.0;
};

struct PsdEstimate {
    std::vector<double> freqs;  // Hz, ascending uniform grid over [0, fs/2]
    std::vector<double> power;  // nonnegative, same length
};

// FFT-based analytic signal (negative-frequency bins zeroed, positive doubled,
// DC/Nyquist kept). Transform length equals the record length exactly, so the
// operation is its own inverse-consistent projection. The real part of the
// result is the input, copied verbatim. Requires len >= 16 and finite input.
std::vector<cplx> analytic_signal(const std::vector<double>& x);

std::vector<double> instantaneous_amplitude(const std::vector<cplx>& a);
// Wrapped to (-pi, pi].
std::vector<double> instantaneous_phase(const std::vector<cplx>& a);

// Consecutive differences of the result all lie in (-pi, pi]; result is
// congruent to the input mod 2*pi.
std::vector<double> unwrap_phase(const std::vector<double>& wrapped);

// Ordinary least-squares slope of an unwrapped phase ramp, converted to Hz.
// A fraction `edge_margin` of samples is excluded from each end of the fit.
// Requires len >= 32; throws if the phase is constant (non-oscillatory).
double phase_slope_hz(const std::vector<double>& unwrapped, double fs,
                      double edge_margin = 0.05);

// Linear-phase windowed-sinc (Hamming) bandpass. Tap count scales with
// fs/transition and is forced odd. Passband ripple < 1 dB; stopband
// attenuation >= 40 dB one transition width beyond the band edges.
std::vector<double> design_bandpass(Band band, double fs, double transition_hz);

// Forward-backward application of an FIR filter (zero net phase), evaluated
// exactly via FFT convolution with the filter's autocorrelation; output is
// time-aligned with the input ("same" trimming). Filter must be shorter than
// len(x)/3.
std::vector<double> filter_zero_phase(const std::vector<double>& coeffs,
                                      const std::vector<double>& x);

// FFT brick-wall lowpass at the exact record length: bins strictly above fc
// are zeroed conjugate-symmetrically; DC is preserved. Idempotent.
std::vector<double> ideal_lowpass(const std::vector<double>& x, double fc, double fs);

// Zero-phase bandpass and analytic signal fused on one padded FFT grid: the
// |H|^2 response and the analytic mask are applied in a single transform.
// This is the detection pipeline's workhorse; it agrees with
// analytic_signal(filter_zero_phase(...)) mid-record to filter precision.
std::vector<cplx> filter_zero_phase_analytic(const std::vector<double>& coeffs,
                                             const std::vector<double>& x);

// Hann-windowed averaged periodogram (one-sided density). Parseval-consistent:
// sum(power)*df approximates the variance of zero-mean noise.
PsdEstimate welch_psd(const std::vector<double>& x, double fs,
                      std::size_t segment_len, double overlap);

// Deterministic unit-variance pink noise: white Gaussian spectrum shaped by
// 1/sqrt(f), DC zeroed, synthesized on a power-of-two grid and truncated to n.
std::vector<double> pink_noise(std::size_t n, double fs, std::uint64_t seed);

namespace detail {
// Hann window, w[k] = 0.5*(1 - cos(2*pi*k/len)) (periodic form).
std::vector<double> hann_window(std::size_t len);
// Analytic signal computed on a zero-padded power-of-two grid and truncated
// back; pipeline fast path (agrees with analytic_signal to ~1e-4 envelope).
std::vector<cplx> analytic_signal_padded(const std::vector<double>& x);
// Brick-wall lowpass on a zero-padded power-of-two grid, head-truncated back
// to n; pipeline fast path used by the AM demodulation stage.
std::vector<double> ideal_lowpass_padded(const std::vector<double>& x, double fc, double fs);
}  // namespace detail

}  // namespace repac
