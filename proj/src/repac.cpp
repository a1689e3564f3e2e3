#include "repac/repac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "repac/fft.hpp"
#include "repac/kernels.hpp"

namespace repac {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double median_of(std::vector<double> v) {
    const std::size_t n = v.size();
    if (n == 0) throw std::invalid_argument("median: empty input");
    const std::size_t mid = n / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double hi = v[mid];
    if (n % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

std::vector<double> hann_symmetric(std::size_t n) {
    std::vector<double> w(n, 1.0);
    if (n < 2) return w;
    for (std::size_t k = 0; k < n; ++k)
        w[k] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(n - 1)));
    return w;
}

// Contrast of the demodulated power: mean of the top 2% of samples over the
// median. Zero when the median is nonpositive.
double demod_contrast(const std::vector<double>& s1) {
    const double med = median_of(s1);
    if (med <= 0.0) return 0.0;
    const std::size_t k =
        std::max<std::size_t>(1, static_cast<std::size_t>(0.02 * static_cast<double>(s1.size())));
    std::vector<double> v = s1;
    std::nth_element(v.begin(), v.end() - static_cast<std::ptrdiff_t>(k), v.end());
    double top = 0.0;
    for (std::size_t i = v.size() - k; i < v.size(); ++i) top += v[i];
    return top / static_cast<double>(k) / med;
}

// Widen the filter transition when the nominal width would produce a filter
// longer than len/3 (only short records are affected).
double fit_transition(double transition_hz, double fs, std::size_t len) {
    auto taps_for = [&](double tr) {
        std::size_t t = static_cast<std::size_t>(std::ceil(3.3 * fs / tr));
        if (t % 2 == 0) ++t;
        return std::max<std::size_t>(t, 5);
    };
    if (taps_for(transition_hz) * 3 <= len) return transition_hz;
    std::size_t target = len / 3;
    if (target >= 3) target -= 2;
    if (target % 2 == 0 && target > 5) --target;
    if (target < 5) target = 5;
    double tr = 3.3 * fs / static_cast<double>(target) * (1.0 + 1e-9);
    while (taps_for(tr) * 3 > len) tr *= 1.01;
    return tr;
}

std::vector<cplx> pipeline_band_analytic(const std::vector<double>& x, double fs,
                                         const Band& band, double transition_hz) {
    const double tr = fit_transition(transition_hz, fs, x.size());
    return filter_zero_phase_analytic(design_bandpass(band, fs, tr), x);
}

struct CombOutcome {
    CombResult result;
    bool gate_ok = true;
};

CombOutcome comb_analysis_impl(const std::vector<double>& x, double fs,
                               const std::vector<Interval>& intervals, double f_l_hat,
                               const Band& candidate_hfo, CombPick pick, double gate_db,
                               int comb_side_peaks) {
    if (intervals.empty()) throw std::invalid_argument("comb_analysis: no intervals");
    if (!(candidate_hfo.lo >= 0.0 && candidate_hfo.lo < candidate_hfo.hi &&
          candidate_hfo.hi < fs / 2.0))
        throw std::invalid_argument("comb_analysis: candidate band invalid");
    if (!(f_l_hat > 0.0)) throw std::invalid_argument("comb_analysis: f_l_hat must be positive");
    if (comb_side_peaks < 1) throw std::invalid_argument("comb_analysis: comb_side_peaks < 1");

    std::size_t max_len = 0;
    for (const auto& [a, b] : intervals) {
        if (b <= a || b > x.size())
            throw std::invalid_argument("comb_analysis: interval out of range");
        max_len = std::max(max_len, b - a);
    }
    if (max_len < 4) throw std::invalid_argument("comb_analysis: segments too short");

    // Averaged per-segment Hann periodogram, zero-padded to a common length.
    // The Matched pick uses a 4x finer grid so comb lines resolve cleanly.
    const std::size_t base = fft::next_pow2(max_len);
    const std::size_t nfft = (pick == CombPick::Matched) ? 4 * base : base;
    const std::size_t nbins = nfft / 2 + 1;
    const double df = fs / static_cast<double>(nfft);
    std::vector<double> acc(nbins, 0.0);
    const double inv_count = 1.0 / static_cast<double>(intervals.size());
    std::vector<double> seg;
    for (const auto& [a, b] : intervals) {
        const std::size_t len = b - a;
        const std::vector<double> w = hann_symmetric(len);
        seg.assign(x.begin() + static_cast<std::ptrdiff_t>(a),
                   x.begin() + static_cast<std::ptrdiff_t>(b));
        for (std::size_t i = 0; i < len; ++i) seg[i] *= w[i];
        const std::vector<cplx> S = fft::forward_real(seg, nfft);
        for (std::size_t k = 0; k < nbins; ++k) acc[k] += std::norm(S[k]) * inv_count;
    }

    // Candidate-band bin range [i0, i1], inclusive.
    std::size_t i0 = 0;
    while (i0 < nbins && static_cast<double>(i0) * df < candidate_hfo.lo) ++i0;
    std::size_t i1 = i0;
    while (i1 < nbins && static_cast<double>(i1) * df < candidate_hfo.hi) ++i1;
    if (i1 >= nbins) i1 = nbins - 1;
    if (i0 >= nbins || i0 > i1) throw std::invalid_argument("comb_analysis: empty candidate band");

    CombOutcome out;
    out.result.segment_psd.freqs.resize(nbins);
    for (std::size_t k = 0; k < nbins; ++k)
        out.result.segment_psd.freqs[k] = static_cast<double>(k) * df;
    out.result.segment_psd.power = acc;

    // Spectral-contrast gate on the raw averaged periodogram.
    if (gate_db > 0.0) {
        double pk = acc[i0];
        for (std::size_t k = i0; k <= i1; ++k) pk = std::max(pk, acc[k]);
        const double med = median_of(
            std::vector<double>(acc.begin() + static_cast<std::ptrdiff_t>(i0),
                                acc.begin() + static_cast<std::ptrdiff_t>(i1 + 1)));
        out.gate_ok = med > 0.0 && 10.0 * std::log10(pk / med) >= gate_db;
        if (!out.gate_ok) return out;
    }

    double fc = 0.0;
    if (pick == CombPick::Argmax) {
        std::size_t best = i0;
        for (std::size_t k = i0; k <= i1; ++k)
            if (acc[k] > acc[best]) best = k;
        fc = static_cast<double>(best) * df;
    } else {
        // Boxcar smoothing (~0.8 Hz half-width) over a running-median background
        // (half-width 2.5*f_l_hat) flattens the 1/f noise floor so comb lines
        // compete on local contrast.
        const std::size_t nk =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(0.8 / df)));
        std::vector<double> sm(nbins, 0.0);
        for (std::size_t i = 0; i < nbins; ++i) {
            double s = 0.0;
            const std::size_t lo = (i >= nk) ? i - nk : 0;
            const std::size_t hi = std::min(nbins - 1, i + nk);
            for (std::size_t j = lo; j <= hi; ++j) s += acc[j];
            sm[i] = s / static_cast<double>(2 * nk + 1);  // zero-padded edges
        }
        const std::size_t W = std::max<std::size_t>(
            3, static_cast<std::size_t>(std::llround(2.5 * f_l_hat / df)));
        std::vector<double> bg(nbins, 0.0);
        std::vector<double> win(2 * W + 1);
        for (std::size_t i = 0; i < nbins; ++i) {
            for (std::size_t j = 0; j < 2 * W + 1; ++j) {
                const std::ptrdiff_t idx = static_cast<std::ptrdiff_t>(i + j) -
                                           static_cast<std::ptrdiff_t>(W);
                const std::size_t c = static_cast<std::size_t>(
                    std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(nbins - 1)));
                win[j] = acc[c];
            }
            std::nth_element(win.begin(), win.begin() + static_cast<std::ptrdiff_t>(W), win.end());
            bg[i] = win[W];
        }
        std::vector<double> nrm(nbins);
        for (std::size_t i = 0; i < nbins; ++i) nrm[i] = sm[i] / std::max(bg[i], 1e-300);

        const auto nat = [&](double fr) {
            const auto i = static_cast<std::ptrdiff_t>(std::llround(fr / df));
            if (i < 0 || i >= static_cast<std::ptrdiff_t>(nbins)) return 1.0;
            return nrm[static_cast<std::size_t>(i)];
        };
        std::size_t best = i0;
        for (std::size_t k = i0; k <= i1; ++k)
            if (nrm[k] > nrm[best]) best = k;
        const double fc0 = static_cast<double>(best) * df;
        // Resolve +-f_L line flips: score each comb-aligned candidate by its
        // central line plus half the two first side lines.
        double best_score = -1.0;
        for (int k = -2; k <= 2; ++k) {
            const double c = fc0 + static_cast<double>(k) * f_l_hat;
            if (c < candidate_hfo.lo || c > candidate_hfo.hi) continue;
            const double score = nat(c) + 0.5 * (nat(c - f_l_hat) + nat(c + f_l_hat));
            if (score > best_score) {
                best_score = score;
                fc = c;
            }
        }
    }

    out.result.f_h_hat_initial = fc;
    const double half = static_cast<double>(comb_side_peaks) * f_l_hat;
    out.result.refined_hfo = Band{fc - half, fc + half};
    return out;
}

}  // namespace

std::vector<Band> RepacConfig::default_lfo_grid() {
    std::vector<Band> bands;
    for (int lo = 2; lo <= 13; ++lo)
        bands.push_back(Band{static_cast<double>(lo), static_cast<double>(lo + 2)});
    return bands;
}

RepacConfig RepacConfig::defaults() {
    RepacConfig cfg;
    cfg.candidate_lfo_bands = default_lfo_grid();
    return cfg;
}

RepacConfig RepacConfig::bench_profile() {
    RepacConfig cfg = defaults();
    cfg.band_select_mode = BandSelectMode::Demod;
    cfg.comb_pick = CombPick::Matched;
    cfg.demod_cutoff = 0.5;
    cfg.candidate_hfo_band = Band{60.0, 100.0};
    cfg.comb_gate_db = 0.0;
    return cfg;
}

void RepacConfig::validate(double fs) const {
    if (candidate_lfo_bands.size() < 3)
        throw std::invalid_argument("config: need at least 3 candidate LFO bands");
    for (const Band& b : candidate_lfo_bands)
        if (!(b.lo >= 0.0 && b.lo < b.hi && b.hi < fs / 2.0))
            throw std::invalid_argument("config: candidate LFO band invalid");
    if (!(candidate_hfo_band.lo >= 0.0 && candidate_hfo_band.lo < candidate_hfo_band.hi &&
          candidate_hfo_band.hi < fs / 2.0))
        throw std::invalid_argument("config: candidate HFO band invalid");
    if (has_set.empty()) throw std::invalid_argument("config: has_set empty");
    for (double h : has_set)
        if (!(h > 0.0 && h <= 100.0)) throw std::invalid_argument("config: has value outside (0,100]");
    if (!(demod_cutoff > 0.0 && demod_cutoff < fs / 2.0))
        throw std::invalid_argument("config: demod_cutoff out of range");
    if (!(threshold_coeff > 0.0 && threshold_coeff < 1.0))
        throw std::invalid_argument("config: threshold_coeff outside (0,1)");
    if (!(activity_epsilon > 0.0 && activity_epsilon < 1.0))
        throw std::invalid_argument("config: activity_epsilon outside (0,1)");
    if (comb_side_peaks < 1) throw std::invalid_argument("config: comb_side_peaks < 1");
    if (!(detect_median_lo >= 0.0 && detect_median_hi >= detect_median_lo))
        throw std::invalid_argument("config: detection thresholds inconsistent");
}

RefinedLfo refine_lfo_band(const MvlProfile& profile, double threshold_coeff) {
    const std::size_t k = profile.values.size();
    if (k < 3 || profile.bands.size() != k)
        throw std::invalid_argument("refine_lfo_band: profile needs K >= 3 bands");
    double vmax = profile.values[0], vmin = profile.values[0];
    std::size_t argmax = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (profile.values[i] > vmax) {
            vmax = profile.values[i];
            argmax = i;
        }
        vmin = std::min(vmin, profile.values[i]);
    }
    RefinedLfo out;
    if (vmax - vmin == 0.0) {
        out.band = profile.bands[argmax];
        out.low_confidence = true;
        out.members = {argmax};
        return out;
    }
    const double th = vmax - threshold_coeff * (vmax - vmin);
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (std::size_t i = 0; i < k; ++i) {
        if (profile.values[i] >= th) {
            out.members.push_back(i);
            if (first) {
                lo = profile.bands[i].lo;
                hi = profile.bands[i].hi;
                first = false;
            } else {
                lo = std::min(lo, profile.bands[i].lo);
                hi = std::max(hi, profile.bands[i].hi);
            }
        }
    }
    out.band = Band{lo, hi};
    return out;
}

double estimate_lfo_frequency(const std::vector<double>& s_lfo, double fs) {
    return phase_slope_hz(unwrap_phase(instantaneous_phase(analytic_signal(s_lfo))), fs);
}

std::vector<double> demodulate_lfo(const std::vector<double>& s_lfo, double cutoff, double fs) {
    std::vector<double> p(s_lfo.size());
    for (std::size_t i = 0; i < s_lfo.size(); ++i) p[i] = s_lfo[i] * s_lfo[i];
    std::vector<double> s1 = detail::ideal_lowpass_padded(p, cutoff, fs);
    for (double& v : s1) v = std::max(v, 0.0);
    return s1;
}

std::vector<Interval> detect_pac_periods(const std::vector<double>& s1, double fs,
                                         double f_l_hat, double epsilon, double median_lo,
                                         double median_hi) {
    if (s1.empty()) return {};
    if (!(f_l_hat > 0.0)) throw std::invalid_argument("detect_pac_periods: f_l_hat must be positive");
    for (double v : s1)
        if (!(v >= 0.0)) throw std::invalid_argument("detect_pac_periods: s1 must be nonnegative");
    const double mx = *std::max_element(s1.begin(), s1.end());
    if (mx <= 0.0) return {};
    const double med = median_of(s1);
    const double th_lo = std::max(epsilon * mx, median_lo * med);
    const double th_hi = std::max(epsilon * mx, median_hi * med);

    std::vector<Interval> regions;
    const std::size_t n = s1.size();
    std::size_t i = 0;
    while (i < n) {
        if (s1[i] > th_lo) {
            std::size_t j = i;
            double peak = 0.0;
            while (j < n && s1[j] > th_lo) {
                peak = std::max(peak, s1[j]);
                ++j;
            }
            if (peak >= th_hi) regions.emplace_back(i, j);
            i = j;
        } else {
            ++i;
        }
    }
    std::vector<Interval> merged;
    const double gap = 0.1 * fs;
    for (const auto& r : regions) {
        if (!merged.empty() && static_cast<double>(r.first - merged.back().second) < gap)
            merged.back().second = r.second;
        else
            merged.push_back(r);
    }
    const double min_len = 2.0 * fs / f_l_hat;
    std::vector<Interval> out;
    for (const auto& r : merged)
        if (static_cast<double>(r.second - r.first) >= min_len) out.push_back(r);
    return out;
}

CombResult comb_analysis(const std::vector<double>& x, double fs,
                         const std::vector<Interval>& intervals, double f_l_hat,
                         const Band& candidate_hfo, CombPick pick, double gate_db,
                         int comb_side_peaks) {
    CombOutcome out =
        comb_analysis_impl(x, fs, intervals, f_l_hat, candidate_hfo, pick, gate_db, comb_side_peaks);
    if (!out.gate_ok) throw std::runtime_error("no HFO component");
    return out.result;
}

RepacResult run_repac(const std::vector<double>& x, double fs, const RepacConfig& cfg) {
    if (!(fs > 0.0)) throw std::invalid_argument("run_repac: fs must be positive");
    cfg.validate(fs);
    const std::size_t n = x.size();
    if (static_cast<double>(n) / fs < 4.0)
        throw std::invalid_argument("run_repac: record shorter than 4 s");

    RepacResult res;

    // HFO-candidate envelope shared by every profile band.
    const std::vector<double> amp = instantaneous_amplitude(
        pipeline_band_analytic(x, fs, cfg.candidate_hfo_band, 10.0));

    // One zero-phase pass per candidate band: the analytic phase feeds the MVL
    // profile; in Demod mode the demodulated power contrast scores the band.
    const std::size_t nb = cfg.candidate_lfo_bands.size();
    res.profile.bands = cfg.candidate_lfo_bands;
    res.profile.has_set = cfg.has_set;
    res.profile.values.assign(nb, 0.0);
    std::vector<double> contrast(nb, 0.0);
    const bool demod_mode = cfg.band_select_mode == BandSelectMode::Demod;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t bi = 0; bi < static_cast<std::int64_t>(nb); ++bi) {
        const auto k = static_cast<std::size_t>(bi);
        const std::vector<cplx> z =
            pipeline_band_analytic(x, fs, cfg.candidate_lfo_bands[k], 2.0);
        res.profile.values[k] = mvl_has_avg(amp, instantaneous_phase(z), cfg.has_set);
        if (demod_mode) {
            std::vector<double> re(n);
            for (std::size_t i = 0; i < n; ++i) re[i] = z[i].real();
            contrast[k] = demod_contrast(demodulate_lfo(re, cfg.demod_cutoff, fs));
        }
    }

    // Select and refine the low-frequency band.
    RefinedLfo refined;
    if (demod_mode) {
        double best = 0.0;
        std::size_t winner = nb;
        for (std::size_t k = 0; k < nb; ++k) {
            if (contrast[k] > best) {
                best = contrast[k];
                winner = k;
            }
        }
        if (winner == nb) {
            // No band shows any demodulated activity (all-flat input).
            res.refined_lfo = refine_lfo_band(res.profile, cfg.threshold_coeff).band;
            res.status = "no PAC periods";
            return res;
        }
        refined.band = cfg.candidate_lfo_bands[winner];
        refined.members = {winner};
    } else {
        refined = refine_lfo_band(res.profile, cfg.threshold_coeff);
    }
    res.refined_lfo = refined.band;
    res.lfo_low_confidence = refined.low_confidence;

    const std::vector<cplx> z = pipeline_band_analytic(x, fs, refined.band, 2.0);
    const std::vector<double> phase_lfo = instantaneous_phase(z);
    double f_l = phase_slope_hz(unwrap_phase(phase_lfo), fs);
    if (!(f_l >= 0.5 && f_l <= 30.0)) f_l = 0.5 * (refined.band.lo + refined.band.hi);
    res.f_l_hat = f_l;

    std::vector<double> s_lfo(n);
    for (std::size_t i = 0; i < n; ++i) s_lfo[i] = z[i].real();
    const std::vector<double> s1 = demodulate_lfo(s_lfo, cfg.demod_cutoff, fs);
    const std::vector<Interval> intervals = detect_pac_periods(
        s1, fs, f_l, cfg.activity_epsilon, cfg.detect_median_lo, cfg.detect_median_hi);
    if (intervals.empty()) {
        res.status = "no PAC periods";
        return res;
    }

    const CombOutcome comb = comb_analysis_impl(x, fs, intervals, f_l, cfg.candidate_hfo_band,
                                                cfg.comb_pick, cfg.comb_gate_db,
                                                cfg.comb_side_peaks);
    res.segment_psd = comb.result.segment_psd;
    if (!comb.gate_ok) {
        res.status = "no HFO component";
        return res;
    }
    res.f_h_hat_initial = comb.result.f_h_hat_initial;
    res.refined_hfo = comb.result.refined_hfo;

    // Refined-band filtering, final frequency estimate, final coupling score.
    const Band filt{std::max(res.refined_hfo.lo, 1.0), std::min(res.refined_hfo.hi, 0.999 * fs / 2.0)};
    if (!(filt.lo < filt.hi)) {
        res.status = "no HFO component";
        return res;
    }
    const std::vector<cplx> zh = pipeline_band_analytic(x, fs, filt, 10.0);

    double num = 0.0, den = 0.0;
    for (const auto& [a, b] : intervals) {
        const std::size_t len = b - a;
        if (len < 64) continue;
        const std::vector<cplx> seg(zh.begin() + static_cast<std::ptrdiff_t>(a),
                                    zh.begin() + static_cast<std::ptrdiff_t>(b));
        const double f = phase_slope_hz(unwrap_phase(instantaneous_phase(seg)), fs, 0.1);
        num += f * static_cast<double>(len);
        den += static_cast<double>(len);
    }
    res.f_h_hat = den > 0.0 ? num / den : 0.0;

    std::vector<double> amp_sel, ph_sel;
    for (const auto& [a, b] : intervals) {
        for (std::size_t i = a; i < b; ++i) {
            amp_sel.push_back(std::abs(zh[i]));
            ph_sel.push_back(phase_lfo[i]);
        }
    }
    res.final_mvl = mvl(amp_sel, ph_sel, 100.0);
    res.pac_intervals = intervals;
    res.status = "ok";
    return res;
}

}  // namespace repac
