#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "repac/dsp.hpp"
#include "repac/mvl.hpp"

namespace repac {

using Interval = std::pair<std::size_t, std::size_t>;  // [start, end) in samples

// How the pipeline selects the low-frequency band to refine:
//  - Mvl: the coupling-profile threshold rule (the default analysis mode).
//  - Demod: score each candidate band by the contrast of its demodulated
//    instantaneous power (mean of the top 2% over the median) and keep the
//    argmax band. This mode is far more robust at strongly negative SNR and
//    is the benchmark default.
enum class BandSelectMode { Mvl, Demod };

// How the central comb frequency is picked from the averaged segment PSD:
//  - Argmax: maximum of the lightly smoothed spectrum inside the candidate band.
//  - Matched: contrast-normalized spectrum (boxcar-smoothed over a running
//    median background) scored with a comb-line triplet template to resolve
//    +-f_L neighbor-line flips; benchmark default.
enum class CombPick { Argmax, Matched };

struct RepacConfig {
    std::vector<Band> candidate_lfo_bands;        // default: 2 Hz wide, 1 Hz hop, 2-15 Hz
    Band candidate_hfo_band{30.0, 150.0};
    std::vector<double> has_set{1.0, 2.0, 3.0, 4.0, 5.0};
    double demod_cutoff = 2.0;                    // Hz, AM demodulation lowpass
    double threshold_coeff = 0.1;                 // profile refinement rule coefficient
    double activity_epsilon = 0.05;               // fraction of max(s1) for interval onset
    int comb_side_peaks = 4;                      // half-width of the refined band in f_L units

    BandSelectMode band_select_mode = BandSelectMode::Mvl;
    CombPick comb_pick = CombPick::Argmax;
    double comb_gate_db = 6.0;                    // <= 0 disables the no-HFO spectral gate
    double detect_median_lo = 1.8;                // low hysteresis threshold, in medians of s1
    double detect_median_hi = 4.5;                // peak confirmation threshold, in medians of s1

    static std::vector<Band> default_lfo_grid();  // (2,4),(3,5),...,(13,15)
    static RepacConfig defaults();
    // Monte-Carlo profile: Demod band selection, 0.5 Hz demodulation cutoff,
    // candidate HFO band (60,100), spectral gate off, Matched comb pick.
    static RepacConfig bench_profile();
    void validate(double fs) const;
};

struct RefinedLfo {
    Band band{0.0, 0.0};
    bool low_confidence = false;
    std::vector<std::size_t> members;  // indices of qualifying profile bands
};

struct CombResult {
    double f_h_hat_initial = 0.0;  // comb central-peak estimate
    Band refined_hfo{0.0, 0.0};    // (f_h_hat_initial -/+ comb_side_peaks * f_l_hat), unclipped
    PsdEstimate segment_psd;       // averaged per-segment periodogram
};

struct RepacResult {
    Band refined_lfo{0.0, 0.0};
    double f_l_hat = 0.0;
    Band refined_hfo{0.0, 0.0};      // exactly f_h_hat_initial -/+ comb_side_peaks * f_l_hat
    double f_h_hat = 0.0;            // final estimate, from the refined-band phase slope
    double f_h_hat_initial = 0.0;    // comb-peak estimate retained alongside segment_psd
    std::vector<Interval> pac_intervals;
    double final_mvl = 0.0;
    MvlProfile profile;
    PsdEstimate segment_psd;
    bool lfo_low_confidence = false;
    std::string status = "ok";       // "ok", "no PAC periods", or "no HFO component"
};

// Threshold rule on the averaged-MVL profile: a band qualifies iff its value
// is >= max - threshold_coeff*(max - min); the refined band spans the lowest
// lo edge to the highest hi edge of the qualifying bands. A flat profile
// (max == min) degenerates to the first argmax band with a low-confidence flag.
RefinedLfo refine_lfo_band(const MvlProfile& profile, double threshold_coeff);

// f_L from the OLS slope of the unwrapped analytic phase.
double estimate_lfo_frequency(const std::vector<double>& s_lfo, double fs);

// s1[n] = lowpass(s_lfo[n]^2, cutoff) clipped at 0.
std::vector<double> demodulate_lfo(const std::vector<double>& s_lfo, double cutoff, double fs);

// Interval extraction from the demodulated power with a two-level hysteresis:
// samples above max(epsilon*max(s1), median_lo*median(s1)) seed regions, kept
// only when their peak reaches max(epsilon*max(s1), median_hi*median(s1));
// regions separated by < 0.1 s merge; regions shorter than 2/f_l_hat drop.
// On a clean signal (median ~ 0) this degenerates to the plain epsilon rule.
std::vector<Interval> detect_pac_periods(const std::vector<double>& s1, double fs,
                                         double f_l_hat, double epsilon,
                                         double median_lo = 1.8, double median_hi = 4.5);

// Averaged per-segment Hann periodogram over the detected intervals, central
// comb peak within candidate_hfo, and the refined band around it. Throws
// std::runtime_error("no HFO component") when gate_db > 0 and no in-band peak
// exceeds the median in-band power by gate_db.
CombResult comb_analysis(const std::vector<double>& x, double fs,
                         const std::vector<Interval>& intervals, double f_l_hat,
                         const Band& candidate_hfo, CombPick pick = CombPick::Argmax,
                         double gate_db = 6.0, int comb_side_peaks = 4);

// Full pipeline. "no PAC periods" / "no HFO component" outcomes produce a
// result with empty intervals and final_mvl = 0 rather than an exception.
RepacResult run_repac(const std::vector<double>& x, double fs, const RepacConfig& cfg);

}  // namespace repac
