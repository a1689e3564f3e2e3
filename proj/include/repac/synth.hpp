#pragma once

#include <cstdint>
#include <vector>

#include "repac/dsp.hpp"

namespace repac {

// Event-count policy: a fixed count, or a uniform integer draw in [min, max].
struct EventCount {
    int min = 0;
    int max = 0;
    static EventCount fixed(int k) { return {k, k}; }
    static EventCount uniform(int kmin, int kmax) { return {kmin, kmax}; }
};

struct PacParams {
    double f_l = 5.0;       // LFO carrier, Hz
    double f_h = 80.0;      // HFO carrier, Hz
    double m = 0.1;         // modulation index in [0, 1]
    double event_len = 1.5; // L, seconds
    double snr_db = 0.0;
    double duration = 60.0; // seconds
    double fs = 1000.0;
    EventCount n_events = EventCount::fixed(4);
    std::uint64_t seed = 0;
};

struct GroundTruth {
    std::vector<std::pair<std::size_t, std::size_t>> intervals;  // [start, end)
    std::vector<std::uint8_t> labels;                            // per-sample
};

struct SyntheticRecord {
    std::vector<double> signal;
    GroundTruth truth;
    PacParams params;
};

// Internal components retained for tests (energy/SNR bookkeeping).
struct SyntheticParts {
    SyntheticRecord record;
    std::vector<double> noise;        // pink background, unit variance
    std::vector<double> clean;        // scaled event ensemble
    int realized_events = 0;
};

// One PAC event: Hann-enveloped LFO cosine plus trough-gated HFO bursts,
// e[n] = w[n]*cos(2*pi*f_l*n/fs) + m*w[n]*r[n]*cos(2*pi*f_h*n/fs)
// with r[n] = max(-cos(2*pi*f_l*n/fs), 0).
std::vector<double> make_pac_event(double f_l, double f_h, double m, double event_len, double fs);

// Pink background + events at uniformly random non-overlapping starts with
// >= 0.5 s guard gaps; the event ensemble is rescaled so that the event-support
// SNR equals snr_db. Throws on invalid parameters or placement failure.
SyntheticRecord synthesize(const PacParams& params);
SyntheticParts synthesize_parts(const PacParams& params);

}  // namespace repac
