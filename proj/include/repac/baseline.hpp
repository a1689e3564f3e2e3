#pragma once

#include <cstdint>
#include <vector>

#include "repac/dsp.hpp"
#include "repac/repac.hpp"

namespace repac {

// Fixed-band reference detector: canonical theta/low-gamma bands, has-averaged
// MVL, circular-shift surrogate significance. Unlike the adaptive pipeline it
// never re-estimates bands, so records whose true rhythms fall outside the
// configured bands are missed by construction.
struct BaselineConfig {
    Band lfo_band{4.0, 8.0};
    Band hfo_band{70.0, 90.0};
    std::vector<double> has_set{1.0, 2.0, 3.0, 4.0, 5.0};
    int n_surrogates = 200;
    // Record-level significance: PAC declared iff the surrogate rank p-value
    // is <= alpha.
    double alpha = 0.05;
    // Window-level flagging inside a significant record. Stricter than the
    // record gate because every record spawns ~2 overlapping tests per second;
    // the tighter quantile keeps the per-record false-window count near zero.
    double window_alpha = 0.02;
    double window_len_s = 1.0;
    double window_overlap = 0.5;

    void validate(double fs) const;
};

struct BaselineResult {
    bool significant = false;
    double p_value = 1.0;       // record-level surrogate rank p-value
    double observed_mvl = 0.0;  // has-averaged whole-record MVL
    // Union of overlapping significant windows; empty when not significant.
    std::vector<Interval> intervals;
    // Per-window p-values (analysis order); filled only for significant records.
    std::vector<double> window_p;
};

// Filter to the fixed bands, compute the has-averaged MVL, and test it against
// n_surrogates circular shifts of the amplitude series (offset >= 1 s, drawn
// from `seed`). Significant records get a second pass that localizes coupling
// to 50%-overlapping windows tested against the same surrogate shifts.
BaselineResult run_baseline(const std::vector<double>& x, double fs, const BaselineConfig& cfg,
                            std::uint64_t seed);

}  // namespace repac
