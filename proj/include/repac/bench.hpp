#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "repac/baseline.hpp"
#include "repac/repac.hpp"
#include "repac/synth.hpp"

namespace repac {

enum class FreqPolicy { Fixed, Uniform };

// Parameter grid for the Monte Carlo comparison. Each (snr, m, L) cell gets
// trials_per_cell records; per-trial seeds derive deterministically from
// master_seed, so a grid always reproduces the same records.
struct BenchGrid {
    std::vector<double> snr_values{-18.0, -10.0, -5.0, 0.0};
    std::vector<double> m_values{0.1, 0.5, 1.0};
    std::vector<double> l_values{1.5, 3.0, 5.0};  // event length, seconds
    FreqPolicy f_l_policy = FreqPolicy::Uniform;
    double f_l_fixed = 5.0;
    Band f_l_range{4.0, 10.0};
    FreqPolicy f_h_policy = FreqPolicy::Uniform;
    double f_h_fixed = 80.0;
    Band f_h_range{60.0, 100.0};
    int trials_per_cell = 100;
    std::uint64_t master_seed = 12345;
    double duration_s = 60.0;
    double fs = 1000.0;
    // Fraction of the record covered by events: per-trial event count is
    // max(1, round(event_density * duration / L)).
    double event_density = 0.1;

    void validate() const;
};

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;
    std::uint64_t total() const { return tp + fp + tn + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
};

// Per-sample comparison of ground-truth labels against detected intervals.
// Throws std::out_of_range if an interval exceeds the record.
ConfusionCounts score(const GroundTruth& truth, const std::vector<Interval>& detected);

// NaN marks a metric whose denominator is zero (undefined, excluded from
// averages downstream).
struct Metrics {
    double sensitivity;
    double specificity;
    double accuracy;
};

Metrics metrics(const ConfusionCounts& c);

struct MeanSd {
    double mean = 0.0;
    double sd = 0.0;
    int n = 0;  // defined trials contributing
};

struct DetectorCellStats {
    ConfusionCounts pooled;
    Metrics pooled_metrics{};  // metrics of the pooled counts (the CSV values)
    MeanSd sensitivity;        // per-trial mean +- sd over defined trials
    MeanSd specificity;
    MeanSd accuracy;
    int failures = 0;  // detector errors, scored as "no detection"
};

struct CellResult {
    double snr_db = 0.0;
    double m = 0.0;
    double l_s = 0.0;
    int trials = 0;
    std::vector<std::uint64_t> record_hashes;  // one per trial; pairing evidence
    DetectorCellStats repac;
    DetectorCellStats baseline;
};

struct BenchReport {
    BenchGrid grid;  // config echo
    std::vector<CellResult> cells;

    // One row per cell per detector:
    // snr_db,m,L_s,detector,sensitivity,specificity,accuracy,trials,failures
    std::string csv() const;
    // Structured-text summary with the full config echo; no timestamps, so a
    // rerun with the same grid is byte-identical.
    std::string summary() const;
};

// Run both detectors on identical records over the full grid. Per-trial
// detector errors are recorded and scored as empty detections; they never
// abort the run. Trials run in parallel, results are assembled in trial
// order, so the report does not depend on scheduling. `on_cell`, when set,
// is invoked after each finished cell (serially, in grid order).
using CellCallback = std::function<void(const CellResult&, std::size_t done, std::size_t total)>;
BenchReport monte_carlo(const BenchGrid& grid, const RepacConfig& repac_cfg,
                        const BaselineConfig& baseline_cfg, const CellCallback& on_cell = {});

// Pass/fail thresholds evaluated against every cell's pooled metrics; NaN
// disables a gate. Violations come back as human-readable strings.
struct BenchGates {
    double min_repac_sensitivity = std::numeric_limits<double>::quiet_NaN();
    double min_sensitivity_gap = std::numeric_limits<double>::quiet_NaN();  // repac - baseline
    double min_specificity = std::numeric_limits<double>::quiet_NaN();     // both detectors
    double min_accuracy = std::numeric_limits<double>::quiet_NaN();        // both detectors
};

std::vector<std::string> check_gates(const BenchReport& report, const BenchGates& gates);

// FNV-1a over the raw bytes of the sample values; the per-trial pairing hash.
std::uint64_t hash_signal(const std::vector<double>& x);

}  // namespace repac
