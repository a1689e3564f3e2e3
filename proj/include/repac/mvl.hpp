#pragma once

#include <cstddef>
#include <vector>

#include "repac/dsp.hpp"

namespace repac {

// Per-band averaged coupling profile produced by the K-band low-frequency scan.
struct MvlProfile {
    std::vector<Band> bands;
    std::vector<double> values;
    std::vector<double> has_set;
};

// Number of samples selected for a given top-amplitude percentage.
// Throws std::invalid_argument("mvl: empty selection") when the rounded count is zero.
std::size_t mvl_selection_count(std::size_t n, double has_percent);

// Indices of the has_percent% largest-amplitude samples, ties broken by lower index.
std::vector<std::size_t> mvl_select_top(const std::vector<double>& amplitude, double has_percent);

// |mean over the selected samples of amplitude[n] * exp(i*phase[n])|.
double mvl(const std::vector<double>& amplitude, const std::vector<double>& phase,
           double has_percent);

// Mean of mvl() over a set of has percentages.
double mvl_has_avg(const std::vector<double>& amplitude, const std::vector<double>& phase,
                   const std::vector<double>& has_set);

// Filter x into each low-frequency band (phase) and into hfo_band (amplitude),
// then average mvl() over has_set per band.
MvlProfile mvl_profile(const std::vector<double>& x, double fs, const std::vector<Band>& lfo_bands,
                       const Band& hfo_band, const std::vector<double>& has_set);

// Same scan evaluated from a precomputed amplitude series (shared across bands).
MvlProfile mvl_profile_amp(const std::vector<double>& x, double fs,
                           const std::vector<Band>& lfo_bands,
                           const std::vector<double>& amplitude,
                           const std::vector<double>& has_set);

}  // namespace repac
