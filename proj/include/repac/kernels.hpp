#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "repac/dsp.hpp"

namespace repac {
double band_mvl_value(const std::vector<double>& x, double fs, const Band& lfo_band,
                      const std::vector<double>& amplitude, const std::vector<double>& has_set);
}

namespace repac::kernels {

// True when the library was compiled with OpenMP support.
bool parallel_enabled();

// --- K-band MVL scan ------------------------------------------------------
// Per-band averaged MVL values; bands are independent work items.
// The OpenMP variant writes results by band index, so it is bit-identical to
// the serial reference at any thread count.
std::vector<double> band_scan_serial(const std::vector<double>& x, double fs,
                                     const std::vector<Band>& bands,
                                     const std::vector<double>& amplitude,
                                     const std::vector<double>& has_set);
std::vector<double> band_scan_omp(const std::vector<double>& x, double fs,
                                  const std::vector<Band>& bands,
                                  const std::vector<double>& amplitude,
                                  const std::vector<double>& has_set);
std::vector<double> band_scan(const std::vector<double>& x, double fs,
                              const std::vector<Band>& bands,
                              const std::vector<double>& amplitude,
                              const std::vector<double>& has_set);

// --- Circular-shift surrogate rank counts ----------------------------------
// Observed has-averaged MVL for the whole record and for each analysis window,
// plus the number of surrogates (amplitude circularly shifted by a random
// offset of at least min_offset samples) whose MVL reaches the observed value.
// Offsets are pre-drawn from a single seeded stream so the OpenMP variant is
// bit-identical to the serial reference.
struct SurrogateCounts {
    double obs_record = 0.0;
    std::vector<double> obs_window;
    int count_record = 0;            // surrogates with record MVL >= observed
    std::vector<int> count_window;   // per window, same rule
    int n_surrogates = 0;
};

SurrogateCounts surrogate_counts_serial(const std::vector<double>& amplitude,
                                        const std::vector<double>& phase,
                                        const std::vector<double>& has_set,
                                        const std::vector<std::size_t>& window_starts,
                                        std::size_t window_len, int n_surrogates,
                                        std::size_t min_offset, std::uint64_t seed,
                                        bool skip_windows = false);
SurrogateCounts surrogate_counts_omp(const std::vector<double>& amplitude,
                                     const std::vector<double>& phase,
                                     const std::vector<double>& has_set,
                                     const std::vector<std::size_t>& window_starts,
                                     std::size_t window_len, int n_surrogates,
                                     std::size_t min_offset, std::uint64_t seed,
                                     bool skip_windows = false);
SurrogateCounts surrogate_counts(const std::vector<double>& amplitude,
                                 const std::vector<double>& phase,
                                 const std::vector<double>& has_set,
                                 const std::vector<std::size_t>& window_starts,
                                 std::size_t window_len, int n_surrogates,
                                 std::size_t min_offset, std::uint64_t seed,
                                 bool skip_windows = false);

// Has-averaged MVL of a (possibly circularly shifted) slice, with the same
// top-amplitude tie-breaking as repac::mvl (descending amplitude, then index).
// offset rotates the amplitude series: amplitude index = (start + i + n - offset mod n) mod n.
double window_mvl_shifted(const std::vector<double>& amplitude, const std::vector<double>& phase,
                          const std::vector<double>& has_set, std::size_t start,
                          std::size_t len, std::size_t offset);

}  // namespace repac::kernels
