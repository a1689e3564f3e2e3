#include "repac/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "repac/mvl.hpp"
#include "repac/rng.hpp"

namespace repac::kernels {

bool parallel_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

std::vector<double> band_scan_serial(const std::vector<double>& x, double fs,
                                     const std::vector<Band>& bands,
                                     const std::vector<double>& amplitude,
                                     const std::vector<double>& has_set) {
    std::vector<double> values(bands.size());
    for (std::size_t k = 0; k < bands.size(); ++k)
        values[k] = band_mvl_value(x, fs, bands[k], amplitude, has_set);
    return values;
}

std::vector<double> band_scan_omp(const std::vector<double>& x, double fs,
                                  const std::vector<Band>& bands,
                                  const std::vector<double>& amplitude,
                                  const std::vector<double>& has_set) {
    std::vector<double> values(bands.size());
    const auto nb = static_cast<std::int64_t>(bands.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::int64_t k = 0; k < nb; ++k)
        values[static_cast<std::size_t>(k)] =
            band_mvl_value(x, fs, bands[static_cast<std::size_t>(k)], amplitude, has_set);
    return values;
}

std::vector<double> band_scan(const std::vector<double>& x, double fs,
                              const std::vector<Band>& bands,
                              const std::vector<double>& amplitude,
                              const std::vector<double>& has_set) {
    return parallel_enabled() ? band_scan_omp(x, fs, bands, amplitude, has_set)
                              : band_scan_serial(x, fs, bands, amplitude, has_set);
}

double window_mvl_shifted(const std::vector<double>& amplitude, const std::vector<double>& phase,
                          const std::vector<double>& has_set, std::size_t start,
                          std::size_t len, std::size_t offset) {
    const std::size_t n = amplitude.size();
    if (start + len > n) throw std::invalid_argument("window_mvl_shifted: window out of range");
    std::size_t k_max = 0;
    for (double h : has_set) k_max = std::max(k_max, mvl_selection_count(len, h));

    static thread_local std::vector<std::pair<double, std::uint32_t>> scratch;
    scratch.resize(len);
    // rolled[i] = amplitude[(i - offset) mod n]; window element j sits at absolute i = start + j.
    std::size_t src = (start + n - (offset % n)) % n;
    for (std::size_t j = 0; j < len; ++j) {
        scratch[j] = {amplitude[src], static_cast<std::uint32_t>(j)};
        if (++src == n) src = 0;
    }
    const auto desc_stable = [](const std::pair<double, std::uint32_t>& a,
                                const std::pair<double, std::uint32_t>& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    };
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k_max),
                      scratch.end(), desc_stable);

    static thread_local std::vector<std::complex<double>> pref;
    pref.resize(k_max);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t j = 0; j < k_max; ++j) {
        acc += std::polar(scratch[j].first, phase[start + scratch[j].second]);
        pref[j] = acc;
    }
    double out = 0.0;
    for (double h : has_set) {
        const std::size_t k = mvl_selection_count(len, h);
        out += std::abs(pref[k - 1]) / static_cast<double>(k);
    }
    return out / static_cast<double>(has_set.size());
}

namespace {

SurrogateCounts surrogate_counts_impl(const std::vector<double>& amplitude,
                                      const std::vector<double>& phase,
                                      const std::vector<double>& has_set,
                                      const std::vector<std::size_t>& window_starts,
                                      std::size_t window_len, int n_surrogates,
                                      std::size_t min_offset, std::uint64_t seed,
                                      bool skip_windows, bool parallel) {
    const std::size_t n = amplitude.size();
    if (amplitude.size() != phase.size())
        throw std::invalid_argument("surrogate_counts: length mismatch");
    if (n_surrogates < 1) throw std::invalid_argument("surrogate_counts: n_surrogates < 1");
    if (min_offset < 1 || 2 * min_offset >= n)
        throw std::invalid_argument("surrogate_counts: record too short for offset constraint");

    SurrogateCounts out;
    out.n_surrogates = n_surrogates;
    out.obs_record = window_mvl_shifted(amplitude, phase, has_set, 0, n, 0);
    const std::size_t nw = skip_windows ? 0 : window_starts.size();
    out.obs_window.resize(nw);
    out.count_window.assign(nw, 0);
    for (std::size_t wi = 0; wi < nw; ++wi)
        out.obs_window[wi] =
            window_mvl_shifted(amplitude, phase, has_set, window_starts[wi], window_len, 0);

    Rng rng(seed);
    std::vector<std::size_t> offsets(static_cast<std::size_t>(n_surrogates));
    for (auto& off : offsets)
        off = static_cast<std::size_t>(rng.uniform_int(
            static_cast<std::uint64_t>(min_offset), static_cast<std::uint64_t>(n - min_offset - 1)));

    const auto ns = static_cast<std::int64_t>(n_surrogates);
#ifdef _OPENMP
#pragma omp parallel if (parallel)
#else
    (void)parallel;
#endif
    {
        int local_rec = 0;
        std::vector<int> local_win(nw, 0);
#ifdef _OPENMP
#pragma omp for schedule(dynamic) nowait
#endif
        for (std::int64_t s = 0; s < ns; ++s) {
            const std::size_t off = offsets[static_cast<std::size_t>(s)];
            if (window_mvl_shifted(amplitude, phase, has_set, 0, n, off) >= out.obs_record)
                ++local_rec;
            for (std::size_t wi = 0; wi < nw; ++wi) {
                if (window_mvl_shifted(amplitude, phase, has_set, window_starts[wi], window_len,
                                       off) >= out.obs_window[wi])
                    ++local_win[wi];
            }
        }
#ifdef _OPENMP
#pragma omp critical(repac_surrogate_merge)
#endif
        {
            out.count_record += local_rec;
            for (std::size_t wi = 0; wi < nw; ++wi) out.count_window[wi] += local_win[wi];
        }
    }
    return out;
}

}  // namespace

SurrogateCounts surrogate_counts_serial(const std::vector<double>& amplitude,
                                        const std::vector<double>& phase,
                                        const std::vector<double>& has_set,
                                        const std::vector<std::size_t>& window_starts,
                                        std::size_t window_len, int n_surrogates,
                                        std::size_t min_offset, std::uint64_t seed,
                                        bool skip_windows) {
    return surrogate_counts_impl(amplitude, phase, has_set, window_starts, window_len,
                                 n_surrogates, min_offset, seed, skip_windows, false);
}

SurrogateCounts surrogate_counts_omp(const std::vector<double>& amplitude,
                                     const std::vector<double>& phase,
                                     const std::vector<double>& has_set,
                                     const std::vector<std::size_t>& window_starts,
                                     std::size_t window_len, int n_surrogates,
                                     std::size_t min_offset, std::uint64_t seed,
                                     bool skip_windows) {
    return surrogate_counts_impl(amplitude, phase, has_set, window_starts, window_len,
                                 n_surrogates, min_offset, seed, skip_windows, true);
}

SurrogateCounts surrogate_counts(const std::vector<double>& amplitude,
                                 const std::vector<double>& phase,
                                 const std::vector<double>& has_set,
                                 const std::vector<std::size_t>& window_starts,
                                 std::size_t window_len, int n_surrogates,
                                 std::size_t min_offset, std::uint64_t seed, bool skip_windows) {
    return surrogate_counts_impl(amplitude, phase, has_set, window_starts, window_len,
                                 n_surrogates, min_offset, seed, skip_windows,
                                 parallel_enabled());
}

}  // namespace repac::kernels
