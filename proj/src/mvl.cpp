#include "repac/mvl.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include "repac/kernels.hpp"

namespace repac {

std::size_t mvl_selection_count(std::size_t n, double has_percent) {
    if (!(has_percent > 0.0 && has_percent <= 100.0))
        throw std::invalid_argument("mvl: has_percent outside (0, 100]");
    if (n == 0) throw std::invalid_argument("mvl: empty input");
    auto k = static_cast<std::size_t>(std::llround(has_percent / 100.0 * static_cast<double>(n)));
    if (k > n) k = n;
    if (k == 0) throw std::invalid_argument("mvl: empty selection");
    return k;
}

std::vector<std::size_t> mvl_select_top(const std::vector<double>& amplitude, double has_percent) {
    const std::size_t k = mvl_selection_count(amplitude.size(), has_percent);
    std::vector<std::size_t> idx(amplitude.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return amplitude[a] > amplitude[b]; });
    idx.resize(k);
    return idx;
}

double mvl(const std::vector<double>& amplitude, const std::vector<double>& phase,
           double has_percent) {
    if (amplitude.size() != phase.size()) throw std::invalid_argument("mvl: length mismatch");
    for (double a : amplitude)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw std::invalid_argument("mvl: amplitude must be finite and nonnegative");
    const std::vector<std::size_t> sel = mvl_select_top(amplitude, has_percent);
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i : sel) acc += std::polar(amplitude[i], phase[i]);
    return std::abs(acc) / static_cast<double>(sel.size());
}

double mvl_has_avg(const std::vector<double>& amplitude, const std::vector<double>& phase,
                   const std::vector<double>& has_set) {
    if (has_set.empty()) throw std::invalid_argument("mvl: empty has_set");
    if (amplitude.size() != phase.size()) throw std::invalid_argument("mvl: length mismatch");
    // One shared descending-amplitude ordering; each has value takes a prefix of it.
    std::vector<std::size_t> idx(amplitude.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return amplitude[a] > amplitude[b]; });
    double out = 0.0;
    for (double h : has_set) {
        const std::size_t k = mvl_selection_count(amplitude.size(), h);
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < k; ++j) acc += std::polar(amplitude[idx[j]], phase[idx[j]]);
        out += std::abs(acc) / static_cast<double>(k);
    }
    return out / static_cast<double>(has_set.size());
}

double band_mvl_value(const std::vector<double>& x, double fs, const Band& lfo_band,
                      const std::vector<double>& amplitude, const std::vector<double>& has_set) {
    const std::vector<double> coeffs = design_bandpass(lfo_band, fs, 2.0);
    const std::vector<std::complex<double>> z = filter_zero_phase_analytic(coeffs, x);
    return mvl_has_avg(amplitude, instantaneous_phase(z), has_set);
}

MvlProfile mvl_profile_amp(const std::vector<double>& x, double fs,
                           const std::vector<Band>& lfo_bands,
                           const std::vector<double>& amplitude,
                           const std::vector<double>& has_set) {
    if (lfo_bands.size() < 3) throw std::invalid_argument("mvl_profile: need at least 3 bands");
    if (amplitude.size() != x.size()) throw std::invalid_argument("mvl_profile: length mismatch");
    MvlProfile p;
    p.bands = lfo_bands;
    p.has_set = has_set;
    p.values = kernels::band_scan(x, fs, lfo_bands, amplitude, has_set);
    return p;
}

MvlProfile mvl_profile(const std::vector<double>& x, double fs, const std::vector<Band>& lfo_bands,
                       const Band& hfo_band, const std::vector<double>& has_set) {
    for (const Band& b : lfo_bands)
        if (b.hi > hfo_band.lo)
            throw std::invalid_argument("mvl_profile: hfo_band must lie above all lfo_bands");
    const std::vector<double> coeffs = design_bandpass(hfo_band, fs, 10.0);
    const std::vector<double> amp =
        instantaneous_amplitude(filter_zero_phase_analytic(coeffs, x));
    return mvl_profile_amp(x, fs, lfo_bands, amp, has_set);
}

}  // namespace repac
