#include "repac/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "repac/kernels.hpp"
#include "repac/mvl.hpp"

namespace repac {

void BaselineConfig::validate(double fs) const {
    auto check_band = [&](const Band& b, const char* name) {
        if (!(b.lo >= 0.0 && b.lo < b.hi && b.hi < fs / 2.0))
            throw std::invalid_argument(std::string("baseline config: ") + name + " invalid");
    };
    check_band(lfo_band, "lfo_band");
    check_band(hfo_band, "hfo_band");
    if (has_set.empty()) throw std::invalid_argument("baseline config: has_set empty");
    for (double h : has_set)
        if (!(h > 0.0 && h <= 100.0))
            throw std::invalid_argument("baseline config: has value outside (0,100]");
    if (n_surrogates < 50) throw std::invalid_argument("baseline config: n_surrogates < 50");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("baseline config: alpha outside (0,1)");
    if (!(window_alpha > 0.0 && window_alpha < 1.0))
        throw std::invalid_argument("baseline config: window_alpha outside (0,1)");
    if (!(window_len_s > 0.0))
        throw std::invalid_argument("baseline config: window_len_s must be positive");
    if (!(window_overlap >= 0.0 && window_overlap < 1.0))
        throw std::invalid_argument("baseline config: window_overlap outside [0,1)");
}

BaselineResult run_baseline(const std::vector<double>& x, double fs, const BaselineConfig& cfg,
                            std::uint64_t seed) {
    if (!(fs > 0.0)) throw std::invalid_argument("run_baseline: fs must be positive");
    cfg.validate(fs);
    const std::size_t n = x.size();
    const auto wlen = static_cast<std::size_t>(std::llround(cfg.window_len_s * fs));
    if (wlen < 2 || n < 2 * wlen)
        throw std::invalid_argument("run_baseline: record shorter than two analysis windows");

    const std::vector<double> phase = instantaneous_phase(
        detail::analytic_signal_padded(filter_zero_phase(design_bandpass(cfg.lfo_band, fs, 2.0), x)));
    const std::vector<double> amp = instantaneous_amplitude(
        detail::analytic_signal_padded(filter_zero_phase(design_bandpass(cfg.hfo_band, fs, 10.0), x)));

    const auto hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(static_cast<double>(wlen) * (1.0 - cfg.window_overlap))));
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + wlen <= n; s += hop) starts.push_back(s);

    const auto min_offset = static_cast<std::size_t>(std::llround(fs));  // shifts of >= 1 s
    const double denom = static_cast<double>(cfg.n_surrogates) + 1.0;

    // Record-level gate first; the expensive window pass runs only on records
    // that clear it. Both passes draw offsets from the same seed, so surrogate
    // shifts are identical across passes.
    BaselineResult res;
    {
        const kernels::SurrogateCounts rec =
            kernels::surrogate_counts(amp, phase, cfg.has_set, starts, wlen, cfg.n_surrogates,
                                      min_offset, seed, /*skip_windows=*/true);
        res.observed_mvl = rec.obs_record;
        res.p_value = (1.0 + static_cast<double>(rec.count_record)) / denom;
    }
    res.significant = res.p_value <= cfg.alpha;
    if (!res.significant) return res;

    const kernels::SurrogateCounts sc =
        kernels::surrogate_counts(amp, phase, cfg.has_set, starts, wlen, cfg.n_surrogates,
                                  min_offset, seed, /*skip_windows=*/false);
    res.window_p.resize(starts.size());
    for (std::size_t j = 0; j < starts.size(); ++j) {
        res.window_p[j] = (1.0 + static_cast<double>(sc.count_window[j])) / denom;
        if (res.window_p[j] <= cfg.window_alpha) {
            const Interval iv{starts[j], starts[j] + wlen};
            if (!res.intervals.empty() && iv.first <= res.intervals.back().second)
                res.intervals.back().second = std::max(res.intervals.back().second, iv.second);
            else
                res.intervals.push_back(iv);
        }
    }
    return res;
}

}  // namespace repac
