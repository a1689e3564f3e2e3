#include "repac/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "repac/rng.hpp"

namespace repac {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::vector<double> make_pac_event(double f_l, double f_h, double m, double event_len, double fs) {
    if (!(f_l > 0.0 && f_l < f_h && f_h < fs / 2.0))
        throw std::invalid_argument("make_pac_event: need 0 < f_L < f_H < fs/2");
    if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("make_pac_event: m outside [0, 1]");
    if (!(event_len >= 3.0 / f_l))
        throw std::invalid_argument("make_pac_event: event shorter than 3 LFO cycles");
    const std::size_t le = static_cast<std::size_t>(std::llround(event_len * fs));
    std::vector<double> e(le);
    for (std::size_t k = 0; k < le; ++k) {
        const double t = static_cast<double>(k) / fs;
        const double w =
            0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(k) / static_cast<double>(le - 1)));
        const double cl = std::cos(kTwoPi * f_l * t);
        const double r = std::max(-cl, 0.0);
        e[k] = w * cl + m * w * r * std::cos(kTwoPi * f_h * t);
    }
    return e;
}

SyntheticParts synthesize_parts(const PacParams& p) {
    if (!(p.fs > 0.0)) throw std::invalid_argument("synthesize: fs must be positive");
    if (!(p.f_l > 0.0 && p.f_l < p.f_h && p.f_h < p.fs / 2.0))
        throw std::invalid_argument("synthesize: need 0 < f_L < f_H < fs/2");
    if (!(p.m >= 0.0 && p.m <= 1.0)) throw std::invalid_argument("synthesize: m outside [0, 1]");
    if (!(p.event_len >= 3.0 / p.f_l))
        throw std::invalid_argument("synthesize: event shorter than 3 LFO cycles");
    if (p.n_events.min < 0 || p.n_events.max < p.n_events.min)
        throw std::invalid_argument("synthesize: bad event-count policy");
    const std::size_t n = static_cast<std::size_t>(std::llround(p.duration * p.fs));
    if (n < 256) throw std::invalid_argument("synthesize: record too short");
    if (static_cast<double>(p.n_events.max) * p.event_len > 0.8 * p.duration)
        throw std::invalid_argument("synthesize: n_events*L exceeds 0.8*duration");

    SyntheticParts out;
    out.noise = pink_noise(n, p.fs, mix_seed(p.seed, 1));

    Rng rng(mix_seed(p.seed, 2));
    const int count = (p.n_events.min == p.n_events.max)
                          ? p.n_events.min
                          : static_cast<int>(rng.uniform_int(
                                static_cast<std::uint64_t>(p.n_events.min),
                                static_cast<std::uint64_t>(p.n_events.max)));
    out.realized_events = count;

    const std::size_t le = static_cast<std::size_t>(std::llround(p.event_len * p.fs));
    const std::size_t guard = static_cast<std::size_t>(std::llround(0.5 * p.fs));
    std::vector<std::size_t> starts;
    starts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const std::size_t s =
                static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::uint64_t>(n - le)));
            bool ok = true;
            for (std::size_t other : starts) {
                if (s < other + le + guard && other < s + le + guard) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                starts.push_back(s);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw std::runtime_error("synthesize: event placement failed (record too crowded)");
    }
    std::sort(starts.begin(), starts.end());

    const std::vector<double> ev =
        (count > 0) ? make_pac_event(p.f_l, p.f_h, p.m, p.event_len, p.fs) : std::vector<double>{};
    out.clean.assign(n, 0.0);
    GroundTruth truth;
    truth.labels.assign(n, 0);
    for (std::size_t s : starts) {
        for (std::size_t k = 0; k < le; ++k) {
            out.clean[s + k] += ev[k];
            truth.labels[s + k] = 1;
        }
        truth.intervals.emplace_back(s, s + le);
    }

    if (count > 0) {
        double p_ev = 0.0, p_nz = 0.0;
        std::size_t support = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (truth.labels[i]) {
                p_ev += out.clean[i] * out.clean[i];
                p_nz += out.noise[i] * out.noise[i];
                ++support;
            }
        }
        p_ev /= static_cast<double>(support);
        p_nz /= static_cast<double>(support);
        const double g = std::sqrt(std::pow(10.0, p.snr_db / 10.0) * p_nz / p_ev);
        for (double& v : out.clean) v *= g;
    }

    out.record.signal.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.record.signal[i] = out.noise[i] + out.clean[i];
    out.record.truth = std::move(truth);
    out.record.params = p;
    return out;
}

SyntheticRecord synthesize(const PacParams& params) {
    return synthesize_parts(params).record;
}

}  // namespace repac
