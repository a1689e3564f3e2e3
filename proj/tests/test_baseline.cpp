#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "repac/baseline.hpp"
#include "repac/dsp.hpp"
#include "repac/synth.hpp"

using repac::BaselineConfig;
using repac::BaselineResult;
using repac::Interval;

namespace {

repac::SyntheticRecord coupled_record(double f_l, double f_h, std::uint64_t seed,
                                      double snr_db = 0.0) {
    repac::PacParams p;
    p.f_l = f_l;
    p.f_h = f_h;
    p.m = 1.0;
    p.snr_db = snr_db;
    p.duration = 30.0;
    p.n_events = repac::EventCount::fixed(5);
    p.seed = seed;
    return repac::synthesize(p);
}

bool overlaps(const Interval& a, const Interval& b) {
    return std::max(a.first, b.first) < std::min(a.second, b.second);
}

}  // namespace

TEST_CASE("baseline flags a record whose rhythms match the fixed bands") {
    const auto rec = coupled_record(5.0, 80.0, 1001);
    const auto res = repac::run_baseline(rec.signal, rec.params.fs, BaselineConfig{}, 42);
    CHECK(res.significant);
    CHECK(res.p_value <= 0.05);
    CHECK(res.observed_mvl > 0.0);
    REQUIRE(!res.intervals.empty());
    // The per-window gate is conservative (the circular-shift null is built
    // from the whole record, events included), so it localizes only the
    // strongest events. The stable properties are: at least one truth event
    // is flagged, and no flagged window falls outside every truth event.
    int hits = 0;
    for (const auto& tr : rec.truth.intervals) {
        bool hit = false;
        for (const auto& iv : res.intervals) hit = hit || overlaps(tr, iv);
        hits += hit;
    }
    CHECK(hits >= 1);
    for (const auto& iv : res.intervals) {
        bool on_event = false;
        for (const auto& tr : rec.truth.intervals) on_event = on_event || overlaps(tr, iv);
        CHECK(on_event);
    }
    for (std::size_t k = 0; k < res.intervals.size(); ++k) {
        CHECK(res.intervals[k].first < res.intervals[k].second);
        if (k) CHECK(res.intervals[k].first >= res.intervals[k - 1].second);
    }
    CHECK(!res.window_p.empty());
    for (double p : res.window_p) {
        CHECK(p > 0.0);
        CHECK(p <= 1.0);
    }
}

TEST_CASE("baseline misses coupling outside its fixed low band") {
    // True LFO at 11 Hz while the detector listens at 4-8 Hz: by construction
    // the fixed-band method cannot see this coupling.
    const auto rec = coupled_record(11.0, 80.0, 1002);
    const auto res = repac::run_baseline(rec.signal, rec.params.fs, BaselineConfig{}, 42);
    CHECK_FALSE(res.significant);
    CHECK(res.intervals.empty());
    CHECK(res.window_p.empty());
}

TEST_CASE("baseline misses coupling outside its fixed high band") {
    const auto rec = coupled_record(5.0, 120.0, 1003);
    const auto res = repac::run_baseline(rec.signal, rec.params.fs, BaselineConfig{}, 42);
    CHECK_FALSE(res.significant);
    CHECK(res.intervals.empty());
}

TEST_CASE("baseline does not flag pink noise") {
    int flagged = 0;
    for (std::uint64_t seed : {11u, 12u, 13u, 14u}) {
        const auto x = repac::pink_noise(30000, 1000.0, seed);
        const auto res = repac::run_baseline(x, 1000.0, BaselineConfig{}, seed * 7 + 1);
        if (res.significant) ++flagged;
        CHECK(res.p_value > 0.0);
    }
    // One excursion in four draws is already a 1-in-54 event at alpha 0.05.
    CHECK(flagged <= 1);
}

TEST_CASE("baseline is deterministic in the record and the seed") {
    const auto rec = coupled_record(5.0, 80.0, 1004, -5.0);
    const auto a = repac::run_baseline(rec.signal, rec.params.fs, BaselineConfig{}, 9);
    const auto b = repac::run_baseline(rec.signal, rec.params.fs, BaselineConfig{}, 9);
    CHECK(a.significant == b.significant);
    CHECK(a.p_value == b.p_value);
    CHECK(a.observed_mvl == b.observed_mvl);
    CHECK(a.intervals == b.intervals);
    CHECK(a.window_p == b.window_p);
}

TEST_CASE("baseline p-value has the discrete surrogate-rank form") {
    // p = (1 + #exceeding) / (n_surrogates + 1) can never reach 0 and its
    // smallest attainable value is 1/(n+1).
    const auto rec = coupled_record(5.0, 80.0, 1005);
    BaselineConfig cfg;
    cfg.n_surrogates = 99;
    const auto res = repac::run_baseline(rec.signal, rec.params.fs, cfg, 3);
    CHECK(res.p_value >= 1.0 / 100.0);
    CHECK(res.p_value <= 1.0);
    const double scaled = res.p_value * 100.0;
    CHECK(std::abs(scaled - std::llround(scaled)) < 1e-9);
}

TEST_CASE("baseline validates its configuration") {
    const auto x = repac::pink_noise(8000, 1000.0, 5);
    BaselineConfig cfg;
    cfg.n_surrogates = 10;  // too few for a stable rank test
    CHECK_THROWS_AS(repac::run_baseline(x, 1000.0, cfg, 1), std::invalid_argument);

    cfg = BaselineConfig{};
    cfg.alpha = 0.0;
    CHECK_THROWS_AS(cfg.validate(1000.0), std::invalid_argument);

    cfg = BaselineConfig{};
    cfg.window_overlap = 1.0;
    CHECK_THROWS_AS(cfg.validate(1000.0), std::invalid_argument);

    cfg = BaselineConfig{};
    cfg.lfo_band = repac::Band{8.0, 4.0};
    CHECK_THROWS_AS(cfg.validate(1000.0), std::invalid_argument);

    cfg = BaselineConfig{};
    cfg.window_len_s = 0.0;
    CHECK_THROWS_AS(cfg.validate(1000.0), std::invalid_argument);

    cfg = BaselineConfig{};
    cfg.has_set = {0.0};
    CHECK_THROWS_AS(cfg.validate(1000.0), std::invalid_argument);
}

TEST_CASE("baseline rejects records shorter than two windows") {
    const auto x = repac::pink_noise(1500, 1000.0, 6);
    CHECK_THROWS_AS(repac::run_baseline(x, 1000.0, BaselineConfig{}, 1), std::invalid_argument);
}
