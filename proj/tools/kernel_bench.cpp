// Micro-benchmark for the two parallel kernels (K-band MVL scan and
// circular-shift surrogate counting) against their serial reference
// implementations, verifying bit-identical results while timing both.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <vector>

#include "repac/dsp.hpp"
#include "repac/kernels.hpp"
#include "repac/repac.hpp"
#include "repac/synth.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

bool bits_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) try {
    double duration = 60.0;
    int reps = 3;
    if (argc > 1 && (std::strcmp(argv[1], "-h") == 0 || std::strcmp(argv[1], "--help") == 0)) {
        std::printf("usage: kernel_bench [duration_s] [repetitions]\n");
        return 0;
    }
    if (argc > 1) duration = std::atof(argv[1]);
    if (argc > 2) reps = std::atoi(argv[2]);
    if (!(duration > 0.0) || reps < 1) {
        std::fprintf(stderr, "kernel_bench: duration must be > 0 and repetitions >= 1\n");
        return 1;
    }

    std::printf("OpenMP compiled in: %s\n", repac::kernels::parallel_enabled() ? "yes" : "no");

    repac::PacParams p;
    p.duration = duration;
    p.snr_db = 0.0;
    p.m = 1.0;
    p.seed = 7;
    const repac::SyntheticRecord rec = repac::synthesize(p);
    const double fs = p.fs;
    std::printf("record: %.0f s at %.0f Hz (%zu samples)\n\n", duration, fs, rec.signal.size());

    const std::vector<repac::Band> bands = repac::RepacConfig::default_lfo_grid();
    const std::vector<double> has_set{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> amp = repac::instantaneous_amplitude(
        repac::filter_zero_phase_analytic(repac::design_bandpass({30.0, 150.0}, fs, 10.0),
                                          rec.signal));

    std::vector<double> scan_serial, scan_omp;
    const double t_scan_serial = time_best_of(reps, [&] {
        scan_serial = repac::kernels::band_scan_serial(rec.signal, fs, bands, amp, has_set);
    });
    const double t_scan_omp = time_best_of(reps, [&] {
        scan_omp = repac::kernels::band_scan_omp(rec.signal, fs, bands, amp, has_set);
    });
    std::printf("band scan (%zu bands):\n", bands.size());
    std::printf("  serial  %8.3f s\n", t_scan_serial);
    std::printf("  openmp  %8.3f s   speedup %.2fx   bit-identical: %s\n\n", t_scan_omp,
                t_scan_serial / t_scan_omp, bits_equal(scan_serial, scan_omp) ? "yes" : "NO");

    const std::vector<double> phase = repac::instantaneous_phase(
        repac::filter_zero_phase_analytic(repac::design_bandpass({4.0, 8.0}, fs, 2.0),
                                          rec.signal));
    const auto wlen = static_cast<std::size_t>(fs);
    std::vector<std::size_t> starts;
    for (std::size_t s = 0; s + wlen <= rec.signal.size(); s += wlen / 2) starts.push_back(s);
    const int n_surr = 200;
    const auto min_offset = static_cast<std::size_t>(fs);

    repac::kernels::SurrogateCounts sc_serial, sc_omp;
    const double t_surr_serial = time_best_of(reps, [&] {
        sc_serial = repac::kernels::surrogate_counts_serial(amp, phase, has_set, starts, wlen,
                                                            n_surr, min_offset, 99);
    });
    const double t_surr_omp = time_best_of(reps, [&] {
        sc_omp = repac::kernels::surrogate_counts_omp(amp, phase, has_set, starts, wlen, n_surr,
                                                      min_offset, 99);
    });
    const bool surr_match = sc_serial.count_record == sc_omp.count_record &&
                            sc_serial.count_window == sc_omp.count_window &&
                            bits_equal(sc_serial.obs_window, sc_omp.obs_window);
    std::printf("surrogate counts (%d surrogates, %zu windows):\n", n_surr, starts.size());
    std::printf("  serial  %8.3f s\n", t_surr_serial);
    std::printf("  openmp  %8.3f s   speedup %.2fx   identical: %s\n", t_surr_omp,
                t_surr_serial / t_surr_omp, surr_match ? "yes" : "NO");
    return 0;
} catch (const std::exception& e) {
    std::fprintf(stderr, "kernel_bench: %s\n", e.what());
    return 1;
}
