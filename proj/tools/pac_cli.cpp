// pac: synthesize PAC-like EEG records, run the adaptive and fixed-band
// detectors, inspect spectra, and benchmark the detectors against each other.
//
// Exit codes: 0 success, 1 validation error, 2 I/O error, 3 acceptance-gate
// failure (bench only).

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "repac/baseline.hpp"
#include "repac/bench.hpp"
#include "repac/io.hpp"
#include "repac/repac.hpp"
#include "repac/synth.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;
constexpr int kExitGate = 3;

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    const json j = repac::io::read_json(path);
    if (!j.is_object()) throw repac::io::FormatError("config root must be a JSON object: " + path);
    for (const auto& item : j.items()) {
        const std::string& k = item.key();
        if (k != "synth" && k != "repac" && k != "baseline" && k != "bench" && k != "gates")
            throw repac::io::FormatError("config: unknown section '" + k + "' in " + path);
    }
    return j;
}

json section(const json& cfg, const char* name) {
    return cfg.contains(name) ? cfg.at(name) : json::object();
}

// Sample rate for a signal file: explicit flag wins, else the sidecar.
double resolve_fs(const std::string& signal_path, double fs_flag) {
    if (fs_flag > 0.0) return fs_flag;
    const std::string sidecar = signal_path + ".json";
    if (std::filesystem::exists(sidecar)) {
        const json meta = repac::io::read_json(sidecar);
        if (meta.contains("fs_hz") && meta.at("fs_hz").is_number())
            return meta.at("fs_hz").get<double>();
    }
    throw std::invalid_argument("sample rate unknown: pass --fs or provide " + sidecar);
}

int cmd_synth(const repac::PacParams& params, const std::string& out_path,
              const std::string& csv_path) {
    const repac::SyntheticRecord rec = repac::synthesize(params);

    repac::io::write_signal(out_path, rec.signal);
    json meta;
    meta["fs_hz"] = params.fs;
    meta["n_samples"] = rec.signal.size();
    meta["params"] = repac::io::to_json(params);
    json ivs = json::array();
    for (const auto& [a, b] : rec.truth.intervals) ivs.push_back({a, b});
    meta["truth_intervals"] = ivs;
    repac::io::write_json(out_path + ".json", meta);
    if (!csv_path.empty()) {
        std::string s = "t_s,x\n";
        char buf[64];
        for (std::size_t i = 0; i < rec.signal.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.6f,%.12g\n", static_cast<double>(i) / params.fs,
                          rec.signal[i]);
            s += buf;
        }
        repac::io::write_text(csv_path, s);
    }
    std::cout << "wrote " << rec.signal.size() << " samples to " << out_path << " ("
              << rec.truth.intervals.size() << " events, sidecar " << out_path << ".json)\n";
    return kExitOk;
}

int cmd_detect(const std::string& config_path, const std::string& in_path,
               const std::string& detector, double fs_flag, std::uint64_t seed,
               std::string out_path) {
    const json cfg = load_config(config_path);
    const std::vector<double> x = repac::io::read_signal(in_path);
    if (x.empty()) throw std::invalid_argument("signal file holds no samples: " + in_path);
    const double fs = resolve_fs(in_path, fs_flag);
    if (out_path.empty()) out_path = in_path + ".result.json";

    json out;
    out["signal"] = {{"path", in_path}, {"n_samples", x.size()}, {"fs_hz", fs}};
    out["detector"] = detector;

    if (detector == "repac") {
        const repac::RepacConfig rc =
            repac::io::repac_config_from_json(section(cfg, "repac"), repac::RepacConfig::defaults());
        const repac::RepacResult res = repac::run_repac(x, fs, rc);
        out["config"] = repac::io::to_json(rc);
        out["result"] = repac::io::to_json(res);
        std::printf("status:        %s\n", res.status.c_str());
        std::printf("refined LFO:   %.2f-%.2f Hz (f_L = %.3f Hz)\n", res.refined_lfo.lo,
                    res.refined_lfo.hi, res.f_l_hat);
        if (res.status == "ok") {
            std::printf("refined HFO:   %.2f-%.2f Hz (f_H = %.3f Hz, initial %.3f Hz)\n",
                        res.refined_hfo.lo, res.refined_hfo.hi, res.f_h_hat, res.f_h_hat_initial);
            std::printf("PAC intervals: %zu\n", res.pac_intervals.size());
            std::printf("final MVL:     %.6g\n", res.final_mvl);
        }
    } else {
        const repac::BaselineConfig bc = repac::io::baseline_config_from_json(
            section(cfg, "baseline"), repac::BaselineConfig{});
        const repac::BaselineResult res = repac::run_baseline(x, fs, bc, seed);
        out["config"] = repac::io::to_json(bc);
        out["result"] = repac::io::to_json(res);
        std::printf("significant:   %s\n", res.significant ? "yes" : "no");
        std::printf("p-value:       %.6g\n", res.p_value);
        std::printf("observed MVL:  %.6g\n", res.observed_mvl);
        std::printf("intervals:     %zu\n", res.intervals.size());
    }
    repac::io::write_json(out_path, out);
    std::cout << "result written to " << out_path << "\n";
    return kExitOk;
}

int cmd_psd(const std::string& in_path, double fs_flag, std::size_t segment_len, double overlap,
            const std::string& out_path) {
    const std::vector<double> x = repac::io::read_signal(in_path);
    if (x.empty()) throw std::invalid_argument("signal file holds no samples: " + in_path);
    const double fs = resolve_fs(in_path, fs_flag);
    const repac::PsdEstimate psd = repac::welch_psd(x, fs, segment_len, overlap);
    repac::io::write_text(out_path, repac::io::psd_csv(psd.freqs, psd.power));
    std::cout << "wrote " << psd.freqs.size() << " PSD bins to " << out_path << "\n";
    return kExitOk;
}

int cmd_bench(const std::string& config_path, const repac::BenchGrid& grid,
              const std::string& out_dir) {
    const json cfg = load_config(config_path);
    const repac::RepacConfig rc = repac::io::repac_config_from_json(
        section(cfg, "repac"), repac::RepacConfig::bench_profile());
    const repac::BaselineConfig bc =
        repac::io::baseline_config_from_json(section(cfg, "baseline"), repac::BaselineConfig{});
    const repac::BenchGates gates =
        repac::io::bench_gates_from_json(section(cfg, "gates"), repac::BenchGates{});

    std::filesystem::create_directories(out_dir);
    const repac::BenchReport report = repac::monte_carlo(
        grid, rc, bc, [](const repac::CellResult& cell, std::size_t done, std::size_t total) {
            std::fprintf(stderr,
                         "[%zu/%zu] snr=%g dB m=%g L=%g s: repac sens=%.3f spec=%.3f | "
                         "baseline sens=%.3f spec=%.3f\n",
                         done, total, cell.snr_db, cell.m, cell.l_s,
                         cell.repac.pooled_metrics.sensitivity,
                         cell.repac.pooled_metrics.specificity,
                         cell.baseline.pooled_metrics.sensitivity,
                         cell.baseline.pooled_metrics.specificity);
        });

    json echo;
    echo["bench"] = repac::io::to_json(report.grid);
    echo["repac"] = repac::io::to_json(rc);
    echo["baseline"] = repac::io::to_json(bc);
    json jg;
    jg["min_repac_sensitivity"] = gates.min_repac_sensitivity;
    jg["min_sensitivity_gap"] = gates.min_sensitivity_gap;
    jg["min_specificity"] = gates.min_specificity;
    jg["min_accuracy"] = gates.min_accuracy;
    echo["gates"] = jg;

    const std::filesystem::path dir(out_dir);
    repac::io::write_text((dir / "report.csv").string(), report.csv());
    repac::io::write_text((dir / "summary.txt").string(), report.summary());
    repac::io::write_json((dir / "config.json").string(), echo);
    std::cout << "report written to " << out_dir << "\n";

    const std::vector<std::string> violations = repac::check_gates(report, gates);
    if (!violations.empty()) {
        for (const std::string& v : violations) std::cerr << "gate violated: " << v << "\n";
        return kExitGate;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PAC synthesis, detection, and benchmarking"};
    app.require_subcommand(1);

    // --- synth --------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate a synthetic PAC record");
    std::string s_config, s_out = "record.pacsig", s_csv;
    repac::PacParams params;
    int s_events = -1;
    synth->add_option("--config", s_config, "JSON config file (section 'synth')");
    synth->add_option("--out", s_out, "output signal path");
    synth->add_option("--csv", s_csv, "also write samples as CSV");
    auto* o_fl = synth->add_option("--fl", params.f_l, "LFO frequency, Hz");
    auto* o_fh = synth->add_option("--fh", params.f_h, "HFO frequency, Hz");
    auto* o_m = synth->add_option("--m", params.m, "modulation index in [0,1]");
    auto* o_len = synth->add_option("--L", params.event_len, "event length, s");
    auto* o_snr = synth->add_option("--snr", params.snr_db, "event-support SNR, dB");
    auto* o_dur = synth->add_option("--duration", params.duration, "record duration, s");
    auto* o_fs = synth->add_option("--fs", params.fs, "sample rate, Hz");
    auto* o_ev = synth->add_option("--events", s_events, "fixed event count");
    auto* o_seed = synth->add_option("--seed", params.seed, "RNG seed");

    // --- detect ---------------------------------------------------------------
    auto* detect = app.add_subcommand("detect", "Run a detector on a signal file");
    std::string d_config, d_in, d_detector = "repac", d_out;
    double d_fs = 0.0;
    std::uint64_t d_seed = 0;
    detect->add_option("--config", d_config, "JSON config file");
    detect->add_option("--in", d_in, "input signal path")->required();
    detect->add_option("--detector", d_detector, "repac | baseline")
        ->check(CLI::IsMember({"repac", "baseline"}));
    detect->add_option("--fs", d_fs, "sample rate, Hz (overrides sidecar)");
    detect->add_option("--seed", d_seed, "surrogate seed (baseline)");
    detect->add_option("--out", d_out, "result JSON path (default <in>.result.json)");

    // --- psd ------------------------------------------------------------------
    auto* psd = app.add_subcommand("psd", "Welch PSD of a signal file as CSV");
    std::string p_in, p_out = "psd.csv";
    double p_fs = 0.0, p_overlap = 0.5;
    std::size_t p_seg = 4096;
    psd->add_option("--in", p_in, "input signal path")->required();
    psd->add_option("--fs", p_fs, "sample rate, Hz (overrides sidecar)");
    psd->add_option("--segment", p_seg, "Welch segment length, samples");
    psd->add_option("--overlap", p_overlap, "segment overlap fraction [0,1)");
    psd->add_option("--out", p_out, "output CSV path");

    // --- bench ------------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Monte Carlo detector comparison");
    std::string b_config, b_out_dir = "bench_out";
    repac::BenchGrid grid;
    bench->add_option("--config", b_config, "JSON config file");
    bench->add_option("--out-dir", b_out_dir, "report directory");
    auto* b_snr = bench->add_option("--snr", grid.snr_values, "SNR grid, dB");
    auto* b_m = bench->add_option("--m", grid.m_values, "modulation-index grid");
    auto* b_l = bench->add_option("--L", grid.l_values, "event-length grid, s");
    auto* b_trials = bench->add_option("--trials", grid.trials_per_cell, "trials per cell");
    auto* b_seed = bench->add_option("--master-seed", grid.master_seed, "master seed");
    auto* b_dur = bench->add_option("--duration", grid.duration_s, "record duration, s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (synth->parsed()) {
            if (o_ev->count()) {
                if (s_events < 0) throw std::invalid_argument("--events must be >= 0");
                params.n_events = repac::EventCount::fixed(s_events);
            }
            // Flags override config-file values. Track which flags were set,
            // load config into a fresh base, then re-apply the flags.
            repac::PacParams flag_vals = params;
            const json cfg = load_config(s_config);
            params = repac::io::pac_params_from_json(section(cfg, "synth"), repac::PacParams{});
            if (o_fl->count()) params.f_l = flag_vals.f_l;
            if (o_fh->count()) params.f_h = flag_vals.f_h;
            if (o_m->count()) params.m = flag_vals.m;
            if (o_len->count()) params.event_len = flag_vals.event_len;
            if (o_snr->count()) params.snr_db = flag_vals.snr_db;
            if (o_dur->count()) params.duration = flag_vals.duration;
            if (o_fs->count()) params.fs = flag_vals.fs;
            if (o_ev->count()) params.n_events = flag_vals.n_events;
            if (o_seed->count()) params.seed = flag_vals.seed;
            return cmd_synth(params, s_out, s_csv);
        }
        if (detect->parsed()) return cmd_detect(d_config, d_in, d_detector, d_fs, d_seed, d_out);
        if (psd->parsed()) return cmd_psd(p_in, p_fs, p_seg, p_overlap, p_out);
        if (bench->parsed()) {
            repac::BenchGrid flag_vals = grid;
            const json cfg = load_config(b_config);
            grid = repac::io::bench_grid_from_json(section(cfg, "bench"), repac::BenchGrid{});
            if (b_snr->count()) grid.snr_values = flag_vals.snr_values;
            if (b_m->count()) grid.m_values = flag_vals.m_values;
            if (b_l->count()) grid.l_values = flag_vals.l_values;
            if (b_trials->count()) grid.trials_per_cell = flag_vals.trials_per_cell;
            if (b_seed->count()) grid.master_seed = flag_vals.master_seed;
            if (b_dur->count()) grid.duration_s = flag_vals.duration_s;
            return cmd_bench(b_config, grid, b_out_dir);
        }
    } catch (const repac::io::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const repac::io::FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return kExitOk;
}
