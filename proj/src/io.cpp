#include "repac/io.hpp"

#include <cstring>
#include <fstream>
#include <initializer_list>
#include <string_view>

namespace repac::io {

namespace {

using nlohmann::json;

void put_u32_le(std::string& s, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void put_f64_le(std::string& s, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((bits >> (8 * i)) & 0xFFu));
}

double get_f64_le(const unsigned char* p) {
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
}

// Rejects unknown keys so config typos fail loudly instead of silently using
// defaults.
void check_known_keys(const json& j, const char* section,
                      std::initializer_list<std::string_view> known) {
    if (!j.is_object())
        throw FormatError(std::string("config section '") + section + "': expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (std::string_view k : known)
            if (item.key() == k) {
                ok = true;
                break;
            }
        if (!ok)
            throw FormatError(std::string("config section '") + section + "': unknown field '" +
                              item.key() + "'");
    }
}

template <typename T>
void read_field(const json& j, const char* section, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw FormatError(std::string("config field '") + section + "." + key +
                          "': " + e.what());
    }
}

Band band_from_json(const json& v, const char* section, const char* key) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw FormatError(std::string("config field '") + section + "." + key +
                          "': expected [lo_hz, hi_hz]");
    return Band{v[0].get<double>(), v[1].get<double>()};
}

void read_band(const json& j, const char* section, const char* key, Band& out) {
    if (!j.contains(key)) return;
    out = band_from_json(j.at(key), section, key);
}

json intervals_to_json(const std::vector<Interval>& ivs) {
    json a = json::array();
    for (const auto& [lo, hi] : ivs) a.push_back({lo, hi});
    return a;
}

}  // namespace

void write_signal(const std::string& path, const std::vector<double>& samples) {
    std::string buf;
    buf.reserve(16 + 8 * samples.size());
    buf.append(kSignalMagic, sizeof kSignalMagic);
    put_u32_le(buf, kSignalVersion);
    put_u32_le(buf, 0);  // reserved
    for (double v : samples) put_f64_le(buf, v);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!f) throw IoError("write failed: " + path);
}

std::vector<double> read_signal(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw IoError("read failed: " + path);
    if (buf.size() < 16)
        throw FormatError("signal header corrupt: file shorter than the 16-byte header (" +
                          path + ")");
    const auto* p = reinterpret_cast<const unsigned char*>(buf.data());
    if (std::memcmp(p, kSignalMagic, sizeof kSignalMagic) != 0)
        throw FormatError("signal header corrupt: bad magic (" + path + ")");
    const std::uint32_t version = get_u32_le(p + 8);
    if (version != kSignalVersion)
        throw FormatError("signal header corrupt: unsupported version " +
                          std::to_string(version) + " (" + path + ")");
    const std::size_t payload = buf.size() - 16;
    if (payload % 8 != 0)
        throw FormatError("signal payload corrupt: size " + std::to_string(payload) +
                          " is not a multiple of 8 bytes (" + path + ")");
    std::vector<double> out(payload / 8);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = get_f64_le(p + 16 + 8 * i);
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw IoError("write failed: " + path);
}

void write_json(const std::string& path, const nlohmann::json& j) {
    write_text(path, j.dump(2) + "\n");
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open: " + path);
    try {
        return json::parse(f);
    } catch (const json::parse_error& e) {
        throw FormatError("JSON parse error in " + path + ": " + e.what());
    }
}

nlohmann::json to_json(const Band& b) { return json{b.lo, b.hi}; }

nlohmann::json to_json(const RepacResult& r) {
    json j;
    j["status"] = r.status;
    j["refined_lfo_hz"] = to_json(r.refined_lfo);
    j["f_l_hat_hz"] = r.f_l_hat;
    j["refined_hfo_hz"] = to_json(r.refined_hfo);
    j["f_h_hat_initial_hz"] = r.f_h_hat_initial;
    j["f_h_hat_hz"] = r.f_h_hat;
    j["final_mvl"] = r.final_mvl;
    j["lfo_low_confidence"] = r.lfo_low_confidence;
    j["pac_intervals"] = intervals_to_json(r.pac_intervals);
    json prof;
    prof["bands_hz"] = json::array();
    for (const Band& b : r.profile.bands) prof["bands_hz"].push_back(to_json(b));
    prof["values"] = r.profile.values;
    prof["has_set"] = r.profile.has_set;
    j["mvl_profile"] = prof;
    json psd;
    psd["freq_hz"] = r.segment_psd.freqs;
    psd["power"] = r.segment_psd.power;
    j["segment_psd"] = psd;
    return j;
}

nlohmann::json to_json(const BaselineResult& r) {
    json j;
    j["significant"] = r.significant;
    j["p_value"] = r.p_value;
    j["observed_mvl"] = r.observed_mvl;
    j["intervals"] = intervals_to_json(r.intervals);
    j["window_p"] = r.window_p;
    return j;
}

nlohmann::json to_json(const RepacConfig& c) {
    json j;
    j["candidate_lfo_bands_hz"] = json::array();
    for (const Band& b : c.candidate_lfo_bands)
        j["candidate_lfo_bands_hz"].push_back(to_json(b));
    j["candidate_hfo_band_hz"] = to_json(c.candidate_hfo_band);
    j["has_set"] = c.has_set;
    j["demod_cutoff_hz"] = c.demod_cutoff;
    j["threshold_coeff"] = c.threshold_coeff;
    j["activity_epsilon"] = c.activity_epsilon;
    j["comb_side_peaks"] = c.comb_side_peaks;
    j["band_select_mode"] = c.band_select_mode == BandSelectMode::Demod ? "demod" : "mvl";
    j["comb_pick"] = c.comb_pick == CombPick::Matched ? "matched" : "argmax";
    j["comb_gate_db"] = c.comb_gate_db;
    j["detect_median_lo"] = c.detect_median_lo;
    j["detect_median_hi"] = c.detect_median_hi;
    return j;
}

nlohmann::json to_json(const BaselineConfig& c) {
    json j;
    j["lfo_band_hz"] = to_json(c.lfo_band);
    j["hfo_band_hz"] = to_json(c.hfo_band);
    j["has_set"] = c.has_set;
    j["n_surrogates"] = c.n_surrogates;
    j["alpha"] = c.alpha;
    j["window_alpha"] = c.window_alpha;
    j["window_len_s"] = c.window_len_s;
    j["window_overlap"] = c.window_overlap;
    return j;
}

nlohmann::json to_json(const BenchGrid& g) {
    json j;
    j["snr_values_db"] = g.snr_values;
    j["m_values"] = g.m_values;
    j["l_values_s"] = g.l_values;
    j["f_l_policy"] = g.f_l_policy == FreqPolicy::Uniform ? "uniform" : "fixed";
    j["f_l_fixed_hz"] = g.f_l_fixed;
    j["f_l_range_hz"] = to_json(g.f_l_range);
    j["f_h_policy"] = g.f_h_policy == FreqPolicy::Uniform ? "uniform" : "fixed";
    j["f_h_fixed_hz"] = g.f_h_fixed;
    j["f_h_range_hz"] = to_json(g.f_h_range);
    j["trials_per_cell"] = g.trials_per_cell;
    j["master_seed"] = g.master_seed;
    j["duration_s"] = g.duration_s;
    j["fs_hz"] = g.fs;
    j["event_density"] = g.event_density;
    return j;
}

nlohmann::json to_json(const PacParams& p) {
    json j;
    j["f_l_hz"] = p.f_l;
    j["f_h_hz"] = p.f_h;
    j["m"] = p.m;
    j["event_len_s"] = p.event_len;
    j["snr_db"] = p.snr_db;
    j["duration_s"] = p.duration;
    j["fs_hz"] = p.fs;
    j["n_events_min"] = p.n_events.min;
    j["n_events_max"] = p.n_events.max;
    j["seed"] = p.seed;
    return j;
}

PacParams pac_params_from_json(const nlohmann::json& j, PacParams base) {
    check_known_keys(j, "synth",
                     {"f_l_hz", "f_h_hz", "m", "event_len_s", "snr_db", "duration_s", "fs_hz",
                      "n_events_min", "n_events_max", "seed"});
    read_field(j, "synth", "f_l_hz", base.f_l);
    read_field(j, "synth", "f_h_hz", base.f_h);
    read_field(j, "synth", "m", base.m);
    read_field(j, "synth", "event_len_s", base.event_len);
    read_field(j, "synth", "snr_db", base.snr_db);
    read_field(j, "synth", "duration_s", base.duration);
    read_field(j, "synth", "fs_hz", base.fs);
    read_field(j, "synth", "n_events_min", base.n_events.min);
    read_field(j, "synth", "n_events_max", base.n_events.max);
    read_field(j, "synth", "seed", base.seed);
    return base;
}

RepacConfig repac_config_from_json(const nlohmann::json& j, RepacConfig base) {
    check_known_keys(j, "repac",
                     {"candidate_lfo_bands_hz", "candidate_hfo_band_hz", "has_set",
                      "demod_cutoff_hz", "threshold_coeff", "activity_epsilon", "comb_side_peaks",
                      "band_select_mode", "comb_pick", "comb_gate_db", "detect_median_lo",
                      "detect_median_hi"});
    if (j.contains("candidate_lfo_bands_hz")) {
        const json& arr = j.at("candidate_lfo_bands_hz");
        if (!arr.is_array() || arr.empty())
            throw FormatError("config field 'repac.candidate_lfo_bands_hz': expected band list");
        base.candidate_lfo_bands.clear();
        for (const json& v : arr)
            base.candidate_lfo_bands.push_back(
                band_from_json(v, "repac", "candidate_lfo_bands_hz"));
    }
    read_band(j, "repac", "candidate_hfo_band_hz", base.candidate_hfo_band);
    read_field(j, "repac", "has_set", base.has_set);
    read_field(j, "repac", "demod_cutoff_hz", base.demod_cutoff);
    read_field(j, "repac", "threshold_coeff", base.threshold_coeff);
    read_field(j, "repac", "activity_epsilon", base.activity_epsilon);
    read_field(j, "repac", "comb_side_peaks", base.comb_side_peaks);
    read_field(j, "repac", "comb_gate_db", base.comb_gate_db);
    read_field(j, "repac", "detect_median_lo", base.detect_median_lo);
    read_field(j, "repac", "detect_median_hi", base.detect_median_hi);
    if (j.contains("band_select_mode")) {
        const std::string v = j.at("band_select_mode").is_string()
                                  ? j.at("band_select_mode").get<std::string>()
                                  : std::string();
        if (v == "mvl")
            base.band_select_mode = BandSelectMode::Mvl;
        else if (v == "demod")
            base.band_select_mode = BandSelectMode::Demod;
        else
            throw FormatError("config field 'repac.band_select_mode': expected \"mvl\" or \"demod\"");
    }
    if (j.contains("comb_pick")) {
        const std::string v =
            j.at("comb_pick").is_string() ? j.at("comb_pick").get<std::string>() : std::string();
        if (v == "argmax")
            base.comb_pick = CombPick::Argmax;
        else if (v == "matched")
            base.comb_pick = CombPick::Matched;
        else
            throw FormatError("config field 'repac.comb_pick': expected \"argmax\" or \"matched\"");
    }
    return base;
}

BaselineConfig baseline_config_from_json(const nlohmann::json& j, BaselineConfig base) {
    check_known_keys(j, "baseline",
                     {"lfo_band_hz", "hfo_band_hz", "has_set", "n_surrogates", "alpha",
                      "window_alpha", "window_len_s", "window_overlap"});
    read_band(j, "baseline", "lfo_band_hz", base.lfo_band);
    read_band(j, "baseline", "hfo_band_hz", base.hfo_band);
    read_field(j, "baseline", "has_set", base.has_set);
    read_field(j, "baseline", "n_surrogates", base.n_surrogates);
    read_field(j, "baseline", "alpha", base.alpha);
    read_field(j, "baseline", "window_alpha", base.window_alpha);
    read_field(j, "baseline", "window_len_s", base.window_len_s);
    read_field(j, "baseline", "window_overlap", base.window_overlap);
    return base;
}

BenchGrid bench_grid_from_json(const nlohmann::json& j, BenchGrid base) {
    check_known_keys(j, "bench",
                     {"snr_values_db", "m_values", "l_values_s", "f_l_policy", "f_l_fixed_hz",
                      "f_l_range_hz", "f_h_policy", "f_h_fixed_hz", "f_h_range_hz",
                      "trials_per_cell", "master_seed", "duration_s", "fs_hz", "event_density"});
    read_field(j, "bench", "snr_values_db", base.snr_values);
    read_field(j, "bench", "m_values", base.m_values);
    read_field(j, "bench", "l_values_s", base.l_values);
    read_field(j, "bench", "f_l_fixed_hz", base.f_l_fixed);
    read_band(j, "bench", "f_l_range_hz", base.f_l_range);
    read_field(j, "bench", "f_h_fixed_hz", base.f_h_fixed);
    read_band(j, "bench", "f_h_range_hz", base.f_h_range);
    read_field(j, "bench", "trials_per_cell", base.trials_per_cell);
    read_field(j, "bench", "master_seed", base.master_seed);
    read_field(j, "bench", "duration_s", base.duration_s);
    read_field(j, "bench", "fs_hz", base.fs);
    read_field(j, "bench", "event_density", base.event_density);
    for (const char* key : {"f_l_policy", "f_h_policy"}) {
        if (!j.contains(key)) continue;
        const std::string v = j.at(key).is_string() ? j.at(key).get<std::string>() : std::string();
        FreqPolicy pol;
        if (v == "fixed")
            pol = FreqPolicy::Fixed;
        else if (v == "uniform")
            pol = FreqPolicy::Uniform;
        else
            throw FormatError(std::string("config field 'bench.") + key +
                              "': expected \"fixed\" or \"uniform\"");
        (std::string_view(key) == "f_l_policy" ? base.f_l_policy : base.f_h_policy) = pol;
    }
    return base;
}

BenchGates bench_gates_from_json(const nlohmann::json& j, BenchGates base) {
    check_known_keys(j, "gates",
                     {"min_repac_sensitivity", "min_sensitivity_gap", "min_specificity",
                      "min_accuracy"});
    read_field(j, "gates", "min_repac_sensitivity", base.min_repac_sensitivity);
    read_field(j, "gates", "min_sensitivity_gap", base.min_sensitivity_gap);
    read_field(j, "gates", "min_specificity", base.min_specificity);
    read_field(j, "gates", "min_accuracy", base.min_accuracy);
    return base;
}

std::string psd_csv(const std::vector<double>& freqs, const std::vector<double>& power) {
    if (freqs.size() != power.size())
        throw std::invalid_argument("psd_csv: freq/power length mismatch");
    std::string s = "freq_hz,power\n";
    char buf[64];
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.9g,%.12g\n", freqs[i], power[i]);
        s += buf;
    }
    return s;
}

}  // namespace repac::io
