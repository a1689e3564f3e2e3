#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "repac/baseline.hpp"
#include "repac/bench.hpp"
#include "repac/repac.hpp"
#include "repac/synth.hpp"

namespace repac::io {

// Operating-system level failures (open/read/write).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed file content; the message says whether the header or the payload
// is at fault.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Signal container: 16-byte header (8-byte magic "PACSIG\0\0", little-endian
// u32 version = 1, u32 reserved = 0) followed by little-endian IEEE-754
// doubles. Metadata (fs, generation parameters) lives in a JSON sidecar.
inline constexpr char kSignalMagic[8] = {'P', 'A', 'C', 'S', 'I', 'G', '\0', '\0'};
inline constexpr std::uint32_t kSignalVersion = 1;

void write_signal(const std::string& path, const std::vector<double>& samples);
std::vector<double> read_signal(const std::string& path);

void write_text(const std::string& path, const std::string& content);
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

// --- result / config serialization -----------------------------------------
nlohmann::json to_json(const Band& b);
nlohmann::json to_json(const RepacResult& r);
nlohmann::json to_json(const BaselineResult& r);
nlohmann::json to_json(const RepacConfig& c);
nlohmann::json to_json(const BaselineConfig& c);
nlohmann::json to_json(const BenchGrid& g);
nlohmann::json to_json(const PacParams& p);

// --- config parsing (fields present in `j` override `base`) ----------------
// Unknown keys and ill-typed values raise FormatError naming the field.
PacParams pac_params_from_json(const nlohmann::json& j, PacParams base);
RepacConfig repac_config_from_json(const nlohmann::json& j, RepacConfig base);
BaselineConfig baseline_config_from_json(const nlohmann::json& j, BaselineConfig base);
BenchGrid bench_grid_from_json(const nlohmann::json& j, BenchGrid base);
BenchGates bench_gates_from_json(const nlohmann::json& j, BenchGates base);

// CSV with a header row: freq_hz,power.
std::string psd_csv(const std::vector<double>& freqs, const std::vector<double>& power);

}  // namespace repac::io
