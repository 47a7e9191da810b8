#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sltm/svg_plot.hpp"

namespace sltm::cli {

struct ArrayBlock {
    int n_elements = 8;
    double spacing_wl = 0.5;
    std::optional<std::vector<double>> amplitudes;
    std::optional<std::vector<double>> phases_deg;
    std::optional<double> steer_deg;
    std::optional<std::string> pattern_table; // CSV path replacing the isotropic model
    std::string variant = "sltm";             // "sltm" or "conventional"
};

struct SequenceBlock {
    double chip_rate_hz = 256e6;
    double threshold = 1e-2;
    std::size_t min_len = 64;
    std::size_t max_len = 8192;
    std::size_t target_len = 8192;
    std::optional<double> target_angle_deg; // absent: optimize per observation angle
};

struct LinkBlock {
    double symbol_rate_hz = 2e6;
    std::size_t samples_per_chip = 4;
    std::vector<double> snr_db = {0.0, 2.0, 4.0, 6.0, 8.0};
    std::uint64_t n_bits = 200000;
    double thermal_snr_db = 35.0;
};

struct PsdBlock {
    std::size_t samples_per_chip = 8;
    std::size_t segment_chips = 128;
    std::size_t n_segments = 64;
    double db_floor = -120.0;
};

struct JamBlock {
    double jammer_excess_db = 20.0;
    std::vector<double> sinr_db;      // empty: single point per jammer angle
    double jammer_bandwidth_hz = 0.0; // 0: white at the simulation sample rate
};

struct ScenarioConfig {
    std::string command;
    ArrayBlock array;
    SequenceBlock sequence;
    LinkBlock link;
    PsdBlock psd;
    JamBlock jam;
    std::optional<std::vector<double>> angles_deg;
    std::optional<std::vector<double>> pattern_angles_deg;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string config_text; // raw bytes, hashed into the manifest
};

// Parses and validates a JSON scenario document. command comes from the CLI
// and must agree with an optional "command" field in the document.
ScenarioConfig parse_config(const std::string& json_text, const std::string& command);

// Executes the scenario and atomically populates out_dir with CSV, SVG,
// sequence and manifest artifacts.
void run_scenario(const ScenarioConfig& cfg, const std::filesystem::path& out_dir,
                  int n_threads);

// Renders one of the known CSV schemas ("psd" or "ber") as an SVG, with
// optional extra overlay series.
std::string emit_plot(const std::string& csv_text, const std::string& kind,
                      const PlotSpec& spec, const std::vector<Series>& extra = {});

// Full command-line entry point; returns the process exit code.
int cli_main(const std::vector<std::string>& args);

} // namespace sltm::cli
