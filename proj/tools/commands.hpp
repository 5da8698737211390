#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace sideband::cli {

struct SpectrumArgs {
    std::filesystem::path config;
    std::string kind = "sym";
    std::string mode = "multitone";
    std::filesystem::path out = "sideband_out";
};

struct ConfigArgs {
    std::filesystem::path config;
    std::filesystem::path out = "sideband_out";
};

struct OracleArgs {
    std::filesystem::path config;
    std::string canonical;
    std::uint64_t seed = 1;
    std::size_t trajectories = 1;
    std::size_t segments = 2000;
    std::optional<std::size_t> max_steps;
    std::filesystem::path out = "sideband_out";
};

struct CalibrateArgs {
    std::filesystem::path data_dir;
    bool synthetic = false;
    std::filesystem::path config;
    std::string preset = "main-text";
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::filesystem::path emit_data;
    std::filesystem::path out = "sideband_out";
};

struct PresetArgs {
    std::string name;
    std::filesystem::path out;
};

// Each command prints its JSON report to stdout and writes artifacts plus
// manifest.json under `out`.
void cmd_spectrum(const SpectrumArgs& a);
void cmd_asymmetry(const ConfigArgs& a);
void cmd_noise_constraint(const ConfigArgs& a);
void cmd_oracle_compare(const OracleArgs& a);
void cmd_calibrate(const CalibrateArgs& a);
void cmd_preset(const PresetArgs& a);

} // namespace sideband::cli
