#pragma once

#include "sideband/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sideband {

std::string sha256_hex(const std::string& data);
std::string file_sha256(const std::filesystem::path& path);

// "# offset_hz,value_quanta", offsets divided by 2 pi.
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s);

// Long format with a component label per row.
void write_components_csv(const std::filesystem::path& path,
                          const std::vector<std::pair<std::string, Spectrum>>& parts);

// Two numeric columns; lines starting with '#' are skipped. Throws ConfigError.
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::filesystem::path& path);

// Spectrum file in "# freq_hz,value" form, frequencies converted to rad/s
// offsets from `reference` (rad/s).
Spectrum read_spectrum_csv(const std::filesystem::path& path, double reference = 0.0);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

struct RunManifest {
    std::string command;
    std::string config_hash;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> outputs;
    std::string tool_version;

    nlohmann::json to_json() const;
};

inline constexpr const char* tool_version = "0.1.0";

} // namespace sideband
