#pragma once

#include "sideband/langevin.hpp"
#include "sideband/model.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sideband {

struct GridSpec {
    double lo = 0.0; // rad/s offsets
    double hi = 0.0;
    std::size_t n = 0;
};

struct OracleSpec {
    SimConfig sim;
    double window = 0.0; // rad/s, 0 keeps every bin
};

// Fully resolved run configuration.
struct Setup {
    SystemParams system;
    BathSpec baths;
    ToneConfig tones;
    std::optional<GridSpec> grid;
    std::optional<OracleSpec> oracle;
};

// Frequencies are written in Hz; the reader converts to rad/s. Tone detunings
// may be omitted for probe and cooling roles and are then placed from delta_hz
// and delta_c_hz. Throws ConfigError on missing or malformed fields.
Setup setup_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Setup& s);

Setup load_setup(const std::filesystem::path& path);

std::vector<std::string> preset_names();
Setup preset(const std::string& name);

// SHA-256 of the canonical dump of the resolved configuration.
std::string config_hash(const Setup& s);

} // namespace sideband
