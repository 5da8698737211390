#include "sideband/io.hpp"

#include "sideband/errors.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace sideband {

std::string sha256_hex(const std::string& data)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
        throw std::runtime_error("SHA-256 computation failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i)
        os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

std::string file_sha256(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    out << std::setprecision(17);
    return out;
}

} // namespace

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& s)
{
    auto out = open_out(path);
    out << "# offset_hz,value_quanta\n";
    for (std::size_t i = 0; i < s.size(); ++i)
        out << to_hz(s.offset(i)) << ',' << s.value(i) << '\n';
}

void write_components_csv(const std::filesystem::path& path,
                          const std::vector<std::pair<std::string, Spectrum>>& parts)
{
    auto out = open_out(path);
    out << "# offset_hz,value_quanta,component\n";
    for (const auto& [name, s] : parts)
        for (std::size_t i = 0; i < s.size(); ++i)
            out << to_hz(s.offset(i)) << ',' << s.value(i) << ',' << name << '\n';
}

std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(
    const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open '" + path.string() + "'");
    std::vector<double> a, b;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        double x = 0.0, y = 0.0;
        char comma = 0;
        std::istringstream is(line);
        if (!(is >> x >> comma >> y) || comma != ',')
            throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                              ": expected two comma-separated numbers");
        a.push_back(x);
        b.push_back(y);
    }
    return {std::move(a), std::move(b)};
}

Spectrum read_spectrum_csv(const std::filesystem::path& path, double reference)
{
    auto [f, v] = read_two_column_csv(path);
    for (double& x : f)
        x = from_hz(x) - reference;
    return Spectrum(std::move(f), std::move(v));
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

nlohmann::json RunManifest::to_json() const
{
    nlohmann::json j = {{"command", command},
                        {"config_hash", config_hash},
                        {"outputs", outputs},
                        {"tool_version", tool_version}};
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    return j;
}

} // namespace sideband
