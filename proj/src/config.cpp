#include "sideband/config.hpp"

#include "sideband/errors.hpp"
#include "sideband/io.hpp"

#include <cmath>
#include <fstream>

namespace sideband {

using nlohmann::json;

namespace {

double number(const json& j, const char* key)
{
    if (!j.contains(key))
        throw ConfigError(std::string("missing field '") + key + "'");
    if (!j.at(key).is_number())
        throw ConfigError(std::string("field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback)
{
    return j.contains(key) ? number(j, key) : fallback;
}

std::size_t count(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 0)
        throw ConfigError(std::string("field '") + key + "' must be a non-negative integer");
    return j.at(key).get<std::size_t>();
}

const json& section(const json& j, const char* key)
{
    if (!j.contains(key) || !j.at(key).is_object())
        throw ConfigError(std::string("missing section '") + key + "'");
    return j.at(key);
}

double placed_detuning(ToneRole role, const SystemParams& p, double delta, double delta_c)
{
    switch (role) {
    case ToneRole::red_probe:
        return -(p.omega_m + delta);
    case ToneRole::blue_probe:
        return p.omega_m + delta;
    case ToneRole::cooling:
        return -(p.omega_m + delta_c);
    case ToneRole::generic:
        break;
    }
    throw ConfigError("generic tones need an explicit detuning_hz");
}

} // namespace

Setup setup_from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("configuration must be a JSON object");
    Setup s;

    const json& sys = section(j, "system");
    SystemParams& p = s.system;
    p.omega_c = from_hz(number(sys, "omega_c_hz"));
    p.omega_m = from_hz(number(sys, "omega_m_hz"));
    p.g0 = from_hz(number(sys, "g0_hz"));
    p.kappa_L = from_hz(number(sys, "kappa_L_hz"));
    p.kappa_R = from_hz(number(sys, "kappa_R_hz"));
    p.kappa_I = from_hz(number_or(sys, "kappa_I_hz", 0.0));
    p.gamma_m = from_hz(number(sys, "gamma_m_hz"));
    if (sys.contains("x_zp_m"))
        p.x_zp = number(sys, "x_zp_m");
    p.validate();

    BathSpec& b = s.baths;
    if (j.contains("baths")) {
        const json& bj = section(j, "baths");
        b.n_R = number_or(bj, "n_R", 0.0);
        b.n_L = number_or(bj, "n_L", 0.0);
        b.n_I = number_or(bj, "n_I", 0.0);
        b.n_m = number_or(bj, "n_m", 0.0);
        b.alpha_R = number_or(bj, "alpha_R", 1.0);
        b.alpha_L = number_or(bj, "alpha_L", 1.0);
        b.alpha_I = number_or(bj, "alpha_I", 1.0);
        b.beta = number_or(bj, "beta", 1.0);
    }
    b.validate();

    ToneConfig& c = s.tones;
    c.delta = from_hz(number_or(j, "delta_hz", 0.0));
    c.delta_c = from_hz(number_or(j, "delta_c_hz", 0.0));
    if (j.contains("allow_close_sidebands")) {
        if (!j.at("allow_close_sidebands").is_boolean())
            throw ConfigError("allow_close_sidebands must be a boolean");
        c.allow_close_sidebands = j.at("allow_close_sidebands").get<bool>();
    }
    if (j.contains("tones")) {
        if (!j.at("tones").is_array())
            throw ConfigError("tones must be an array");
        for (const json& t : j.at("tones")) {
            if (!t.is_object() || !t.contains("role") || !t.at("role").is_string())
                throw ConfigError("each tone needs a string role");
            const ToneRole role = tone_role_from_string(t.at("role").get<std::string>());
            const double det = t.contains("detuning_hz")
                                   ? from_hz(number(t, "detuning_hz"))
                                   : placed_detuning(role, p, c.delta, c.delta_c);
            const bool by_n = t.contains("n_p");
            if (by_n == t.contains("G_hz"))
                throw ConfigError("each tone needs exactly one of n_p or G_hz");
            c.tones.push_back(by_n ? ToneSpec::from_photons(role, det, number(t, "n_p"))
                                   : ToneSpec::from_coupling(role, det, from_hz(number(t, "G_hz"))));
        }
    }
    c.validate(p);

    if (j.contains("grid")) {
        const json& g = section(j, "grid");
        s.grid = GridSpec{from_hz(number(g, "lo_hz")), from_hz(number(g, "hi_hz")), count(g, "n")};
        if (!(s.grid->hi > s.grid->lo) || s.grid->n < 2)
            throw ConfigError("grid needs lo_hz < hi_hz and n >= 2");
    }
    if (j.contains("oracle")) {
        const json& o = section(j, "oracle");
        OracleSpec os;
        os.sim.dt = number(o, "dt_s");
        os.sim.n_steps = count(o, "n_steps");
        os.sim.n_trajectories = o.contains("n_trajectories") ? count(o, "n_trajectories") : 1;
        os.sim.seed = o.contains("seed") ? o.at("seed").get<std::uint64_t>() : 0;
        os.sim.burn_in = o.contains("burn_in") ? count(o, "burn_in") : 0;
        os.sim.psd_segments = o.contains("psd_segments") ? count(o, "psd_segments") : 1;
        os.window = from_hz(number_or(o, "window_hz", 0.0));
        s.oracle = os;
    }
    return s;
}

json to_json(const Setup& s)
{
    const SystemParams& p = s.system;
    json j;
    j["system"] = {{"omega_c_hz", to_hz(p.omega_c)}, {"omega_m_hz", to_hz(p.omega_m)},
                   {"g0_hz", to_hz(p.g0)},           {"kappa_L_hz", to_hz(p.kappa_L)},
                   {"kappa_R_hz", to_hz(p.kappa_R)}, {"kappa_I_hz", to_hz(p.kappa_I)},
                   {"gamma_m_hz", to_hz(p.gamma_m)}};
    if (p.x_zp)
        j["system"]["x_zp_m"] = *p.x_zp;
    const BathSpec& b = s.baths;
    j["baths"] = {{"n_R", b.n_R},         {"n_L", b.n_L},         {"n_I", b.n_I},
                  {"n_m", b.n_m},         {"alpha_R", b.alpha_R}, {"alpha_L", b.alpha_L},
                  {"alpha_I", b.alpha_I}, {"beta", b.beta}};
    j["tones"] = json::array();
    for (const auto& t : s.tones.tones) {
        json tj = {{"role", std::string(to_string(t.role()))}, {"detuning_hz", to_hz(t.detuning())}};
        if (t.given_as_photons())
            tj["n_p"] = t.photon_number(p);
        else
            tj["G_hz"] = to_hz(t.coupling(p));
        j["tones"].push_back(tj);
    }
    j["delta_hz"] = to_hz(s.tones.delta);
    j["delta_c_hz"] = to_hz(s.tones.delta_c);
    j["allow_close_sidebands"] = s.tones.allow_close_sidebands;
    if (s.grid)
        j["grid"] = {{"lo_hz", to_hz(s.grid->lo)}, {"hi_hz", to_hz(s.grid->hi)}, {"n", s.grid->n}};
    if (s.oracle) {
        const SimConfig& sim = s.oracle->sim;
        j["oracle"] = {{"dt_s", sim.dt},
                       {"n_steps", sim.n_steps},
                       {"n_trajectories", sim.n_trajectories},
                       {"seed", sim.seed},
                       {"burn_in", sim.burn_in},
                       {"psd_segments", sim.psd_segments},
                       {"window_hz", to_hz(s.oracle->window)}};
    }
    return j;
}

Setup load_setup(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open configuration '" + path.string() + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("malformed JSON in '" + path.string() + "': " + e.what());
    }
    try {
        return setup_from_json(j);
    } catch (const json::exception& e) {
        throw ConfigError("bad value in '" + path.string() + "': " + e.what());
    }
}

std::vector<std::string> preset_names() { return {"main-text", "si-figure"}; }

Setup preset(const std::string& name)
{
    Setup s;
    SystemParams& p = s.system;
    BathSpec& b = s.baths;
    p.omega_c = from_hz(5.4e9);
    p.omega_m = from_hz(4.0e6);
    p.g0 = from_hz(16.0);
    p.kappa_R = from_hz(450e3);
    p.gamma_m = from_hz(10.0);
    const double delta = from_hz(5e3);
    const double delta_c = from_hz(30e3);

    if (name == "main-text") {
        p.kappa_L = from_hz(150e3);
        p.kappa_I = from_hz(260e3);
        b.n_R = 0.34;
        b.n_m = bose_occupation(p.omega_m, 0.020);
        s.tones = three_tone(p, {true, 1e5}, {true, 1e5}, ProbeDrive{true, 4e5}, delta, delta_c);
    } else if (name == "si-figure") {
        p.kappa_L = from_hz(155e3);
        p.kappa_I = from_hz(265e3);
        b.n_R = 0.3;
        b.n_L = 0.3;
        const double n_c = 0.24;
        b.n_I = (n_c * p.kappa() - p.kappa_R * b.n_R - p.kappa_L * b.n_L) / p.kappa_I;
        const double gamma_cool = from_hz(350.0);
        const double gamma_M = p.gamma_m + gamma_cool;
        const double n_M = 100.0;
        b.n_m = (gamma_M * n_M - gamma_cool * n_c) / p.gamma_m;
        const double G_cool = std::sqrt(gamma_cool * p.kappa() / 4.0);
        s.tones = three_tone(p, {true, 1e5}, {true, 1e5}, ProbeDrive{false, G_cool}, delta, delta_c);
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    p.validate();
    b.validate();
    s.tones.validate(p);
    return s;
}

std::string config_hash(const Setup& s) { return sha256_hex(to_json(s).dump()); }

} // namespace sideband
