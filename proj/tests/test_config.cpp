#include "sideband/config.hpp"
#include "sideband/errors.hpp"
#include "sideband/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace sideband;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal()
{
    return json::parse(R"({
      "system": {"omega_c_hz": 5.4e9, "omega_m_hz": 4e6, "g0_hz": 16,
                 "kappa_L_hz": 150e3, "kappa_R_hz": 450e3, "kappa_I_hz": 260e3,
                 "gamma_m_hz": 10},
      "baths": {"n_R": 0.34, "n_m": 100},
      "delta_hz": 5000,
      "tones": [{"role": "red_probe", "n_p": 1e5}, {"role": "blue_probe", "G_hz": 5000}]
    })");
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "sideband_test_config";
    fs::create_directories(dir);
    return dir / name;
}

} // namespace

TEST_CASE("configuration parsing")
{
    const Setup s = setup_from_json(minimal());
    CHECK(s.system.omega_c == doctest::Approx(from_hz(5.4e9)));
    CHECK(s.system.kappa() == doctest::Approx(from_hz(860e3)));
    CHECK(s.baths.n_R == 0.34);
    CHECK(s.baths.alpha_L == 1.0);
    REQUIRE(s.tones.tones.size() == 2);
    CHECK(s.tones.tones[0].detuning() == doctest::Approx(-from_hz(4e6 + 5e3)));
    CHECK(s.tones.tones[1].detuning() == doctest::Approx(from_hz(4e6 + 5e3)));
    CHECK(s.tones.tones[1].coupling(s.system) == doctest::Approx(from_hz(5000.0)));
    CHECK_FALSE(s.grid);
    CHECK_FALSE(s.oracle);
}

TEST_CASE("round trip through JSON")
{
    json j = minimal();
    j["grid"] = {{"lo_hz", -1e4}, {"hi_hz", 1e4}, {"n", 101}};
    j["oracle"] = {{"dt_s", 1e-7}, {"n_steps", 1000000}, {"seed", 42}, {"psd_segments", 10}};
    j["system"]["x_zp_m"] = 4e-15;
    const Setup a = setup_from_json(j);
    const json once = to_json(a);
    const Setup b = setup_from_json(once);
    CHECK(to_json(b) == once);
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 64);
    REQUIRE(b.oracle);
    CHECK(b.oracle->sim.seed == 42);
    CHECK(*b.system.x_zp == 4e-15);

    json changed = once;
    changed["baths"]["n_R"] = 0.35;
    CHECK(config_hash(setup_from_json(changed)) != config_hash(a));

    for (const auto& name : preset_names()) {
        const Setup p = preset(name);
        CHECK(to_json(setup_from_json(to_json(p))) == to_json(p));
    }
}

TEST_CASE("malformed configurations")
{
    auto rejects = [](json j) { CHECK_THROWS_AS(setup_from_json(j), ConfigError); };
    rejects(json::array());
    {
        json j = minimal();
        j["system"].erase("g0_hz");
        rejects(j);
    }
    {
        json j = minimal();
        j["system"]["g0_hz"] = "sixteen";
        rejects(j);
    }
    {
        json j = minimal();
        j["baths"]["n_m"] = -1.0;
        rejects(j);
    }
    {
        json j = minimal();
        j["tones"][0]["G_hz"] = 1.0;
        rejects(j);
    }
    {
        json j = minimal();
        j["tones"][0]["role"] = "purple";
        rejects(j);
    }
    {
        json j = minimal();
        j["tones"] = json::array({{{"role", "generic"}, {"n_p", 1.0}}});
        rejects(j);
    }
    {
        json j = minimal();
        j["tones"][0]["detuning_hz"] = -4.0e6;
        rejects(j);
    }
    {
        json j = minimal();
        j["grid"] = {{"lo_hz", 1.0}, {"hi_hz", -1.0}, {"n", 10}};
        rejects(j);
    }
    {
        json j = minimal();
        j["delta_hz"] = 50.0;
        CHECK_THROWS_AS(setup_from_json(j), ValidityError);
        j["allow_close_sidebands"] = true;
        j["tones"][0].erase("n_p");
        j["tones"][0]["G_hz"] = 5000;
        CHECK_NOTHROW(setup_from_json(j));
    }

    const fs::path bad = scratch("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(load_setup(bad), ConfigError);
    CHECK_THROWS_AS(load_setup(scratch("missing.json")), ConfigError);
    CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("shipped preset files match the built-in presets")
{
    for (const auto& name : preset_names()) {
        const fs::path file = fs::path(SIDEBAND_SOURCE_DIR) / "presets" / (name + ".json");
        REQUIRE(fs::exists(file));
        CHECK(to_json(load_setup(file)) == to_json(preset(name)));
    }
}

TEST_CASE("presets")
{
    const Setup si = preset("si-figure");
    CHECK(si.baths.n_c(si.system) == doctest::Approx(0.24).epsilon(1e-12));
    const DampingBudget d = damping_budget(si.system, si.baths, si.tones);
    CHECK(to_hz(d.gamma_M) == doctest::Approx(360.0).epsilon(1e-12));
    CHECK(d.n_M == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(to_hz(si.system.kappa()) == doctest::Approx(870e3));

    const Setup mt = preset("main-text");
    CHECK(to_hz(mt.system.kappa()) == doctest::Approx(860e3));
    CHECK(mt.tones.tones.size() == 3);
}

TEST_CASE("hashing and CSV helpers")
{
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");

    const fs::path csv = scratch("spec.csv");
    const Spectrum s({-two_pi * 2.0, 0.0, two_pi * 3.5}, {0.5, 1.25, -0.125});
    write_spectrum_csv(csv, s);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "# offset_hz,value_quanta");
    const Spectrum back = read_spectrum_csv(csv);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.offset(i) == doctest::Approx(s.offset(i)).epsilon(1e-12));
        CHECK(back.value(i) == doctest::Approx(s.value(i)).epsilon(1e-12));
    }
    const Spectrum shifted = read_spectrum_csv(csv, two_pi * 10.0);
    CHECK(shifted.offset(1) == doctest::Approx(-two_pi * 10.0));
    CHECK(file_sha256(csv).size() == 64);

    const fs::path broken = scratch("broken.csv");
    std::ofstream(broken) << "# x,y\n1.0,2.0\nthree,4\n";
    CHECK_THROWS_AS(read_two_column_csv(broken), ConfigError);

    RunManifest m{"spectrum", "abc", std::nullopt, {"spectrum.csv"}, tool_version};
    const json mj = m.to_json();
    CHECK(mj["seed"].is_null());
    CHECK(mj["outputs"][0] == "spectrum.csv");
    CHECK(mj["tool_version"] == tool_version);
}
