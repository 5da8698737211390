#include "commands.hpp"

#include "sideband/errors.hpp"
#include "sideband/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

namespace {

// 0 ok, 2 configuration, 3 validity or stability gate, 4 numerical failure
int exit_code(const sideband::Error& e)
{
    using namespace sideband;
    if (dynamic_cast<const ConfigError*>(&e))
        return 2;
    if (dynamic_cast<const ValidityError*>(&e) || dynamic_cast<const InstabilityError*>(&e) ||
        dynamic_cast<const UnbalancedError*>(&e) || dynamic_cast<const StepSizeError*>(&e))
        return 3;
    return 4;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace sideband::cli;
    CLI::App app{"Sideband asymmetry spectra, Langevin oracle and calibration"};
    app.set_version_flag("--version", sideband::tool_version);
    app.require_subcommand(1);

    SpectrumArgs sa;
    auto* spectrum = app.add_subcommand("spectrum", "Write an analytic output spectrum");
    spectrum->add_option("config", sa.config, "JSON configuration")->required()->check(CLI::ExistingFile);
    spectrum->add_option("--kind", sa.kind, "sym | normal")->capture_default_str();
    spectrum->add_option("--mode", sa.mode, "single | multitone | full-rwa")->capture_default_str();
    spectrum->add_option("--out", sa.out, "output directory")->capture_default_str();

    ConfigArgs asym_args;
    auto* asymmetry = app.add_subcommand("asymmetry", "Integrated sideband imbalance report");
    asymmetry->add_option("config", asym_args.config)->required()->check(CLI::ExistingFile);
    asymmetry->add_option("--out", asym_args.out)->capture_default_str();

    ConfigArgs nc_args;
    auto* noise = app.add_subcommand("noise-constraint", "Heisenberg noise-constraint report");
    noise->add_option("config", nc_args.config)->required()->check(CLI::ExistingFile);
    noise->add_option("--out", nc_args.out)->capture_default_str();

    OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle-compare", "Langevin Monte-Carlo against analytic spectra");
    oracle->add_option("config", oa.config)->check(CLI::ExistingFile);
    oracle->add_option("--canonical", oa.canonical,
                       "red-probe | blue-probe | balanced-pair | pair-cooling | thermal-squashing");
    oracle->add_option("--seed", oa.seed)->capture_default_str();
    oracle->add_option("--trajectories", oa.trajectories)->capture_default_str();
    oracle->add_option("--segments", oa.segments, "total Welch segments")->capture_default_str();
    oracle->add_option("--max-steps", oa.max_steps, "refuse runs needing more integration steps");
    oracle->add_option("--out", oa.out)->capture_default_str();

    CalibrateArgs ca;
    auto* calibrate = app.add_subcommand("calibrate", "Calibration chain on CSV data or synthetic data");
    calibrate->add_option("data_dir", ca.data_dir)->check(CLI::ExistingDirectory);
    calibrate->add_flag("--synthetic", ca.synthetic);
    calibrate->add_option("--config", ca.config, "device config for --synthetic")->check(CLI::ExistingFile);
    calibrate->add_option("--preset", ca.preset)->capture_default_str();
    calibrate->add_option("--noise", ca.noise, "relative measurement noise")->capture_default_str();
    calibrate->add_option("--seed", ca.seed)->capture_default_str();
    calibrate->add_option("--emit-data", ca.emit_data, "write the synthetic measurements as CSV");
    calibrate->add_option("--out", ca.out)->capture_default_str();

    PresetArgs pa;
    auto* presets = app.add_subcommand("preset", "Print a shipped parameter set");
    presets->add_option("name", pa.name, "main-text | si-figure")->required();
    presets->add_option("--out", pa.out, "also write to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*spectrum)
            cmd_spectrum(sa);
        else if (*asymmetry)
            cmd_asymmetry(asym_args);
        else if (*noise)
            cmd_noise_constraint(nc_args);
        else if (*oracle)
            cmd_oracle_compare(oa);
        else if (*calibrate)
            cmd_calibrate(ca);
        else if (*presets)
            cmd_preset(pa);
    } catch (const sideband::Error& e) {
        std::cerr << e.what() << '\n';
        return exit_code(e);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "ConfigError: " << e.what() << '\n';
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "ConfigError: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
