#include "commands.hpp"

#include "sideband/calibration.hpp"
#include "sideband/config.hpp"
#include "sideband/errors.hpp"
#include "sideband/io.hpp"
#include "sideband/langevin.hpp"
#include "sideband/linear_response.hpp"
#include "sideband/multitone.hpp"
#include "sideband/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

namespace sideband::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class Artifacts {
public:
    Artifacts(fs::path out, std::string command, std::string hash, std::optional<std::uint64_t> seed)
        : out_(std::move(out))
    {
        manifest_.command = std::move(command);
        manifest_.config_hash = std::move(hash);
        manifest_.seed = seed;
        manifest_.tool_version = tool_version;
        fs::create_directories(out_);
    }

    fs::path file(const std::string& name)
    {
        manifest_.outputs.push_back(name);
        return out_ / name;
    }

    void finish(const std::string& report_name, const json& report)
    {
        write_json(file(report_name), report);
        write_json(out_ / "manifest.json", manifest_.to_json());
        std::cout << report.dump(2) << '\n';
    }

private:
    fs::path out_;
    RunManifest manifest_;
};

SpectrumKind parse_kind(const std::string& k)
{
    if (k == "sym" || k == "symmetrized")
        return SpectrumKind::symmetrized;
    if (k == "normal" || k == "normal-ordered")
        return SpectrumKind::normal_ordered;
    throw ConfigError("--kind must be sym or normal, got '" + k + "'");
}

DetuningSign side_of(const ToneSpec& t) { return t.red_side() ? DetuningSign::red : DetuningSign::blue; }

const ToneSpec& single_tone(const ToneConfig& c)
{
    if (c.tones.size() != 1)
        throw ConfigError("single-tone mode needs exactly one tone, config has " +
                          std::to_string(c.tones.size()));
    return c.tones.front();
}

// Tone used by the linear-response report: the lone tone, else the red probe.
const ToneSpec& detector_tone(const ToneConfig& c)
{
    if (c.tones.size() == 1)
        return c.tones.front();
    if (const ToneSpec* t = c.find(ToneRole::red_probe))
        return *t;
    throw ConfigError("noise-constraint needs a single tone or a red_probe");
}

std::vector<double> grid_or(const Setup& s, std::vector<double> fallback)
{
    if (s.grid)
        return linear_grid(s.grid->lo, s.grid->hi, s.grid->n);
    return fallback;
}

json cplx_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

} // namespace

void cmd_spectrum(const SpectrumArgs& a)
{
    const Setup s = load_setup(a.config);
    const SpectrumKind kind = parse_kind(a.kind);
    const SystemParams& p = s.system;
    Artifacts art(a.out, "spectrum --mode " + a.mode + " --kind " + a.kind, config_hash(s),
                  std::nullopt);
    json report = {{"mode", a.mode}, {"kind", a.kind}};

    if (a.mode == "single") {
        const ToneSpec& t = single_tone(s.tones);
        const DetuningSign sign = side_of(t);
        const double gt = single_tone_gamma_tot(p, t, sign);
        const double half = std::min(20.0 * gt, 0.24 * p.kappa());
        const auto grid = grid_or(s, linear_grid(-half, half, 2001));
        const Spectrum sp = single_tone_spectrum(p, s.baths, t, sign, kind, grid);
        const SingleToneLineshape ls = single_tone_lineshape(p, s.baths, t, sign, kind);
        write_spectrum_csv(art.file("spectrum.csv"), sp);
        report["floor"] = ls.floor;
        report["gamma_tot_hz"] = to_hz(ls.gamma_tot);
        report["weight"] = ls.weight();
    } else if (a.mode == "multitone") {
        const auto grid = grid_or(s, default_multitone_grid(s.tones.delta));
        const MultitoneSpectra ms = multitone_spectra(p, s.baths, s.tones, kind, grid);
        std::vector<double> total(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
            total[i] = ms.anti_stokes.value(i) + ms.stokes.value(i) - ms.floor;
        write_spectrum_csv(art.file("spectrum.csv"), Spectrum(grid, total));
        write_components_csv(art.file("components.csv"),
                             {{"anti_stokes", ms.anti_stokes},
                              {"stokes", ms.stokes},
                              {"floor", Spectrum(grid, std::vector<double>(grid.size(), ms.floor))}});
        report["floor"] = ms.floor;
        report["gamma_tot_hz"] = to_hz(ms.gamma_tot);
        report["anti_stokes_weight"] = ms.anti_stokes_weight;
        report["stokes_weight"] = ms.stokes_weight;
        report["peak_offsets_hz"] = {-to_hz(s.tones.delta), to_hz(s.tones.delta)};
    } else if (a.mode == "full-rwa") {
        if (kind != SpectrumKind::symmetrized)
            throw ConfigError("full-rwa spectra are symmetrized only");
        const auto grid = grid_or(s, default_multitone_grid(s.tones.delta));
        const TwinPeakComponents tp = full_rwa_components(p, s.baths, s.tones, grid);
        write_spectrum_csv(art.file("spectrum.csv"), tp.total);
        write_components_csv(art.file("components.csv"), {{"total", tp.total},
                                                          {"floor", tp.floor},
                                                          {"mixing", tp.mixing},
                                                          {"stokes", tp.stokes},
                                                          {"anti_stokes", tp.anti_stokes}});
        report["peak_ratio_correction"] = {
            {"stokes", peak_ratio_correction(p, s.baths, s.tones, Sideband::stokes)},
            {"anti_stokes", peak_ratio_correction(p, s.baths, s.tones, Sideband::anti_stokes)}};
    } else {
        throw ConfigError("--mode must be single, multitone or full-rwa, got '" + a.mode + "'");
    }
    art.finish("report.json", report);
}

void cmd_asymmetry(const ConfigArgs& a)
{
    const Setup s = load_setup(a.config);
    const SystemParams& p = s.system;
    const BathSpec& b = s.baths;
    Artifacts art(a.out, "asymmetry", config_hash(s), std::nullopt);
    json report;
    report["n_eff"] = b.n_eff(p);
    if (s.tones.has_probe_pair()) {
        const std::vector<double> at{-s.tones.delta, s.tones.delta};
        const MultitoneSpectra sym = multitone_spectra(p, b, s.tones, SpectrumKind::symmetrized, at);
        const MultitoneSpectra nrm = multitone_spectra(p, b, s.tones, SpectrumKind::normal_ordered, at);
        report["delta_I_sym"] = sym.stokes_weight - sym.anti_stokes_weight;
        report["delta_I_normal"] = nrm.stokes_weight - nrm.anti_stokes_weight;
        json rm = {{"n_plus", sym.n_plus},
                   {"n_minus", sym.n_minus},
                   {"offset_term", 2.0 * b.n_eff(p) + 1.0}};
        rm["ratio"] = sym.n_plus != 0.0 ? json(sideband_ratio_model(sym.n_plus, b.n_eff(p))) : json(nullptr);
        report["ratio_model"] = rm;
    } else {
        const ToneSpec& t = single_tone(s.tones);
        report["delta_I_sym"] = integrated_asymmetry(p, b, t, SpectrumKind::symmetrized);
        report["delta_I_normal"] = integrated_asymmetry(p, b, t, SpectrumKind::normal_ordered);
        report["ratio_model"] = nullptr;
    }
    art.finish("asymmetry.json", report);
}

void cmd_noise_constraint(const ConfigArgs& a)
{
    const Setup s = load_setup(a.config);
    const ToneSpec& t = detector_tone(s.tones);
    const NoiseConstraint nc = noise_constraint(s.system, s.baths, t, side_of(t));
    Artifacts art(a.out, "noise-constraint", config_hash(s), std::nullopt);
    const json report = {{"S_zF", cplx_json(nc.detector.S_zF)},
                         {"S_zz", nc.S_zz},
                         {"S_FF", nc.detector.S_FF},
                         {"lhs", nc.report.lhs},
                         {"rhs", nc.report.rhs},
                         {"gap", nc.report.gap},
                         {"satisfied", nc.report.satisfied}};
    art.finish("noise_constraint.json", report);
}

void cmd_oracle_compare(const OracleArgs& a)
{
    if (a.config.empty() == a.canonical.empty())
        throw ConfigError("give either a config file or --canonical NAME");
    if (a.trajectories == 0 || a.segments == 0)
        throw ConfigError("--trajectories and --segments must be positive");

    Setup s;
    double window = 0.0;
    SimConfig sim;
    if (!a.canonical.empty()) {
        const CanonicalCase cc = canonical_case(a.canonical, a.seed, 1);
        s.system = cc.params;
        s.baths = cc.baths;
        s.tones = cc.tones;
        window = cc.window;
    } else {
        s = load_setup(a.config);
    }
    if (s.oracle) {
        sim = s.oracle->sim;
        window = s.oracle->window;
    } else {
        const std::size_t per = (a.segments + a.trajectories - 1) / a.trajectories;
        sim = default_sim_config(s.system, s.tones, a.seed, per);
        sim.n_trajectories = a.trajectories;
        if (window == 0.0) {
            const double gt = validate_stability(s.system, s.tones);
            window = std::max(s.tones.delta, s.tones.delta_c) + 40.0 * gt;
        }
    }
    sim.seed = a.seed;
    if (a.max_steps && sim.n_steps * sim.n_trajectories > *a.max_steps)
        throw StepSizeError("run needs " + std::to_string(sim.n_steps * sim.n_trajectories) +
                            " steps, above --max-steps " + std::to_string(*a.max_steps));

    const OracleRun run = run_oracle(s.system, s.baths, s.tones, sim, window);
    const OracleComparison cmp = compare_with_analytic(s.system, s.baths, s.tones, run.psd);

    Artifacts art(a.out, "oracle-compare", config_hash(s), a.seed);
    write_spectrum_csv(art.file("mc_spectrum.csv"), run.psd);
    write_spectrum_csv(art.file("analytic_spectrum.csv"), cmp.analytic);

    json report = {{"config_hash", config_hash(s)},
                   {"seed", a.seed},
                   {"rng", rng_algorithm},
                   {"n_segments", run.n_segments},
                   {"segment_length", run.segment_length},
                   {"n_trajectories", sim.n_trajectories},
                   {"dt_s", sim.dt},
                   {"runtime_s", run.runtime_s},
                   {"mean_phonons", run.mean_phonons}};
    json aw, mw, re, peaks = json::array();
    for (const auto& pk : cmp.peaks) {
        aw[pk.label] = pk.analytic_weight;
        mw[pk.label] = pk.mc_weight;
        re[pk.label] = pk.rel_err;
        peaks.push_back({{"label", pk.label},
                         {"analytic_center_hz", to_hz(pk.analytic_center)},
                         {"mc_center_hz", to_hz(pk.mc_center)},
                         {"analytic_weight", pk.analytic_weight},
                         {"mc_weight", pk.mc_weight},
                         {"rel_err", pk.rel_err},
                         {"analytic_floor", pk.analytic_floor},
                         {"mc_floor", pk.mc_floor},
                         {"gamma_tot_hz", to_hz(pk.gamma_tot)}});
    }
    report["analytic_weight"] = aw;
    report["mc_weight"] = mw;
    report["rel_err"] = re;
    report["peaks"] = peaks;
    art.finish("oracle_report.json", report);
}

namespace {

json shunt_json(const ShuntFit& f)
{
    return {{"C_out_F", f.C_out}, {"C_out_sigma_F", f.C_out_sigma}, {"gain_db", f.gain_db},
            {"residual_norm", f.residual_norm}};
}

json occupation_json(const OccupationFit& f)
{
    return {{"n_R", f.n_R},           {"n_R_sigma", f.n_R_sigma},
            {"S_hemt_W_per_Hz", f.S_hemt}, {"S_hemt_sigma", f.S_hemt_sigma},
            {"residual_norm", f.residual_norm}};
}

json line_json(const LineFit& f)
{
    return {{"intercept", f.intercept}, {"slope", f.slope}, {"intercept_sigma", f.intercept_sigma},
            {"slope_sigma", f.slope_sigma}};
}

void emit_data(const fs::path& dir, const Setup& s, const SyntheticOptions& opt,
               const ClosureReport& r)
{
    fs::create_directories(dir);
    json setup = to_json(s);
    setup["calibration"] = {{"lambda_conv", opt.lambda_conv},
                            {"gain_c", opt.gain_c},
                            {"gain_plus", opt.gain_plus},
                            {"gain_minus", opt.gain_minus},
                            {"delta_thermometry_hz", to_hz(opt.delta_thermometry)},
                            {"R_L", 50.0}};
    write_json(dir / "setup.json", setup);
    std::ofstream s21(dir / "s21.csv");
    s21.precision(17);
    s21 << "# freq_hz,value\n";
    for (std::size_t i = 0; i < r.s21_trace.size(); ++i)
        s21 << to_hz(r.s21_trace.offset(i)) << ',' << r.s21_trace.value(i) << '\n';
    std::ofstream fl(dir / "floor.csv");
    fl.precision(17);
    fl << "# freq_hz,value\n";
    for (std::size_t i = 0; i < r.floor_spectrum.size(); ++i)
        fl << to_hz(r.floor_spectrum.offset(i)) << ',' << r.floor_spectrum.value(i) << '\n';
    const auto& sw = r.thermometry;
    for (const auto* side : {"plus", "minus"}) {
        std::ofstream th(dir / (std::string("thermometry_") + side + ".csv"));
        th.precision(17);
        th << "# n_m,ratio\n";
        const bool plus = std::string(side) == "plus";
        for (std::size_t i = 0; i < sw.n_m.size(); ++i)
            th << sw.n_m[i] << ','
               << (plus ? sw.P_m_plus[i] / sw.P_thru_plus[i] : sw.P_m_minus[i] / sw.P_thru_minus[i])
               << '\n';
    }
}

double field_or(const json& j, const char* key, double fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j.at(key).is_number())
        throw ConfigError(std::string("calibration field '") + key + "' must be a number");
    return j.at(key).get<double>();
}

json calibrate_data_dir(const fs::path& dir, json& inputs)
{
    const fs::path setup_path = dir / "setup.json";
    const Setup s = load_setup(setup_path);
    inputs["setup.json"] = file_sha256(setup_path);
    json cal_section = json::object();
    {
        std::ifstream in(setup_path);
        const json raw = json::parse(in);
        if (raw.contains("calibration"))
            cal_section = raw.at("calibration");
    }
    const SystemParams& p = s.system;
    const double R_L = field_or(cal_section, "R_L", 50.0);
    const double dth = from_hz(field_or(cal_section, "delta_thermometry_hz", 500.0));
    json report = {{"config_hash", config_hash(s)}};

    std::optional<ShuntFit> shunt;
    if (fs::exists(dir / "s21.csv")) {
        inputs["s21.csv"] = file_sha256(dir / "s21.csv");
        shunt = fit_shunt_capacitance(read_spectrum_csv(dir / "s21.csv"), p, R_L);
        report["shunt"] = shunt_json(*shunt);
    }
    const ShuntModel sm{shunt ? shunt->C_out : 0.0, R_L};
    const double dp = transmission_correction(p, sm, probe_frequency(p, ProbeSide::plus, dth));
    const double dm = transmission_correction(p, sm, probe_frequency(p, ProbeSide::minus, dth));
    report["delta_plus"] = dp;
    report["delta_minus"] = dm;

    if (fs::exists(dir / "floor.csv")) {
        inputs["floor.csv"] = file_sha256(dir / "floor.csv");
        if (!cal_section.contains("lambda_conv"))
            throw ConfigError("floor.csv needs calibration.lambda_conv in setup.json");
        const OccupationFit occ = fit_output_occupation(read_spectrum_csv(dir / "floor.csv"), p,
                                                        cal_section.at("lambda_conv").get<double>(),
                                                        s.baths.alpha_R);
        report["occupation"] = occupation_json(occ);
    }

    json g0s = json::object();
    for (const auto* side : {"plus", "minus"}) {
        const fs::path f = dir / (std::string("thermometry_") + side + ".csv");
        if (!fs::exists(f))
            continue;
        inputs[f.filename().string()] = file_sha256(f);
        const auto [n_m, ratio] = read_two_column_csv(f);
        const LineFit fit = fit_line(n_m, ratio);
        const bool plus = std::string(side) == "plus";
        const ThermometryChannel ch{dth, field_or(cal_section, "gain_c", 1.0),
                                    field_or(cal_section, plus ? "gain_plus" : "gain_minus", 1.0),
                                    plus ? dp : dm};
        const double g0 =
            g0_from_conversion_slope(p, ch, plus ? ProbeSide::plus : ProbeSide::minus, fit.slope);
        report[std::string("thermometry_") + side] = line_json(fit);
        report[std::string("conversion_") + side] = 1.0 / fit.slope;
        g0s[side] = to_hz(g0);
    }
    if (!g0s.empty()) {
        double sum = 0.0;
        for (const auto& [k, v] : g0s.items())
            sum += v.get<double>();
        g0s["mean"] = sum / static_cast<double>(g0s.size());
        report["g0_hz"] = g0s;
    }
    return report;
}

} // namespace

void cmd_calibrate(const CalibrateArgs& a)
{
    if (a.synthetic == !a.data_dir.empty())
        throw ConfigError("give either a data directory or --synthetic");
    if (!a.synthetic) {
        json inputs = json::object();
        json report = calibrate_data_dir(a.data_dir, inputs);
        report["inputs_sha256"] = inputs;
        Artifacts art(a.out, "calibrate " + a.data_dir.string(),
                      report.at("config_hash").get<std::string>(), std::nullopt);
        art.finish("calibration_report.json", report);
        return;
    }

    const Setup s = a.config.empty() ? preset(a.preset) : load_setup(a.config);
    SyntheticOptions opt;
    opt.noise = a.noise;
    opt.seed = a.seed;
    const ClosureReport r = run_synthetic_closure(s.system, s.baths, s.tones, opt);
    if (!a.emit_data.empty())
        emit_data(a.emit_data, s, opt, r);

    json report = {{"config_hash", config_hash(s)},
                   {"seed", a.seed},
                   {"noise", a.noise},
                   {"rng", "boost::random::mt19937_64; boost::random::normal_distribution"},
                   {"shunt", shunt_json(r.shunt)},
                   {"delta_plus", r.delta_plus},
                   {"delta_minus", r.delta_minus},
                   {"linewidth",
                    {{"gamma_m_hz", to_hz(r.linewidth.gamma_m)},
                     {"slope_rad_s_per_W", r.linewidth.slope},
                     {"g0_hz", to_hz(r.g0_linewidth)}}},
                   {"thermometry_plus", line_json(r.thermometry.fit_plus)},
                   {"thermometry_minus", line_json(r.thermometry.fit_minus)},
                   {"conversion_plus", r.conversion_plus},
                   {"conversion_minus", r.conversion_minus},
                   {"g0_hz", {{"plus", to_hz(r.g0_plus)}, {"minus", to_hz(r.g0_minus)}, {"mean", to_hz(r.g0)}}},
                   {"n_plus", r.n_plus},
                   {"n_minus", r.n_minus},
                   {"n_eff", r.n_eff},
                   {"n_eff_true", r.n_eff_true},
                   {"occupation", occupation_json(r.occupation)},
                   {"n_R_true", r.n_R_true}};
    Artifacts art(a.out, "calibrate --synthetic", config_hash(s), a.seed);
    art.finish("calibration_report.json", report);
}

void cmd_preset(const PresetArgs& a)
{
    const json j = to_json(preset(a.name));
    if (!a.out.empty())
        write_json(a.out, j);
    std::cout << j.dump(2) << '\n';
}

} // namespace sideband::cli
