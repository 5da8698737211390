#pragma once

#include "sideband/model.hpp"
#include "sideband/scattering.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace sideband {

// floor + amplitude (width/2)^2 / ((x - center)^2 + (width/2)^2), width = FWHM
struct LorentzianFit {
    double center = 0.0;
    double width = 0.0;
    double amplitude = 0.0;
    double floor = 0.0;
    double residual_norm = 0.0;
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero(); // (center, width, amplitude, floor)
    int iterations = 0;

    double at(double x) const;
    // area above the floor over d omega / 2 pi
    double weight() const { return 0.25 * amplitude * width; }
    double sigma(int i) const { return std::sqrt(covariance(i, i)); }
};

LorentzianFit fit_lorentzian(const Spectrum& spec, const std::optional<LorentzianFit>& init = {});

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double intercept_sigma = 0.0;
    double slope_sigma = 0.0;
    double residual_norm = 0.0;
};

// Weighted straight line; sigma may be empty for unit weights.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& sigma = {});

struct PowerPoint {
    double P_thru = 0.0;    // W
    double gamma_tot = 0.0; // rad/s
    double sigma = 0.0;     // rad/s, 0 for unit weight
};

struct LinewidthFit {
    double gamma_m = 0.0;
    double slope = 0.0; // rad/s per W
    double gamma_m_sigma = 0.0;
    double slope_sigma = 0.0;
};

LinewidthFit fit_linewidth_vs_power(const std::vector<PowerPoint>& points);

// plus: red probe at omega_c - (omega_m + delta); minus: blue probe above.
enum class ProbeSide { plus, minus };

struct ThermometryChannel {
    double delta = 0.0;      // probe offset from the sideband, rad/s
    double gain_c = 1.0;     // system gain at omega_c
    double gain_probe = 1.0; // system gain at the probe frequency
    double delta_corr = 0.0; // transmission correction Delta(omega_+-)
};

double probe_frequency(const SystemParams& p, ProbeSide side, double delta);
// P_m / P_thru for mechanical occupation n_m.
double thermometry_ratio(const SystemParams& p, const ThermometryChannel& ch, ProbeSide side,
                         double n_m);
double thermometry_occupation(const SystemParams& p, const ThermometryChannel& ch,
                              ProbeSide side, double ratio);
// Inverts the thermometry slope d(P_m/P_thru)/dn_m for g0.
double g0_from_conversion_slope(const SystemParams& p, const ThermometryChannel& ch,
                                ProbeSide side, double slope);

// Floor increase in units of 1/lambda.
double noise_floor_increase(const SystemParams& p, const BathSpec& b, double lambda_conv);
// ((2 kappa_R - kappa) / kappa_R) n_R
double floor_offset_correction(const SystemParams& p, const BathSpec& b);

struct SidebandLedger {
    double diff = 0.0; // n^- - n^+
    double avg = 0.0;  // (n^+ + n^-) / 2
};

SidebandLedger sideband_difference_and_average(const SystemParams& p, const BathSpec& b,
                                               const ToneConfig& c, double lambda_conv,
                                               double delta_eta);

// Undriven output noise in W/Hz at offset omega - omega_c.
double output_floor_model(const SystemParams& p, double n_R, double alpha_R, double lambda_conv,
                          double S_hemt, double offset);

struct OccupationFit {
    double n_R = 0.0;
    double S_hemt = 0.0;
    double n_R_sigma = 0.0;
    double S_hemt_sigma = 0.0;
    double residual_norm = 0.0;
};

OccupationFit fit_output_occupation(const Spectrum& spec, const SystemParams& p,
                                    double lambda_conv, double alpha_R = 1.0);

struct ShuntModel {
    double C_out = 0.0; // F
    double R_L = 50.0;  // Ohm
};

// omega is the absolute drive frequency.
cplx s21_shunt(const SystemParams& p, const ShuntModel& shunt, double omega);
double transmission_correction(const SystemParams& p, const ShuntModel& shunt, double omega);
// 20 log10 |S21(omega_-)| / |S21(omega_+)|
double s21_ratio_db(const SystemParams& p, const ShuntModel& shunt, double delta);
// Delta(omega_-) from the measured (1 + Delta_-)/(1 + Delta_+) power ratio in dB,
// using Delta(omega_+) = -Delta(omega_-).
double correction_from_ratio_db(double ratio_db);

struct ShuntFit {
    double C_out = 0.0;
    double gain_db = 0.0;
    double C_out_sigma = 0.0;
    double residual_norm = 0.0;
};

// Trace offsets are omega - omega_c, values |S21| in dB.
ShuntFit fit_shunt_capacitance(const Spectrum& trace_db, const SystemParams& p, double R_L = 50.0);

struct SyntheticOptions {
    double noise = 0.0; // relative Gaussian noise on every synthetic measurement
    std::uint64_t seed = 0;
    double C_out = 2.7e-15;
    double lambda_conv = 0.27e18; // (W/Hz)^-1
    double gain_c = 1.0e6;
    double gain_plus = 1.1e6;
    double gain_minus = 0.9e6;
    double gain_db = -3.0;
    double S_hemt = 0.5 / 0.27e18; // W/Hz
    double delta_thermometry = from_hz(500.0);
    double n_p_thermometry = 100.0;
};

struct ThermometrySweep {
    std::vector<double> temperatures;
    std::vector<double> n_m;
    std::vector<double> P_m_plus, P_thru_plus, P_m_minus, P_thru_minus;
    LineFit fit_plus, fit_minus;
};

struct ClosureReport {
    ShuntFit shunt;
    double delta_plus = 0.0;
    double delta_minus = 0.0;
    LinewidthFit linewidth;
    double g0_linewidth = 0.0;
    ThermometrySweep thermometry;
    double g0_plus = 0.0;
    double g0_minus = 0.0;
    double g0 = 0.0;
    double conversion_plus = 0.0;  // n^+ per (P_m / P_thru)
    double conversion_minus = 0.0;
    double n_plus = 0.0;
    double n_minus = 0.0;
    double n_eff = 0.0;
    double n_eff_true = 0.0;
    OccupationFit occupation;
    double n_R_true = 0.0;
    Spectrum s21_trace;      // dB against offset from omega_c
    Spectrum floor_spectrum; // W/Hz against offset from omega_c
};

// Generates every measurement from the analytic modules and runs the chain:
// S21 fit, linewidth sweep, thermometry, sideband measurement, floor fit.
ClosureReport run_synthetic_closure(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                                    const SyntheticOptions& opt);

} // namespace sideband
