#pragma once

#include "sideband/model.hpp"
#include "sideband/scattering.hpp"

#include <vector>

namespace sideband {

// Grid of 4001 offsets spanning +-4 delta.
std::vector<double> default_multitone_grid(double delta);

// Mechanical position spectrum on a grid of offsets from omega_m, in units of
// x_zp^2 (or m^2 s when x_zp is set).
Spectrum sxx_spectrum(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                      const std::vector<double>& grid);

double averaged_occupation(const SystemParams& p, const BathSpec& b, const ToneConfig& c);

struct MultitoneSpectra {
    Spectrum anti_stokes; // centred at -delta
    Spectrum stokes;      // centred at +delta
    double floor = 0.0;
    double gamma_tot = 0.0;
    double n_bar_m = 0.0;
    double gamma_plus = 0.0;
    double gamma_minus = 0.0;
    // integrals of the Lorentzian parts over d omega / 2 pi
    double anti_stokes_weight = 0.0;
    double stokes_weight = 0.0;
    // occupations read off the analytic weights, weight / (kappa_R/kappa gamma_opt)
    double n_plus = 0.0;
    double n_minus = 0.0;
};

MultitoneSpectra multitone_spectra(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                                   SpectrumKind kind, const std::vector<double>& grid);

double multitone_integrated_asymmetry(const SystemParams& p, const BathSpec& b,
                                      const ToneConfig& c);

// n^- / n^+ = 1 + (2 n_eff + 1) / n^+
double sideband_ratio_model(double n_m_plus, double n_eff);

struct TwinPeakComponents {
    Spectrum total;
    Spectrum floor;
    Spectrum mixing;
    Spectrum stokes;
    Spectrum anti_stokes;
};

// Complete RWA spectrum for balanced probes, symmetrized.
TwinPeakComponents full_rwa_components(const SystemParams& p, const BathSpec& b,
                                       const ToneConfig& c, const std::vector<double>& grid);
Spectrum full_rwa_spectrum(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                           const std::vector<double>& grid);

enum class Sideband { stokes, anti_stokes };

// (S(+-delta) - S0) / single-Lorentzian peak for the complete spectrum.
double peak_ratio_correction(const SystemParams& p, const BathSpec& b, const ToneConfig& c,
                             Sideband side);

} // namespace sideband
