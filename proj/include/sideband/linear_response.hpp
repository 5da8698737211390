#pragma once

#include "sideband/model.hpp"
#include "sideband/scattering.hpp"

#include <vector>

namespace sideband {

// Detector correlators of the driven cavity at one frequency. chi_IF and the
// force spectra carry 1/x_zp; with x_zp absent they are in x_zp units.
struct DetectorNoise {
    cplx chi_IF;
    double S_II = 0.0;
    double S_II_image = 0.0; // part of S_II from the far-detuned band
    double S_FF = 0.0;
    cplx S_IF;
    cplx S_zF;
    double evaluated_at = 0.0;
};

// (1/m) / ((omega^2 - omega_m^2) + i omega gamma_m)
cplx chi_xx(double omega, double m, double omega_m, double gamma_m);

// m = 1 / (2 omega_m x_zp^2) with hbar = 1
double mechanical_mass(const SystemParams& p);

// [-i(omega - Delta) + kappa/2]^-1, Delta = sign * omega_m
cplx cavity_susceptibility(const SystemParams& p, DetuningSign sign, double omega);

// image_band = false drops the cavity susceptibility of the far-detuned band,
// which is O(kappa / omega_m) near resonance.
DetectorNoise detector_correlators(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                                   DetuningSign sign, double omega, bool image_band = true);
// Evaluated at the mechanical resonance omega = omega_m in the good-cavity
// limit, without the image-band susceptibility.
DetectorNoise detector_correlators_at_resonance(const SystemParams& p, const BathSpec& b,
                                                const ToneSpec& tone, DetuningSign sign);

// |chi_xx|^2 S_FF at the mechanical frequency omega.
double backaction_spectrum(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                           DetuningSign sign, double omega);

// Grid holds offsets omega - omega_c, mapped to the mechanical frequency
// |offset + sign*omega_m|.
Spectrum sxx_effective(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                       DetuningSign sign, const std::vector<double>& grid,
                       bool include_backaction = false);

Spectrum output_spectrum_lr(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                            DetuningSign sign, const std::vector<double>& grid);

struct HeisenbergReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double gap = 0.0;
    bool satisfied = false;
};

// (|1 + y^2| - (1 + |y|^2)) / 2
double delta_factor(cplx y);

HeisenbergReport heisenberg_gap(double S_zz, double S_FF, cplx S_zF);

struct NoiseConstraint {
    DetectorNoise detector;
    double S_zz = 0.0;
    HeisenbergReport report;
};

NoiseConstraint noise_constraint(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                                 DetuningSign sign);

} // namespace sideband
