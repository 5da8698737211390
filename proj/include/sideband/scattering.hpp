#pragma once

#include "sideband/model.hpp"

#include <array>
#include <complex>
#include <vector>

namespace sideband {

using cplx = std::complex<double>;

// red: pump at omega_c - omega_m (Delta = +omega_m); blue: Delta = -omega_m.
enum class DetuningSign : int { red = +1, blue = -1 };
enum class SpectrumKind { symmetrized, normal_ordered };
enum class LineshapeModel { exact, weak_coupling };

constexpr double sign_value(DetuningSign s) { return static_cast<double>(static_cast<int>(s)); }

// Single-tone scattering matrix in the basis (d_R, d_L, c or c^dag). The
// intrinsic-loss input enters through a fourth column.
struct ScatteringMatrix {
    std::array<std::array<cplx, 3>, 3> s{};
    std::array<cplx, 3> intrinsic{};
    DetuningSign sign = DetuningSign::red;

    cplx s11() const { return s[0][0]; }
    cplx s12() const { return s[0][1]; }
    cplx s13() const { return s[0][2]; }
    cplx s1I() const { return intrinsic[0]; }
};

// abar_n = sqrt(kappa_L) alpha_n / (kappa/2 - i detuning)
cplx intracavity_amplitude(const SystemParams& p, double detuning, cplx alpha_in);
// |alpha_in| that produces n_p intracavity photons.
double input_amplitude_for_photons(const SystemParams& p, double detuning, double n_p);

// N^{+-}[omega] = -i(omega -+ omega_m) + (gamma_m +- gamma_opt)/2
cplx mech_denominator(double omega, DetuningSign sign, double omega_m, double gamma_m,
                      double gamma_opt);

// omega in the rotating frame of the pump, where the cavity sits at sign*omega_m.
ScatteringMatrix scattering_matrix(const SystemParams& p, const ToneSpec& tone, DetuningSign sign,
                                   double omega, bool allow_outside_window = false);
// Same matrix addressed by the offset omega - sign*omega_m from the cavity.
ScatteringMatrix scattering_matrix_at_offset(const SystemParams& p, const ToneSpec& tone,
                                             DetuningSign sign, double offset,
                                             bool allow_outside_window = false);

// Background of the symmetrized spectrum.
double noise_floor(const SystemParams& p, const BathSpec& b);

// One spectral value from the output row.
double spectrum_from_scattering(const ScatteringMatrix& m, const BathSpec& b, SpectrumKind kind);

// Closed-form Lorentzian spectrum on a grid of offsets omega - omega_c.
Spectrum single_tone_spectrum(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                              DetuningSign sign, SpectrumKind kind, const std::vector<double>& grid,
                              LineshapeModel model = LineshapeModel::exact,
                              bool allow_outside_window = false);

// Same grid evaluated through the scattering row.
Spectrum spectrum_by_scattering(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                                DetuningSign sign, SpectrumKind kind, const std::vector<double>& grid,
                                bool allow_outside_window = false);

struct SingleToneLineshape {
    double floor;
    double gamma_tot;  // full width of the Lorentzian
    double bracket;    // occupation factor multiplying the Lorentzian
    double prefactor;  // kappa_R/kappa gamma_m gamma_opt
    double peak() const { return prefactor * bracket * 4.0 / (gamma_tot * gamma_tot); }
    // integral over d omega / 2 pi of the Lorentzian part
    double weight() const { return prefactor * bracket / gamma_tot; }
    double at(double offset) const
    {
        return floor + prefactor * bracket / (offset * offset + 0.25 * gamma_tot * gamma_tot);
    }
};

SingleToneLineshape single_tone_lineshape(const SystemParams& p, const BathSpec& b,
                                          const ToneSpec& tone, DetuningSign sign,
                                          SpectrumKind kind,
                                          LineshapeModel model = LineshapeModel::exact);

// Blue minus red, both on the same offset grid.
Spectrum imbalance(const SystemParams& p, const BathSpec& b, const ToneSpec& tone, SpectrumKind kind,
                   const std::vector<double>& grid, bool allow_outside_window = false);

// Weak-coupling integrated imbalance.
double integrated_asymmetry(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                            SpectrumKind kind);
// gamma_opt / gamma_m below which integrated_asymmetry is trustworthy
inline constexpr double weak_coupling_limit = 1e-2;

// Coefficient of delta(omega + Omega) in [d_out, d_out^dag].
double output_commutator(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                         DetuningSign sign, double omega, bool allow_outside_window = false);
double output_commutator_at_offset(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                                   DetuningSign sign, double offset,
                                   bool allow_outside_window = false);

// gamma_m +- gamma_opt; throws InstabilityError if not positive.
double single_tone_gamma_tot(const SystemParams& p, const ToneSpec& tone, DetuningSign sign);

void check_validity_window(const SystemParams& p, double offset, bool allow_outside_window);

} // namespace sideband
