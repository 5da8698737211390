#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sideband {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_boltzmann = 1.380649e-23; // J/K

constexpr double from_hz(double f) { return two_pi * f; }
constexpr double to_hz(double w) { return w / two_pi; }

// Thermal occupation 1/(exp(hbar w / k T) - 1).
double bose_occupation(double omega, double temperature);

// Device constants. All rates in rad/s.
struct SystemParams {
    double omega_c = 0.0;
    double omega_m = 0.0;
    double g0 = 0.0;
    double kappa_L = 0.0;
    double kappa_R = 0.0;
    double kappa_I = 0.0;
    double gamma_m = 0.0;
    std::optional<double> x_zp; // metres

    double kappa() const { return kappa_L + kappa_R + kappa_I; }
    double x_zp_or_unit() const { return x_zp.value_or(1.0); }

    void validate() const;
    // Throws ValidityError unless omega_m > kappa.
    void require_good_cavity() const;
};

// Input-channel occupations and vacuum weights.
struct BathSpec {
    double n_R = 0.0;
    double n_L = 0.0;
    double n_I = 0.0;
    double n_m = 0.0;
    double alpha_R = 1.0;
    double alpha_L = 1.0;
    double alpha_I = 1.0;
    double beta = 1.0;

    double n_c(const SystemParams& p) const;
    double n_eff(const SystemParams& p) const { return 2.0 * n_c(p) - n_R; }
    // kappa-weighted vacuum weight of the cavity inputs
    double alpha_c(const SystemParams& p) const;
    bool unit_vacuum_weights() const;

    void validate() const;
    static BathSpec vacuum() { return {}; }
};

enum class ToneRole { red_probe, blue_probe, cooling, generic };

std::string_view to_string(ToneRole role);
ToneRole tone_role_from_string(std::string_view name);

// One drive tone. Exactly one of n_p or G is stored; the other is derived
// through G = g0 sqrt(n_p).
class ToneSpec {
public:
    static ToneSpec from_photons(ToneRole role, double detuning, double n_p);
    static ToneSpec from_coupling(ToneRole role, double detuning, double G);

    ToneRole role() const { return role_; }
    // omega_p - omega_c
    double detuning() const { return detuning_; }
    bool given_as_photons() const { return by_photons_; }

    double photon_number(const SystemParams& p) const;
    double coupling(const SystemParams& p) const;
    double gamma_opt(const SystemParams& p) const;

    // true when the tone sits below the cavity, i.e. damps the mechanics
    bool red_side() const { return detuning_ < 0.0; }

private:
    ToneSpec(ToneRole role, double detuning, double value, bool by_photons)
        : role_(role), detuning_(detuning), value_(value), by_photons_(by_photons)
    {
    }

    ToneRole role_;
    double detuning_;
    double value_;
    bool by_photons_;
};

struct ToneConfig {
    std::vector<ToneSpec> tones;
    double delta = 0.0;
    double delta_c = 0.0;
    bool allow_close_sidebands = false;

    const ToneSpec* find(ToneRole role) const;
    bool has_probe_pair() const;

    // Checks tone placement against delta / delta_c and the separation gate
    // delta_c > delta > 10 gamma_m.
    void validate(const SystemParams& p) const;

    static ToneConfig single(const ToneSpec& tone);
};

struct ProbeDrive {
    bool by_photons = true;
    double value = 0.0;
};

// Probes at -+(omega_m + delta), optional cooling tone at -(omega_m + delta_c).
ToneConfig three_tone(const SystemParams& p, ProbeDrive red, ProbeDrive blue,
                      std::optional<ProbeDrive> cooling, double delta, double delta_c);

struct EffectiveMechanics {
    double gamma_M;
    double n_M;
};

EffectiveMechanics derive_effective_mechanics(const SystemParams& p, const BathSpec& b,
                                              const ToneSpec& cooling);

// Optical rates of a tone configuration. Tones are sorted by role; generic
// tones count as probes on the side given by their detuning sign.
struct DampingBudget {
    double gamma_plus = 0.0;  // red probe damping
    double gamma_minus = 0.0; // blue probe anti-damping
    double gamma_cool = 0.0;
    double gamma_M = 0.0;
    double n_M = 0.0;
    double gamma_tot = 0.0;
};

DampingBudget damping_budget(const SystemParams& p, const BathSpec& b, const ToneConfig& c);

// Returns gamma_tot; throws InstabilityError when it is not positive.
double validate_stability(const SystemParams& p, const ToneConfig& c);

class Spectrum {
public:
    Spectrum() = default;
    Spectrum(std::vector<double> offsets, std::vector<double> values);

    const std::vector<double>& offsets() const { return offsets_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return offsets_.size(); }
    double offset(std::size_t i) const { return offsets_[i]; }
    double value(std::size_t i) const { return values_[i]; }

private:
    std::vector<double> offsets_;
    std::vector<double> values_;
};

std::vector<double> linear_grid(double lo, double hi, std::size_t n);

} // namespace sideband
