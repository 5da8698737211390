#include "sideband/scattering.hpp"

#include "sideband/errors.hpp"

#include <cmath>
#include <sstream>

namespace sideband {

namespace {

constexpr cplx I{0.0, 1.0};

struct Ports {
    double r, l, i;
};

Ports port_fractions(const SystemParams& p)
{
    const double k = p.kappa();
    return {p.kappa_R / k, p.kappa_L / k, p.kappa_I / k};
}

} // namespace

cplx intracavity_amplitude(const SystemParams& p, double detuning, cplx alpha_in)
{
    return std::sqrt(p.kappa_L) * alpha_in / cplx(0.5 * p.kappa(), -detuning);
}

double input_amplitude_for_photons(const SystemParams& p, double detuning, double n_p)
{
    if (n_p < 0.0)
        throw ConfigError("n_p must be non-negative");
    return std::sqrt(n_p) * std::abs(cplx(0.5 * p.kappa(), -detuning)) / std::sqrt(p.kappa_L);
}

cplx mech_denominator(double omega, DetuningSign sign, double omega_m, double gamma_m,
                      double gamma_opt)
{
    const double s = sign_value(sign);
    return cplx(0.5 * (gamma_m + s * gamma_opt), -(omega - s * omega_m));
}

double single_tone_gamma_tot(const SystemParams& p, const ToneSpec& tone, DetuningSign sign)
{
    const double g = p.gamma_m + sign_value(sign) * tone.gamma_opt(p);
    if (!(g > 0.0)) {
        std::ostringstream os;
        os << "lone blue tone: gamma_m - gamma_opt = " << g << " rad/s is not positive";
        throw InstabilityError(g, os.str());
    }
    return g;
}

void check_validity_window(const SystemParams& p, double offset, bool allow_outside_window)
{
    p.require_good_cavity();
    if (!allow_outside_window && !(std::abs(offset) < 0.25 * p.kappa())) {
        std::ostringstream os;
        os << "frequency window: offset " << offset << " rad/s from the cavity exceeds kappa/4 = "
           << 0.25 * p.kappa() << " rad/s";
        throw ValidityError(os.str());
    }
}

ScatteringMatrix scattering_matrix_at_offset(const SystemParams& p, const ToneSpec& tone,
                                             DetuningSign sign, double offset,
                                             bool allow_outside_window)
{
    check_validity_window(p, offset, allow_outside_window);
    single_tone_gamma_tot(p, tone, sign);
    const double s = sign_value(sign);
    const double gopt = tone.gamma_opt(p);
    const Ports f = port_fractions(p);
    const cplx N(0.5 * (p.gamma_m + s * gopt), -offset);
    const cplx L = gopt / N;
    const cplx M = I * std::sqrt(p.gamma_m * gopt) / N;

    ScatteringMatrix m;
    m.sign = sign;
    const double rl = std::sqrt(f.r * f.l);
    m.s[0] = {1.0 - 2.0 * f.r + s * f.r * L, rl * (-2.0 + s * L), std::sqrt(f.r) * M};
    m.s[1] = {rl * (-2.0 + s * L), 1.0 - 2.0 * f.l + s * f.l * L, std::sqrt(f.l) * M};
    m.s[2] = {std::sqrt(f.r) * M, std::sqrt(f.l) * M, 1.0 - p.gamma_m / N};
    m.intrinsic = {std::sqrt(f.r * f.i) * (-2.0 + s * L), std::sqrt(f.l * f.i) * (-2.0 + s * L),
                   std::sqrt(f.i) * M};
    return m;
}

ScatteringMatrix scattering_matrix(const SystemParams& p, const ToneSpec& tone, DetuningSign sign,
                                   double omega, bool allow_outside_window)
{
    return scattering_matrix_at_offset(p, tone, sign, omega - sign_value(sign) * p.omega_m,
                                       allow_outside_window);
}

double noise_floor(const SystemParams& p, const BathSpec& b)
{
    const double r = port_fractions(p).r;
    return 0.5 * b.alpha_R + b.n_R + 4.0 * r * (b.n_c(p) - b.n_R) +
           2.0 * r * (b.alpha_c(p) - b.alpha_R);
}

double spectrum_from_scattering(const ScatteringMatrix& m, const BathSpec& b, SpectrumKind kind)
{
    const double a11 = std::norm(m.s11());
    const double a12 = std::norm(m.s12());
    const double a1I = std::norm(m.s1I());
    const double a13 = std::norm(m.s13());
    if (kind == SpectrumKind::symmetrized)
        return a11 * (b.n_R + 0.5 * b.alpha_R) + a12 * (b.n_L + 0.5 * b.alpha_L) +
               a1I * (b.n_I + 0.5 * b.alpha_I) + a13 * (b.n_m + 0.5 * b.beta);
    const double mech = m.sign == DetuningSign::blue ? b.n_m + b.beta : b.n_m;
    return a11 * b.n_R + a12 * b.n_L + a1I * b.n_I + a13 * mech;
}

SingleToneLineshape single_tone_lineshape(const SystemParams& p, const BathSpec& b,
                                          const ToneSpec& tone, DetuningSign sign,
                                          SpectrumKind kind, LineshapeModel model)
{
    const double s = sign_value(sign);
    const double r = port_fractions(p).r;
    const double gopt = tone.gamma_opt(p);
    const double gtot = single_tone_gamma_tot(p, tone, sign);
    const bool exact = model == LineshapeModel::exact;
    const double drag = exact ? gopt / p.gamma_m : 0.0;

    SingleToneLineshape ls{};
    ls.gamma_tot = exact ? gtot : p.gamma_m;
    ls.prefactor = r * p.gamma_m * gopt;
    const double n_c = b.n_c(p);
    if (kind == SpectrumKind::symmetrized) {
        const double Nc = n_c + 0.5 * b.alpha_c(p);
        const double NR = b.n_R + 0.5 * b.alpha_R;
        ls.floor = noise_floor(p, b);
        ls.bracket = (b.n_m + 0.5 * b.beta) - s * (2.0 * Nc - NR) - drag * (Nc - NR);
    } else {
        ls.floor = b.n_R + 4.0 * r * (n_c - b.n_R);
        ls.bracket = b.n_m - s * b.n_eff(p) - drag * (n_c - b.n_R);
        if (sign == DetuningSign::blue)
            ls.bracket += b.beta;
    }
    return ls;
}

Spectrum single_tone_spectrum(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                              DetuningSign sign, SpectrumKind kind, const std::vector<double>& grid,
                              LineshapeModel model, bool allow_outside_window)
{
    const SingleToneLineshape ls = single_tone_lineshape(p, b, tone, sign, kind, model);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        check_validity_window(p, grid[i], allow_outside_window);
        v[i] = ls.at(grid[i]);
    }
    return Spectrum(grid, std::move(v));
}

Spectrum spectrum_by_scattering(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                                DetuningSign sign, SpectrumKind kind, const std::vector<double>& grid,
                                bool allow_outside_window)
{
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = spectrum_from_scattering(
            scattering_matrix_at_offset(p, tone, sign, grid[i], allow_outside_window), b, kind);
    return Spectrum(grid, std::move(v));
}

Spectrum imbalance(const SystemParams& p, const BathSpec& b, const ToneSpec& tone, SpectrumKind kind,
                   const std::vector<double>& grid, bool allow_outside_window)
{
    const Spectrum blue = single_tone_spectrum(p, b, tone, DetuningSign::blue, kind, grid,
                                               LineshapeModel::exact, allow_outside_window);
    const Spectrum red = single_tone_spectrum(p, b, tone, DetuningSign::red, kind, grid,
                                              LineshapeModel::exact, allow_outside_window);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        v[i] = blue.value(i) - red.value(i);
    return Spectrum(grid, std::move(v));
}

double integrated_asymmetry(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                            SpectrumKind kind)
{
    const double r = port_fractions(p).r;
    const double gopt = tone.gamma_opt(p);
    const double n_eff = b.n_eff(p);
    if (kind == SpectrumKind::symmetrized)
        return r * gopt * (2.0 * n_eff + b.alpha_c(p));
    return r * gopt * (2.0 * n_eff + b.beta);
}

double output_commutator_at_offset(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                                   DetuningSign sign, double offset, bool allow_outside_window)
{
    check_validity_window(p, offset, allow_outside_window);
    const double s = sign_value(sign);
    const double r = port_fractions(p).r;
    const double gopt = tone.gamma_opt(p);
    const double gtot = single_tone_gamma_tot(p, tone, sign);
    const double Ac = b.alpha_c(p);
    const double lor = r * p.gamma_m * gopt / (offset * offset + 0.25 * gtot * gtot);
    const double inner = (b.beta - Ac) + (b.alpha_R - Ac) * (1.0 + s * gopt / p.gamma_m);
    return b.alpha_R + 4.0 * r * (Ac - b.alpha_R) + s * lor * inner;
}

double output_commutator(const SystemParams& p, const BathSpec& b, const ToneSpec& tone,
                         DetuningSign sign, double omega, bool allow_outside_window)
{
    return output_commutator_at_offset(p, b, tone, sign, omega - sign_value(sign) * p.omega_m,
                                       allow_outside_window);
}

} // namespace sideband
